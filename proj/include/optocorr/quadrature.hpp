#pragma once

// Globally adaptive Gauss-Kronrod (7, 15) integration of vector-valued
// integrands. All components share one subdivision; the interval with the
// largest scaled error is bisected until every component meets its target.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "optocorr/error.hpp"

namespace optocorr::quadrature {

namespace detail {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Weights of the embedded 7-point Gauss rule on nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

} // namespace detail

template <int N> using Vec = Eigen::Matrix<double, N, 1>;

template <int N> struct Segment {
    double a = 0.0;
    double b = 0.0;
    Vec<N> value = Vec<N>::Zero();
    Vec<N> error = Vec<N>::Zero();
    double priority = 0.0;
};

template <int N, class F> Segment<N> gauss_kronrod15(F &f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const Vec<N> fc = f(center);
    Vec<N> kronrod = detail::kronrod_weights[7] * fc;
    Vec<N> gauss = detail::gauss_weights[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * detail::kronrod_nodes[j];
        const Vec<N> sum = f(center - dx) + f(center + dx);
        kronrod += detail::kronrod_weights[j] * sum;
        if (j % 2 == 1)
            gauss += detail::gauss_weights[j / 2] * sum;
    }
    Segment<N> s;
    s.a = a;
    s.b = b;
    s.value = half * kronrod;
    s.error = (half * (kronrod - gauss)).cwiseAbs();
    return s;
}

template <int N> struct Result {
    Vec<N> value = Vec<N>::Zero();
    Vec<N> error = Vec<N>::Zero();
    std::size_t intervals = 0;
    std::size_t evaluations = 0;
};

struct Options {
    double rel_tol = 1e-9;        ///< per component, relative to the largest |component|
    double abs_floor = 1e-300;    ///< absolute error always accepted
    std::size_t max_intervals = 20000;
};

/// Integrates f over the union of [breaks[i], breaks[i+1]]. Throws
/// IntegrationFailureError naming the worst component if the interval budget
/// is exhausted.
template <int N, class F>
Result<N> integrate(F &&f, std::span<const double> breaks, const Options &opt = {}) {
    if (breaks.size() < 2)
        throw InvalidInputError("quadrature: need at least two breakpoints");
    std::size_t evaluations = 0;
    auto counted = [&](double x) -> Vec<N> {
        ++evaluations;
        return f(x);
    };

    auto cmp = [](const Segment<N> &x, const Segment<N> &y) { return x.priority < y.priority; };
    std::priority_queue<Segment<N>, std::vector<Segment<N>>, decltype(cmp)> heap(cmp);

    Vec<N> total = Vec<N>::Zero();
    Vec<N> total_err = Vec<N>::Zero();
    std::vector<Segment<N>> initial;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i] < breaks[i + 1]))
            throw InvalidInputError("quadrature: breakpoints must be strictly increasing");
        initial.push_back(gauss_kronrod15<N>(counted, breaks[i], breaks[i + 1]));
        total += initial.back().value;
        total_err += initial.back().error;
    }

    auto targets = [&]() {
        const double scale = total.cwiseAbs().maxCoeff();
        return std::max(opt.abs_floor, opt.rel_tol * scale);
    };
    auto push = [&](Segment<N> s) {
        s.priority = s.error.maxCoeff();
        heap.push(std::move(s));
    };
    for (auto &s : initial)
        push(std::move(s));

    std::size_t intervals = heap.size();
    while (true) {
        const double target = targets();
        if (total_err.maxCoeff() <= target)
            break;
        if (intervals >= opt.max_intervals) {
            Eigen::Index worst = 0;
            total_err.maxCoeff(&worst);
            throw IntegrationFailureError("quadrature: no convergence within interval budget",
                                          static_cast<std::size_t>(worst));
        }
        Segment<N> top = heap.top();
        heap.pop();
        const double mid = 0.5 * (top.a + top.b);
        Segment<N> left = gauss_kronrod15<N>(counted, top.a, mid);
        Segment<N> right = gauss_kronrod15<N>(counted, mid, top.b);
        total += left.value + right.value - top.value;
        total_err += left.error + right.error - top.error;
        push(std::move(left));
        push(std::move(right));
        ++intervals;
    }

    // Resum from the leaves to drop the drift of the running updates.
    Result<N> res;
    while (!heap.empty()) {
        res.value += heap.top().value;
        res.error += heap.top().error;
        heap.pop();
    }
    res.intervals = intervals;
    res.evaluations = evaluations;
    return res;
}

} // namespace optocorr::quadrature
