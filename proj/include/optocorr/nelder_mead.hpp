#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>

namespace optocorr {

template <std::size_t N> struct SimplexResult {
    std::array<double, N> x{};
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Minimizes f from `start` with the standard Nelder-Mead moves
/// (reflect 1, expand 2, contract 1/2, shrink 1/2). Stops once the simplex
/// diameter in every coordinate drops below `xtol`.
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F &&f, const std::array<double, N> &start,
                             const std::array<double, N> &step, double xtol,
                             std::size_t max_iter = 5000) {
    using Point = std::array<double, N>;
    std::array<Point, N + 1> pts;
    std::array<double, N + 1> vals;
    pts[0] = start;
    for (std::size_t i = 0; i < N; ++i) {
        pts[i + 1] = start;
        pts[i + 1][i] += step[i];
    }
    for (std::size_t i = 0; i <= N; ++i)
        vals[i] = f(pts[i]);

    auto lerp = [](const Point &a, const Point &b, double t) {
        Point out;
        for (std::size_t k = 0; k < N; ++k)
            out[k] = a[k] + t * (b[k] - a[k]);
        return out;
    };

    SimplexResult<N> res;
    std::array<std::size_t, N + 1> order;
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[N - 1];

        double diameter = 0.0;
        for (std::size_t i = 0; i <= N; ++i)
            for (std::size_t k = 0; k < N; ++k)
                diameter = std::max(diameter, std::abs(pts[i][k] - pts[best][k]));
        res.iterations = it;
        if (diameter < xtol) {
            res.converged = true;
            break;
        }

        Point centroid{};
        for (std::size_t i = 0; i <= N; ++i) {
            if (i == worst)
                continue;
            for (std::size_t k = 0; k < N; ++k)
                centroid[k] += pts[i][k] / static_cast<double>(N);
        }

        const Point reflected = lerp(centroid, pts[worst], -1.0);
        const double fr = f(reflected);
        if (fr < vals[best]) {
            const Point expanded = lerp(centroid, pts[worst], -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[worst] = expanded;
                vals[worst] = fe;
            } else {
                pts[worst] = reflected;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = reflected;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        const Point contracted = lerp(centroid, outside ? reflected : pts[worst], 0.5);
        const double fc = f(contracted);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = contracted;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= N; ++i) {
            if (i == best)
                continue;
            pts[i] = lerp(pts[best], pts[i], 0.5);
            vals[i] = f(pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());
    res.x = pts[best];
    res.value = vals[best];
    return res;
}

} // namespace optocorr
