#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace calogero {

template <typename Scalar, int Dim>
struct SimplexResult {
    Eigen::Matrix<Scalar, Dim, 1> x;
    Scalar value;
    int iterations;
    bool converged;
};

struct SimplexOptions {
    int max_iterations = 2000;
    double x_tolerance = 1e-11;
    double f_tolerance = 1e-13;
};

/// Nelder-Mead downhill simplex for a fixed, small dimension.
///
/// `objective` may return +inf to reject a vertex (used for box constraints).
/// The initial simplex is `start` plus `step[i]` along each coordinate axis.
template <typename Scalar, int Dim, typename Objective>
SimplexResult<Scalar, Dim> nelder_mead(Objective&& objective,
                                       const Eigen::Matrix<Scalar, Dim, 1>& start,
                                       const Eigen::Matrix<Scalar, Dim, 1>& step,
                                       const SimplexOptions& opts = {}) {
    static_assert(Dim > 0, "nelder_mead needs a fixed dimension");
    using Point = Eigen::Matrix<Scalar, Dim, 1>;
    constexpr Scalar kReflect = 1, kExpand = 2, kContract = 0.5, kShrink = 0.5;

    std::array<Point, Dim + 1> vertex;
    std::array<Scalar, Dim + 1> fval;
    vertex[0] = start;
    for (int i = 0; i < Dim; ++i) {
        vertex[i + 1] = start;
        vertex[i + 1][i] += step[i];
    }
    for (int i = 0; i <= Dim; ++i) fval[i] = objective(vertex[i]);

    std::array<int, Dim + 1> order;
    int iter = 0;
    bool converged = false;
    for (; iter < opts.max_iterations; ++iter) {
        for (int i = 0; i <= Dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int l, int r) { return fval[l] < fval[r]; });
        const int best = order[0], worst = order[Dim], second = order[Dim - 1];

        Scalar spread_x = 0;
        for (int i = 1; i <= Dim; ++i)
            spread_x = std::max(spread_x, (vertex[order[i]] - vertex[best]).cwiseAbs().maxCoeff());
        const Scalar spread_f = std::abs(fval[worst] - fval[best]);
        if (spread_x <= opts.x_tolerance && spread_f <= opts.f_tolerance) {
            converged = true;
            break;
        }

        Point centroid = Point::Zero();
        for (int i = 0; i < Dim; ++i) centroid += vertex[order[i]];
        centroid /= Scalar(Dim);

        const Point reflected = centroid + kReflect * (centroid - vertex[worst]);
        const Scalar f_reflected = objective(reflected);
        if (f_reflected < fval[best]) {
            const Point expanded = centroid + kExpand * (reflected - centroid);
            const Scalar f_expanded = objective(expanded);
            if (f_expanded < f_reflected) {
                vertex[worst] = expanded;
                fval[worst] = f_expanded;
            } else {
                vertex[worst] = reflected;
                fval[worst] = f_reflected;
            }
            continue;
        }
        if (f_reflected < fval[second]) {
            vertex[worst] = reflected;
            fval[worst] = f_reflected;
            continue;
        }
        // Outside contraction if the reflection helped at all, inside otherwise.
        const bool outside = f_reflected < fval[worst];
        const Point contracted = outside ? Point(centroid + kContract * (reflected - centroid))
                                         : Point(centroid + kContract * (vertex[worst] - centroid));
        const Scalar f_contracted = objective(contracted);
        if (f_contracted < (outside ? f_reflected : fval[worst])) {
            vertex[worst] = contracted;
            fval[worst] = f_contracted;
            continue;
        }
        for (int i = 1; i <= Dim; ++i) {
            const int k = order[i];
            vertex[k] = vertex[best] + kShrink * (vertex[k] - vertex[best]);
            fval[k] = objective(vertex[k]);
        }
    }

    const int best = static_cast<int>(std::min_element(fval.begin(), fval.end()) - fval.begin());
    return {vertex[best], fval[best], iter, converged};
}

}  // namespace calogero
