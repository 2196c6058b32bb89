#include "calogero/constants.hpp"

#include "calogero/errors.hpp"
#include "calogero/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace calogero {

namespace {

double distance_to_integer(double x) { return std::abs(x - std::round(x)); }

void require_noninteger_flux(double psi) {
    if (!std::isfinite(psi) || distance_to_integer(psi) <= kIntegerFluxTolerance)
        throw FluxDegenerateError("flux " + std::to_string(psi) +
                                  " is an integer (within 1e-9); flux constants diverge");
}

// Hardy weight fed to R after rescaling a cell (a^k, a^{k+1}) onto (1, a).
double rescaled_weight(double a, double b) { return 4.0 * (a - 1.0) * (a - 1.0) * b / (a * a); }

}  // namespace

std::string_view to_string(TheoremKind kind) {
    switch (kind) {
        case TheoremKind::HalfPlane: return "half_plane";
        case TheoremKind::AharonovBohm: return "aharonov_bohm";
        case TheoremKind::Antisymmetric: return "antisymmetric";
        case TheoremKind::OperatorCalogero: return "operator_calogero";
    }
    return "unknown";
}

TheoremKind theorem_kind_from_string(std::string_view name) {
    for (auto k : {TheoremKind::HalfPlane, TheoremKind::AharonovBohm, TheoremKind::Antisymmetric,
                   TheoremKind::OperatorCalogero})
        if (to_string(k) == name) return k;
    throw DomainError("unknown theorem '" + std::string(name) + "'");
}

double eval_R(double b) {
    if (!(b > 0.0)) throw DomainError("eval_R: Hardy weight must be positive");
    return std::sqrt((b + 4.0 * kPi * kPi) / (kPi * kPi * b));
}

double eval_g(double y) {
    if (!(y >= 0.0)) throw DomainError("eval_g: argument must be nonnegative");
    if (y == 0.0) return 0.0;
    if (!std::isfinite(y)) return y;

    // x tanh x <= x^2 gives the lower end; x tanh x >= y at max(sqrt y, y) + 1.
    double lo = std::sqrt(y);
    double hi = std::max(lo, y) + 1.0;
    auto f = [y](double x) { return x * std::tanh(x) - y; };
    for (int i = 0; i < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        const double t = std::tanh(x);
        const double df = t + x * (1.0 - t * t);
        if (df <= 0.0) break;
        const double next = x - f(x) / df;
        if (next < lo || next > hi) break;
        x = next;
    }
    return x;
}

FluxData flux_constants(double psi) {
    require_noninteger_flux(psi);
    FluxData fd;
    fd.psi = psi;
    const double dist = distance_to_integer(psi);
    fd.c_psi = dist * dist;
    const double s = std::sin(kPi * dist);
    fd.g0 = kPi / (2.0 * s * s);
    fd.epsilon = std::min(3.0, 8.0 * s * s);  // 4 pi / g0
    fd.d_psi = 4.0 * eval_g(fd.epsilon) / fd.epsilon;
    return fd;
}

double g0_series(double psi, long n_terms) {
    require_noninteger_flux(psi);
    if (n_terms < 1) throw DomainError("g0_series: need at least one term");
    // Accumulate smallest terms first.
    double sum = 0.0;
    for (long n = n_terms; n >= 1; --n) {
        const double p = static_cast<double>(n) + psi;
        const double m = -static_cast<double>(n) + psi;
        sum += 1.0 / (p * p) + 1.0 / (m * m);
    }
    sum += 1.0 / (psi * psi);
    return sum / (2.0 * kPi);
}

double theorem_constant(const TheoremId& id, const SplitParams& p) {
    if (!p.valid())
        throw DomainError("theorem_constant: need a > 1 and 0 < theta < 1");
    const double a = p.a, th = p.theta;
    const double kinetic = 1.0 - th;
    switch (id.kind) {
        case TheoremKind::OperatorCalogero:
            return a * eval_R(rescaled_weight(a, th / (4.0 * kinetic))) / std::sqrt(kinetic);
        case TheoremKind::HalfPlane:
            return 0.5 * a * eval_R(rescaled_weight(a, th / (4.0 * kinetic))) / std::sqrt(kinetic);
        case TheoremKind::Antisymmetric:
            return 0.5 * std::pow(a, 1.5) * eval_R(rescaled_weight(a, th / kinetic)) / kinetic;
        case TheoremKind::AharonovBohm: {
            if (!id.flux) throw DomainError("theorem_constant: Aharonov-Bohm needs flux data");
            const FluxData& f = *id.flux;
            return std::pow(a, 1.5) * eval_R(rescaled_weight(a, f.c_psi * th / kinetic)) / kinetic *
                   f.d_psi;
        }
    }
    throw DomainError("theorem_constant: unknown theorem");
}

OptimizedConstant optimize_constant(const TheoremId& id) {
    constexpr double kLogAMax = 4.1588830833596715;  // ln 64
    constexpr double kThetaLo = 0.01, kThetaHi = 0.99;
    constexpr int kGrid = 16;
    constexpr int kStarts = 4;

    using Vec2 = Eigen::Vector2d;
    // Optimize in (log a, theta); leave the open box by returning +inf.
    auto objective = [&](const Vec2& x) {
        if (!(x[0] > 0.0 && x[0] <= kLogAMax && x[1] > 0.0 && x[1] < 1.0))
            return std::numeric_limits<double>::infinity();
        return theorem_constant(id, {std::exp(x[0]), x[1]});
    };

    struct Start {
        Vec2 x;
        double f;
    };
    std::vector<Start> starts;
    starts.reserve(kGrid * kGrid);
    for (int i = 1; i <= kGrid; ++i)
        for (int j = 0; j < kGrid; ++j) {
            const Vec2 x(kLogAMax * i / kGrid, kThetaLo + (kThetaHi - kThetaLo) * j / (kGrid - 1));
            starts.push_back({x, objective(x)});
        }
    std::partial_sort(starts.begin(), starts.begin() + kStarts, starts.end(),
                      [](const Start& l, const Start& r) { return l.f < r.f; });

    const Vec2 step(kLogAMax / kGrid, (kThetaHi - kThetaLo) / kGrid);
    Vec2 best = starts[0].x;
    double best_f = starts[0].f;
    for (int s = 0; s < kStarts; ++s) {
        auto res = nelder_mead<double, 2>(objective, starts[s].x, step);
        // Restart once from the result to shake off a collapsed simplex.
        res = nelder_mead<double, 2>(objective, res.x, Vec2(step * 0.05));
        if (res.value < best_f) {
            best_f = res.value;
            best = res.x;
        }
    }
    return {{std::exp(best[0]), best[1]}, best_f};
}

}  // namespace calogero
