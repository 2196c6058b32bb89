#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace calogero {

inline constexpr double kPi = 3.14159265358979323846;

/// Decomposition base `a` of the geometric interval split (a^k, a^{k+1}) and
/// the fraction `theta` of kinetic energy traded for the Hardy term.
struct SplitParams {
    double a = 2.0;
    double theta = 0.5;

    bool valid() const { return a > 1.0 && theta > 0.0 && theta < 1.0; }
};

/// Flux Psi with the derived constants of the Aharonov-Bohm ring operator.
struct FluxData {
    double psi = 0.5;
    double c_psi = 0.25;    ///< Hardy constant min_k (Psi+k)^2
    double g0 = kPi / 2.0;  ///< diagonal of the zero-energy Green function
    double epsilon = 3.0;   ///< per-interval budget min(3, 4 pi / g0)
    double d_psi = 0.0;     ///< half-moment Lieb-Thirring constant 4 g(eps) / eps
};

enum class TheoremKind { HalfPlane, AharonovBohm, Antisymmetric, OperatorCalogero };

struct TheoremId {
    TheoremKind kind = TheoremKind::OperatorCalogero;
    std::optional<FluxData> flux;  // engaged iff kind == AharonovBohm

    static TheoremId half_plane() { return {TheoremKind::HalfPlane, std::nullopt}; }
    static TheoremId antisymmetric() { return {TheoremKind::Antisymmetric, std::nullopt}; }
    static TheoremId operator_calogero() { return {TheoremKind::OperatorCalogero, std::nullopt}; }
    static TheoremId aharonov_bohm(const FluxData& f) { return {TheoremKind::AharonovBohm, f}; }
};

std::string_view to_string(TheoremKind kind);
/// Accepts the snake_case names produced by to_string; throws DomainError otherwise.
TheoremKind theorem_kind_from_string(std::string_view name);

/// Upper bound on the lattice-count constant: sqrt((b + 4 pi^2) / (pi^2 b)).
double eval_R(double b);

/// Inverse of x tanh x on [0, inf).
double eval_g(double y);

/// Distance-to-integer guard used by every flux-dependent routine.
inline constexpr double kIntegerFluxTolerance = 1e-9;

FluxData flux_constants(double psi);

/// Truncated Fourier series (1/2pi) sum_{|n|<=n_terms} (n+psi)^{-2}.
double g0_series(double psi, long n_terms);

/// Bound constant of the given theorem as a function of the split parameters.
double theorem_constant(const TheoremId& id, const SplitParams& p);

struct OptimizedConstant {
    SplitParams params;
    double value;
};

/// Minimizes theorem_constant over (a, theta) in (1, 64] x (0, 1):
/// coarse multi-start grid followed by simplex refinement.
OptimizedConstant optimize_constant(const TheoremId& id);

}  // namespace calogero
