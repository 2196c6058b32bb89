#pragma once

#include "calogero/banded.hpp"
#include "calogero/constants.hpp"
#include "calogero/potentials.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <vector>

namespace calogero {

enum class Boundary {
    DirichletLeft,   ///< Dirichlet at both ends (the right end is domain truncation)
    NeumannBoth,
    TwistedPeriodic  ///< u_n = e^{i twist} u_0; stored as a real doubling embedding when factored
};

/// Symmetric three-point operator. For TwistedPeriodic, off has n entries and
/// off[n-1] is the magnitude of the wrap link (n-1, 0), which carries the phase
/// e^{i twist}; otherwise off has n-1 entries.
struct TridiagonalOperator {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;
    double h = 0.0;
    Boundary bc = Boundary::DirichletLeft;
    double twist = 0.0;

    Eigen::Index size() const { return diag.size(); }
    /// Multiplicity of every eigenvalue in the real matrix that gets factored.
    int embedding_multiplicity() const { return bc == Boundary::TwistedPeriodic ? 2 : 1; }
};

/// -(1/r^p)(r^p u')' + nu / r^2 - V(r) on (0, domain_radius] with Dirichlet at both ends.
struct RadialModeOperator {
    double nu = 0.0;
    RadialPotential potential;
    double domain_radius = 1.0;
    int weight_exponent = 1;  ///< 0: L^2(dr), 1: L^2(r dr)
};

struct HalfPlaneGrid {
    double length1 = 1.0;      ///< domain [0, length1] in x1
    double half_width2 = 1.0;  ///< domain [-half_width2, half_width2] in x2
    Eigen::Index n1 = 16;      ///< interior nodes along x1
    Eigen::Index n2 = 16;      ///< interior nodes along x2 (= half-bandwidth)
};

inline constexpr Eigen::Index kMaxUnknowns = 200000;
inline constexpr std::size_t kDefaultMemoryBudget = std::size_t(1) << 30;
inline constexpr Eigen::Index kMaxDenseDimension = 2000;

/// -d^2/dt^2 - v on (0, L) with Dirichlet ends; n interior nodes.
TridiagonalOperator build_halfline(const GridPotential1D& v, double length, Eigen::Index n);

/// -d^2/dx^2 - q on [front, back] of q with Neumann ends, n cell-centred unknowns.
TridiagonalOperator build_neumann(const GridPotential1D& q, Eigen::Index n);

/// (i d/dphi + Psi)^2 - v on the circle, gauge-transformed to a twisted periodic stencil.
TridiagonalOperator build_circle(const GridPotential1D& v, const FluxData& flux, Eigen::Index n);

/// Symmetrized radial operator: the weighted-space matrix after similarity by sqrt(r_i^p).
TridiagonalOperator build_radial_mode(const RadialModeOperator& op, Eigen::Index n);

/// Five-point -Laplace - V on the half-plane box, Dirichlet on all sides, row-major in x2.
BandedSymmetric<double> build_halfplane(const HalfPlanePotential& v, const HalfPlaneGrid& grid,
                                        std::size_t memory_budget = kDefaultMemoryBudget);

/// Block-tridiagonal -d^2/dt^2 (x) I - profile(t) A on (0, L), Dirichlet ends.
BandedSymmetric<double> build_matrix_halfline(const MatrixPotential& v, double length, Eigen::Index n,
                                              std::size_t memory_budget = kDefaultMemoryBudget);

/// Real symmetric matrix that is actually factored (doubled and interleaved for twisted operators).
BandedSymmetric<double> to_banded(const TridiagonalOperator& op);
Eigen::MatrixXd to_dense(const TridiagonalOperator& op);

/// Inertia with multiplicities of the operator itself (doubling undone).
Inertia count_negative(const TridiagonalOperator& op, double shift = 0.0);

/// Ascending eigenvalues. Twisted operators are solved in their complex Hermitian
/// form and report each eigenvalue once.
Eigen::VectorXd eigenvalues_dense(const Eigen::MatrixXd& m);
Eigen::VectorXd eigenvalues_dense(const BandedSymmetric<double>& m);
Eigen::VectorXd eigenvalues_dense(const TridiagonalOperator& op);

/// max_j ||M x_j - lambda_j x_j|| / ||M||_inf over all eigenpairs.
double max_eigen_residual(const Eigen::MatrixXd& m);

/// sum of |lambda|^{1/2} over the negative eigenvalues.
double trace_half_moment(const TridiagonalOperator& op);

struct ModeCutoff {
    int modes = 1;           ///< all |m| >= modes have nonnegative mode operators
    double radius = 0.0;     ///< support radius used
    double peak = 0.0;       ///< max V
    bool never_vanishes = false;
};

ModeCutoff mode_cutoff(const RadialPotential& v, const std::optional<FluxData>& flux);

struct ModeCount {
    int m;
    double nu;
    Eigen::Index count;
};

struct ModeSum {
    Eigen::Index total = 0;
    std::vector<ModeCount> modes;
    ModeCutoff cutoff;
    bool cutoff_verified = false;  ///< the modes at |m| = cutoff counted zero
};

/// Negative-eigenvalue count of the plane operator for radial V by angular
/// decomposition: Aharonov-Bohm modes nu = (m + Psi)^2 for |m| <= M when flux is
/// given, antisymmetric modes nu = m^2 for 1 <= m <= M otherwise.
ModeSum count_radial_modes(const RadialPotential& v, const std::optional<FluxData>& flux,
                           double domain_radius, Eigen::Index n);

}  // namespace calogero
