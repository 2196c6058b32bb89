#pragma once

#include "calogero/constants.hpp"
#include "calogero/potentials.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace calogero {

/// Greedy covering of [-pi, pi] by intervals with |I| * int_I 2v = epsilon.
struct Partition {
    std::vector<std::pair<double, double>> intervals;
    double epsilon = 0.0;
    bool overlap_tail = false;  ///< last interval [y, pi] overlaps its predecessor

    /// max_k | |I_k| int_{I_k} 2v - epsilon | / epsilon
    double max_relative_defect(const GridPotential1D& v) const;
    /// Largest number of intervals sharing an interior point.
    int covering_multiplicity() const;
};

/// Requires int v >= 1 / G_0(0); throws PartitionDegenerateError otherwise.
Partition lemma4_partition(const GridPotential1D& v, const FluxData& flux);

/// Trace of the Birman-Schwinger operator, G_0(0) int v.
double birman_schwinger_bound(const GridPotential1D& v, const FluxData& flux);

struct NeumannWellBound {
    double eig_bound;   ///< -(g(l int q) / l)^2, a lower bound for the lowest Neumann eigenvalue
    bool single_flag;   ///< l int q <= 3: at most one negative eigenvalue
};

NeumannWellBound neumann_well_bounds(const GridPotential1D& q);

/// #{m >= 0 : pi^2 m^2 + b/4 < gamma_sq}.
long prop5_cell_count(double b, double gamma_sq);
/// Closed-form majorant gamma sqrt((alpha + beta)/(alpha beta)) with alpha = pi^2, beta = b/4.
double prop5_majorant(double b, double gamma_sq);

enum class Verdict { Pass, Fail, Unconverged, OutOfHypothesis, NotCounted };
std::string_view to_string(Verdict v);

struct RefinementLevel {
    Eigen::Index n = 0;
    double length = 0.0;
    Eigen::Index count = 0;
};

struct BoundReport {
    TheoremId theorem;
    std::optional<SplitParams> params;  ///< empty when the sharp scalar constant was used
    double constant = 0.0;
    bool constant_derived = false;      ///< general-a Aharonov-Bohm formula
    bool scalar_sharp = false;
    double integral = 0.0;
    double bound = 0.0;
    std::optional<Eigen::Index> counted;
    std::vector<RefinementLevel> trace;
    double margin = 0.0;
    Verdict verdict = Verdict::NotCounted;
    std::string note;
};

/// Which constant to use: explicit split parameters, or the optimum over (a, theta).
struct BoundOptions {
    std::optional<SplitParams> params;
    bool scalar_sharp = false;
};

/// Bound side of a report: constant times the theorem's integral of V.
/// Throws HypothesisError for non-monotone V and DomainError for a potential
/// type the theorem does not accept.
BoundReport theorem_bound(const TheoremId& id, const Potential& v, const BoundOptions& opts = {});

/// Number of trailing refinement levels that must agree before a count is accepted.
inline constexpr std::size_t kStableLevels = 3;

/// Fills counted, margin and verdict from the refinement trace.
void assess(BoundReport& report);

struct Lemma4Check {
    FluxData flux;
    double integral = 0.0;
    double lhs = 0.0;            ///< trace half-moment of the circle operator
    double lhs_coarse = 0.0;     ///< same at half resolution
    double rhs = 0.0;            ///< d_Psi int v
    Eigen::Index count = 0;      ///< negative eigenvalues of the circle operator
    Eigen::Index circle_n = 0;
    double bs_bound = 0.0;       ///< G_0(0) int v
    bool chain_replayed = false;
    std::optional<Partition> partition;
    std::vector<double> cell_eigenvalues;  ///< lowest Neumann eigenvalue of -d^2 - 2v per interval
    std::vector<Eigen::Index> cell_negatives;
    double cell_sum = 0.0;       ///< sum |2 lambda_1(h_k)|^{1/2}
    double chain_value = 0.0;    ///< sum g(eps) / |I_k|
    bool pass = false;
    std::string note;
};

struct Lemma4Options {
    Eigen::Index circle_n = 512;
    Eigen::Index cell_n = 400;
    double rel_tolerance = 1e-6;
};

Lemma4Check lemma4_bound_check(const GridPotential1D& v, const FluxData& flux,
                               const Lemma4Options& opts = {});

/// Restriction of v to [lo, hi] as a potential on that interval.
GridPotential1D restrict_to(const GridPotential1D& v, double lo, double hi);

}  // namespace calogero
