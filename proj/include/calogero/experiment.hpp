#pragma once

#include "calogero/bounds.hpp"
#include "calogero/constants.hpp"
#include "calogero/potentials.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace calogero {

inline constexpr const char* kVersion = "1.0.0";

/// Named potential family with its parameters; unused fields are ignored.
struct PotentialSpec {
    std::string family = "indicator";  // indicator | exponential | power | ramp | steps | constant | box
    double amplitude = 1.0;
    double radius = 1.0;       ///< indicator radius / circle half-width / box width
    double half_height = 1.0;  ///< half-plane box and lattice half-height
    double decay = 1.0;
    double exponent = 2.0;
    double extent = 0.0;       ///< sampling extent; 0 means the family default
    int samples = 64;
    std::vector<double> nodes;   // steps
    std::vector<double> values;  // steps
    std::optional<Eigen::MatrixXd> shape;  ///< makes a matrix-valued potential
};

/// Refinement schedule: mesh width h at the coarsest level, halved `levels - 1`
/// times, repeated on each domain size (ascending).
struct GridSpec {
    double h = 0.01;
    int levels = 3;
    std::vector<double> domains{20.0};
};

struct SweepSpec {
    std::string parameter;  // amplitude | radius | flux
    std::vector<double> values;
};

struct ExperimentConfig {
    std::string name = "experiment";
    bool lemma4 = false;
    TheoremKind theorem = TheoremKind::OperatorCalogero;
    std::optional<double> flux;
    PotentialSpec potential;
    GridSpec grid;
    std::optional<SplitParams> split;  ///< empty: optimize
    bool scalar_sharp = false;
    std::optional<SweepSpec> sweep;
    std::filesystem::path out_dir;
};

/// Parses the structured-text (JSON) experiment format; throws DomainError on bad input.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

TheoremId theorem_id(const ExperimentConfig& cfg);
Potential make_potential(const ExperimentConfig& cfg);
/// Circle potential on [-pi, pi] for the half-moment check.
GridPotential1D make_circle_potential(const PotentialSpec& spec);

/// Negative-eigenvalue count of the theorem's operator on one (domain, mesh) level.
RefinementLevel count_level(const ExperimentConfig& cfg, const Potential& v, double domain, double h);

struct ExperimentResult {
    std::string name;
    std::optional<BoundReport> report;
    std::optional<Lemma4Check> lemma4;
    double sweep_value = 0.0;
    std::string error;
    bool hypothesis_violated = false;  ///< error is an integer flux or similar unmet hypothesis

    Verdict verdict() const;
};

/// Build potential, validate hypothesis, compute bound, count over the schedule, assess.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Counts only (no hypothesis check, no bound).
std::vector<RefinementLevel> run_count(const ExperimentConfig& cfg);

struct RunArtifact {
    std::vector<ExperimentResult> results;
    std::string stamp_version = kVersion;

    std::string csv() const;
    std::string report_text() const;  ///< structured JSON report
    /// 0 all pass, 1 inequality failure, 2 hypothesis violation, 3 unconverged.
    int exit_code() const;
    void write(const std::filesystem::path& dir, const std::string& stem) const;
};

RunArtifact cmd_verify(const ExperimentConfig& cfg);
/// Runs every sweep value on up to `workers` threads; results stay in sweep order.
RunArtifact cmd_sweep(const ExperimentConfig& cfg, int workers);

struct SweepSummary {
    double max_count_over_bound = 0.0;
    double max_count_over_integral = 0.0;
    std::size_t counted = 0;
};
SweepSummary summarize(const RunArtifact& artifact);

}  // namespace calogero
