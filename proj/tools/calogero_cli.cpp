#include "calogero/bounds.hpp"
#include "calogero/constants.hpp"
#include "calogero/errors.hpp"
#include "calogero/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

using namespace calogero;

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<double> flux;
    bool optimize = false;
    bool scalar_sharp = false;
    std::optional<int> levels;
    int workers = 1;
    bool lemma4 = false;
};

ExperimentConfig configure(const Flags& f) {
    ExperimentConfig cfg = load_config(f.config);
    if (f.flux) cfg.flux = *f.flux;
    if (f.optimize) cfg.split.reset();
    if (f.scalar_sharp) cfg.scalar_sharp = true;
    if (f.levels) cfg.grid.levels = *f.levels;
    if (f.lemma4) cfg.lemma4 = true;
    if (!f.out.empty()) cfg.out_dir = f.out;
    return cfg;
}

void print_flux_row(double psi) {
    const auto d = flux_constants(psi);
    std::printf("%8.4f %12.6f %12.6f %10.6f %12.6f\n", d.psi, d.c_psi, d.g0, d.epsilon, d.d_psi);
}

int cmd_constants(const Flags& f) {
    std::printf("R(b)\n");
    for (double b : {0.1, 1.0, 4.0, 10.0, 4.0 * kPi * kPi, 1e3, 1e6})
        std::printf("  b = %-12.6g R = %.10f\n", b, eval_R(b));
    std::printf("g(y), inverse of x tanh x\n");
    for (double y : {0.01, 0.1, 1.0, 3.0, 10.0}) std::printf("  y = %-8g g = %.10f\n", y, eval_g(y));

    std::printf("flux table\n%8s %12s %12s %10s %12s\n", "psi", "c_psi", "G0(0)", "epsilon", "d_psi");
    if (f.flux) {
        print_flux_row(*f.flux);
    } else {
        for (int k = 1; k <= 9; ++k) print_flux_row(0.1 * k);
    }

    const double psi = f.flux.value_or(0.5);
    std::printf("optimized constants (Aharonov-Bohm at psi = %g)\n%-20s %10s %10s %12s\n", psi, "theorem", "a*",
                "theta*", "constant");
    for (const TheoremId& id : {TheoremId::operator_calogero(), TheoremId::half_plane(), TheoremId::antisymmetric(),
                                TheoremId::aharonov_bohm(flux_constants(psi))}) {
        const auto best = optimize_constant(id);
        std::printf("%-20s %10.6f %10.6f %12.6f\n", std::string(to_string(id.kind)).c_str(), best.params.a,
                    best.params.theta, best.value);
    }
    return 0;
}

void print_result(const ExperimentResult& r) {
    std::printf("%s: %s", r.name.c_str(), std::string(to_string(r.verdict())).c_str());
    if (r.report) {
        const auto& rep = *r.report;
        std::printf("  theorem=%s constant=%.6f integral=%.6f bound=%.6f", std::string(to_string(rep.theorem.kind)).c_str(),
                    rep.constant, rep.integral, rep.bound);
        if (rep.counted) std::printf(" N=%ld margin=%.6f", static_cast<long>(*rep.counted), rep.margin);
        std::printf("\n  counts:");
        for (const auto& lvl : rep.trace)
            std::printf(" [L=%g n=%ld N=%ld]", lvl.length, static_cast<long>(lvl.n), static_cast<long>(lvl.count));
        if (!rep.note.empty()) std::printf("\n  note: %s", rep.note.c_str());
    }
    if (r.lemma4) {
        const auto& c = *r.lemma4;
        std::printf("  psi=%g lhs=%.6f rhs=%.6f N=%ld birman_schwinger=%.6f", c.flux.psi, c.lhs, c.rhs,
                    static_cast<long>(c.count), c.bs_bound);
        if (c.chain_replayed) std::printf(" cell_sum=%.6f chain=%.6f", c.cell_sum, c.chain_value);
        if (!c.note.empty()) std::printf("\n  note: %s", c.note.c_str());
    }
    if (!r.error.empty()) std::printf("  error: %s", r.error.c_str());
    std::printf("\n");
}

int finish(const RunArtifact& art, const ExperimentConfig& cfg, const std::string& stem) {
    for (const auto& r : art.results) print_result(r);
    if (!cfg.out_dir.empty()) {
        art.write(cfg.out_dir, stem);
        std::printf("wrote %s/%s.{csv,json}\n", cfg.out_dir.string().c_str(), stem.c_str());
    }
    return art.exit_code();
}

int cmd_verify_run(const Flags& f) {
    const auto cfg = configure(f);
    return finish(calogero::cmd_verify(cfg), cfg, cfg.name);
}

int cmd_sweep_run(const Flags& f) {
    const auto cfg = configure(f);
    const auto art = calogero::cmd_sweep(cfg, f.workers);
    const int code = finish(art, cfg, cfg.name + "_sweep");
    const auto s = summarize(art);
    std::printf("sweep: %zu runs, %zu counted, max N/bound = %.6f, max N/integral = %.6f\n", art.results.size(),
                s.counted, s.max_count_over_bound, s.max_count_over_integral);
    return code;
}

int cmd_partition(const Flags& f) {
    const auto cfg = configure(f);
    if (!cfg.flux) throw DomainError("partition needs a flux (config or --flux)");
    const auto v = make_circle_potential(cfg.potential);
    const auto p = lemma4_partition(v, flux_constants(*cfg.flux));
    std::printf("epsilon: %.10g\nintervals: %zu\n", p.epsilon, p.intervals.size());
    for (const auto& [lo, hi] : p.intervals)
        std::printf("  [% .10f, % .10f]  length %.10f  weight %.10f\n", lo, hi, hi - lo, (hi - lo) * 2.0 * v.integral(lo, hi));
    std::printf("overlap_tail: %s\nmultiplicity: %d\nmax relative defect: %.3g\n", p.overlap_tail ? "yes" : "no",
                p.covering_multiplicity(), p.max_relative_defect(v));
    return 0;
}

int cmd_count(const Flags& f) {
    const auto cfg = configure(f);
    std::printf("%10s %10s %10s\n", "L", "n", "count");
    for (const auto& lvl : run_count(cfg))
        std::printf("%10g %10ld %10ld\n", lvl.length, static_cast<long>(lvl.n), static_cast<long>(lvl.count));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalue-counting bounds: constants, verification runs and sweeps"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Flags f;

    auto add_config = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--config", f.config, "experiment config (JSON)")->check(CLI::ExistingFile);
        if (required) opt->required();
    };
    auto* constants = app.add_subcommand("constants", "print R, g, flux tables and optimized constants");
    constants->add_option("--flux", f.flux, "single flux value for the table and the Aharonov-Bohm constant");
    constants->add_flag("--optimize", f.optimize, "accepted for symmetry; constants are always optimized");

    auto* verify = app.add_subcommand("verify", "run one experiment and check its inequality");
    add_config(verify, true);
    verify->add_option("--out", f.out, "directory for CSV and JSON reports");
    verify->add_option("--flux", f.flux, "override the config flux");
    verify->add_flag("--optimize", f.optimize, "ignore split parameters in the config");
    verify->add_flag("--scalar-sharp", f.scalar_sharp, "use 2/pi for scalar half-line potentials");
    verify->add_option("--levels", f.levels, "refinement levels per domain")->check(CLI::PositiveNumber);
    verify->add_flag("--lemma4", f.lemma4, "circle half-moment check with proof-chain replay");

    auto* sweep = app.add_subcommand("sweep", "run the config's parameter sweep");
    add_config(sweep, true);
    sweep->add_option("--out", f.out, "directory for CSV and JSON reports");
    sweep->add_option("--workers", f.workers, "concurrent experiments")->check(CLI::PositiveNumber);
    sweep->add_flag("--optimize", f.optimize, "ignore split parameters in the config");
    sweep->add_flag("--scalar-sharp", f.scalar_sharp, "use 2/pi for scalar half-line potentials");
    sweep->add_option("--levels", f.levels, "refinement levels per domain")->check(CLI::PositiveNumber);

    auto* partition = app.add_subcommand("partition", "print the interval partition of a circle potential");
    add_config(partition, true);
    partition->add_option("--flux", f.flux, "override the config flux");

    auto* count = app.add_subcommand("count", "raw negative-eigenvalue counts over the grid schedule");
    add_config(count, true);
    count->add_option("--levels", f.levels, "refinement levels per domain")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);
    try {
        if (constants->parsed()) return cmd_constants(f);
        if (verify->parsed()) return cmd_verify_run(f);
        if (sweep->parsed()) return cmd_sweep_run(f);
        if (partition->parsed()) return cmd_partition(f);
        if (count->parsed()) return cmd_count(f);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
