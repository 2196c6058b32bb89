#include "calogero/experiment.hpp"

#include "calogero/errors.hpp"
#include "calogero/spectral.hpp"

#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace calogero {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

Eigen::Index mesh_count(double length, double h) {
    return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::llround(length / h)) - 1);
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

GridPotential1D make_profile(const PotentialSpec& s) {
    const double extent = s.extent > 0.0 ? s.extent : s.radius;
    if (s.family == "indicator") return families::indicator(s.amplitude, s.radius, std::max(extent, s.radius));
    if (s.family == "exponential") return families::exponential(s.amplitude, s.decay, extent, s.samples);
    if (s.family == "power")
        return families::power_decay(s.amplitude, s.exponent, s.radius, std::max(extent, s.radius), s.samples);
    if (s.family == "ramp") {
        // Increasing on [0, radius): violates every monotonicity hypothesis.
        Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(s.samples, 0.0, s.radius);
        Eigen::VectorXd v = s.amplitude * x / s.radius;
        v[s.samples - 1] = 0.0;
        return {x, v};
    }
    if (s.family == "steps") return {to_vector(s.nodes), to_vector(s.values)};
    throw DomainError("unknown potential family '" + s.family + "'");
}

HalfPlanePotential make_half_plane(const PotentialSpec& s) {
    if (s.family == "box" || s.family == "indicator")
        return families::half_plane_box(s.amplitude, s.radius, s.half_height);
    const double extent = s.extent > 0.0 ? s.extent : s.radius;
    Eigen::MatrixXd cells(s.samples, 2 * s.samples);
    const double h1 = extent / s.samples, h2 = 2.0 * s.half_height / (2 * s.samples);
    for (Eigen::Index i = 0; i < cells.rows(); ++i)
        for (Eigen::Index j = 0; j < cells.cols(); ++j) {
            const double x1 = static_cast<double>(i) * h1;
            const double x2 = -s.half_height + static_cast<double>(j) * h2;
            if (s.family == "exponential") {
                const double c = std::cos(x2);
                cells(i, j) = s.amplitude * std::exp(-s.decay * x1) * (1.0 + c * c);
            } else if (s.family == "ramp") {
                cells(i, j) = s.amplitude * x1 / extent;
            } else {
                throw DomainError("unknown half-plane potential family '" + s.family + "'");
            }
        }
    return {extent, s.half_height, cells};
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

json split_json(const std::optional<SplitParams>& p) {
    if (!p) return nullptr;
    return {{"a", p->a}, {"theta", p->theta}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    try {
        read(j, "name", c.name);
        const std::string theorem = j.value("theorem", std::string("operator_calogero"));
        if (theorem == "lemma4")
            c.lemma4 = true;
        else
            c.theorem = theorem_kind_from_string(theorem);
        if (j.contains("flux")) c.flux = j.at("flux").get<double>();
        if (j.contains("potential")) {
            const auto& p = j.at("potential");
            auto& s = c.potential;
            read(p, "family", s.family);
            read(p, "amplitude", s.amplitude);
            read(p, "radius", s.radius);
            read(p, "half_height", s.half_height);
            read(p, "decay", s.decay);
            read(p, "exponent", s.exponent);
            read(p, "extent", s.extent);
            read(p, "samples", s.samples);
            read(p, "nodes", s.nodes);
            read(p, "values", s.values);
            if (p.contains("shape")) {
                const auto rows = p.at("shape").get<std::vector<std::vector<double>>>();
                Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows[0].size());
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (rows[r].size() != static_cast<std::size_t>(m.cols()))
                        throw DomainError("config: ragged shape matrix");
                    for (std::size_t k = 0; k < rows[r].size(); ++k) m(r, k) = rows[r][k];
                }
                s.shape = m;
            }
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            read(g, "h", c.grid.h);
            read(g, "levels", c.grid.levels);
            read(g, "domains", c.grid.domains);
        }
        if (j.contains("split")) {
            const auto& s = j.at("split");
            if (!(s.is_string() && s.get<std::string>() == "optimize"))
                c.split = SplitParams{s.at("a").get<double>(), s.at("theta").get<double>()};
        }
        read(j, "scalar_sharp", c.scalar_sharp);
        if (j.contains("sweep")) {
            SweepSpec sw;
            read(j.at("sweep"), "parameter", sw.parameter);
            read(j.at("sweep"), "values", sw.values);
            c.sweep = sw;
        }
        if (j.contains("output")) c.out_dir = j.at("output").value("dir", std::string());
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    if (!(c.grid.h > 0.0) || c.grid.levels < 1 || c.grid.domains.empty())
        throw DomainError("config: grid needs h > 0, levels >= 1 and at least one domain");
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    auto cfg = parse_config(ss.str());
    if (cfg.name == "experiment") cfg.name = path.stem().string();
    return cfg;
}

TheoremId theorem_id(const ExperimentConfig& cfg) {
    if (cfg.theorem == TheoremKind::AharonovBohm) {
        if (!cfg.flux) throw DomainError("config: aharonov_bohm needs a flux");
        return TheoremId::aharonov_bohm(flux_constants(*cfg.flux));
    }
    return {cfg.theorem, std::nullopt};
}

Potential make_potential(const ExperimentConfig& cfg) {
    switch (cfg.theorem) {
        case TheoremKind::HalfPlane: return make_half_plane(cfg.potential);
        case TheoremKind::AharonovBohm:
        case TheoremKind::Antisymmetric: return RadialPotential{make_profile(cfg.potential)};
        case TheoremKind::OperatorCalogero:
            if (cfg.potential.shape) return MatrixPotential{make_profile(cfg.potential), *cfg.potential.shape};
            return make_profile(cfg.potential);
    }
    throw DomainError("make_potential: unknown theorem");
}

GridPotential1D make_circle_potential(const PotentialSpec& s) {
    if (s.family == "constant") return families::circle_constant(s.amplitude);
    if (s.family == "indicator") return families::circle_indicator(s.amplitude, s.radius);
    if (s.family == "steps") return {to_vector(s.nodes), to_vector(s.values)};
    throw DomainError("unknown circle potential family '" + s.family + "'");
}

RefinementLevel count_level(const ExperimentConfig& cfg, const Potential& v, double domain, double h) {
    RefinementLevel lvl;
    lvl.length = domain;
    switch (cfg.theorem) {
        case TheoremKind::OperatorCalogero: {
            const Eigen::Index n = mesh_count(domain, h);
            lvl.n = n;
            if (const auto* mv = std::get_if<MatrixPotential>(&v))
                lvl.count = count_negative(build_matrix_halfline(*mv, domain, n)).neg;
            else
                lvl.count = count_negative(build_halfline(std::get<GridPotential1D>(v), domain, n)).neg;
            break;
        }
        case TheoremKind::HalfPlane: {
            HalfPlaneGrid grid{domain, domain, mesh_count(domain, h), mesh_count(2.0 * domain, h)};
            lvl.n = grid.n1 * grid.n2;
            lvl.count = count_negative(build_halfplane(std::get<HalfPlanePotential>(v), grid)).neg;
            break;
        }
        case TheoremKind::AharonovBohm:
        case TheoremKind::Antisymmetric: {
            std::optional<FluxData> flux;
            if (cfg.theorem == TheoremKind::AharonovBohm) flux = theorem_id(cfg).flux;
            const Eigen::Index n = mesh_count(domain, h);
            lvl.n = n;
            const auto sum = count_radial_modes(std::get<RadialPotential>(v), flux, domain, n);
            if (!sum.cutoff_verified)
                throw IndeterminateCountError("mode cutoff " + std::to_string(sum.cutoff.modes) +
                                              " has negative eigenvalues");
            lvl.count = sum.total;
            break;
        }
    }
    return lvl;
}

Verdict ExperimentResult::verdict() const {
    if (report) return report->verdict;
    if (lemma4) return lemma4->pass ? Verdict::Pass : Verdict::Fail;
    return hypothesis_violated ? Verdict::OutOfHypothesis : Verdict::Unconverged;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult res;
    res.name = cfg.name;
    try {
        if (cfg.lemma4) {
            if (!cfg.flux) throw DomainError("config: lemma4 needs a flux");
            const auto v = make_circle_potential(cfg.potential);
            Lemma4Options opts;
            opts.circle_n = std::min<Eigen::Index>(1000, std::llround(2.0 * kPi / cfg.grid.h));
            res.lemma4 = lemma4_bound_check(v, flux_constants(*cfg.flux), opts);
            return res;
        }
        const TheoremId id = theorem_id(cfg);
        const Potential v = make_potential(cfg);
        BoundReport rep;
        try {
            rep = theorem_bound(id, v, {cfg.split, cfg.scalar_sharp});
        } catch (const HypothesisError& e) {
            rep.theorem = id;
            rep.integral = integrate(v);
            rep.verdict = Verdict::OutOfHypothesis;
            rep.note = e.what();
            res.report = rep;
            return res;
        }
        std::vector<double> domains = cfg.grid.domains;
        std::sort(domains.begin(), domains.end());
        for (double domain : domains) {
            double h = cfg.grid.h;
            for (int l = 0; l < cfg.grid.levels; ++l, h *= 0.5) rep.trace.push_back(count_level(cfg, v, domain, h));
        }
        assess(rep);
        // Dirichlet truncation only removes eigenvalues: counts must not drop as the domain grows.
        for (std::size_t i = static_cast<std::size_t>(cfg.grid.levels); i < rep.trace.size(); ++i)
            if (rep.trace[i].count < rep.trace[i - cfg.grid.levels].count)
                rep.note += (rep.note.empty() ? "" : "; ") + std::string("count decreased with domain size");
        res.report = rep;
    } catch (const FluxDegenerateError& e) {
        res.error = e.what();
        res.hypothesis_violated = true;
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    return res;
}

std::vector<RefinementLevel> run_count(const ExperimentConfig& cfg) {
    const Potential v = make_potential(cfg);
    std::vector<RefinementLevel> trace;
    for (double domain : cfg.grid.domains) {
        double h = cfg.grid.h;
        for (int l = 0; l < cfg.grid.levels; ++l, h *= 0.5) trace.push_back(count_level(cfg, v, domain, h));
    }
    return trace;
}

std::string RunArtifact::csv() const {
    std::ostringstream out;
    out << "theorem,psi,a,theta,constant,integral,bound,n,L,count,margin,verdict\n";
    for (const auto& r : results) {
        if (r.lemma4) {
            const auto& c = *r.lemma4;
            out << "lemma4," << num(c.flux.psi) << ",,," << num(c.flux.d_psi) << ',' << num(c.integral) << ','
                << num(c.rhs) << ',' << c.circle_n << ',' << num(2.0 * kPi)
                << ',' << c.count << ',' << num(c.rhs - c.lhs) << ',' << to_string(r.verdict()) << '\n';
            continue;
        }
        if (!r.report) {
            out << ",,,,,,,,,,," << to_string(r.verdict()) << '\n';
            continue;
        }
        const auto& rep = *r.report;
        std::ostringstream prefix;
        prefix << to_string(rep.theorem.kind) << ','
               << (rep.theorem.flux ? num(rep.theorem.flux->psi) : "") << ','
               << (rep.params ? num(rep.params->a) : "") << ',' << (rep.params ? num(rep.params->theta) : "")
               << ',' << num(rep.constant) << ',' << num(rep.integral) << ',' << num(rep.bound) << ',';
        if (rep.trace.empty()) {
            out << prefix.str() << ",,,," << to_string(rep.verdict) << '\n';
            continue;
        }
        for (const auto& lvl : rep.trace)
            out << prefix.str() << lvl.n << ',' << num(lvl.length) << ',' << lvl.count << ','
                << num(rep.bound - static_cast<double>(lvl.count)) << ',' << to_string(rep.verdict) << '\n';
    }
    return out.str();
}

std::string RunArtifact::report_text() const {
    json root;
    root["environment"] = {{"version", stamp_version},
                           {"seed", nullptr},
                           {"pivot_rel_tolerance", kPivotRelTolerance},
                           {"shift_jitter", kShiftJitter},
                           {"stable_levels", kStableLevels},
                           {"integer_flux_tolerance", kIntegerFluxTolerance}};
    json list = json::array();
    for (const auto& r : results) {
        json e;
        e["name"] = r.name;
        e["verdict"] = to_string(r.verdict());
        if (!r.error.empty()) e["error"] = r.error;
        if (r.report) {
            const auto& rep = *r.report;
            e["theorem"] = to_string(rep.theorem.kind);
            if (rep.theorem.flux)
                e["flux"] = {{"psi", rep.theorem.flux->psi}, {"c_psi", rep.theorem.flux->c_psi},
                             {"g0", rep.theorem.flux->g0}, {"epsilon", rep.theorem.flux->epsilon},
                             {"d_psi", rep.theorem.flux->d_psi}};
            e["split"] = split_json(rep.params);
            e["constant"] = rep.constant;
            e["constant_derived"] = rep.constant_derived;
            e["scalar_sharp"] = rep.scalar_sharp;
            e["integral"] = rep.integral;
            e["bound"] = rep.bound;
            e["counted"] = rep.counted ? json(*rep.counted) : json(nullptr);
            e["margin"] = rep.counted ? json(rep.margin) : json(nullptr);
            json trace = json::array();
            for (const auto& lvl : rep.trace) trace.push_back({{"n", lvl.n}, {"L", lvl.length}, {"count", lvl.count}});
            e["trace"] = trace;
            if (rep.verdict == Verdict::Unconverged && !rep.trace.empty()) e["trace_mark"] = "unconverged";
            if (!rep.note.empty()) e["note"] = rep.note;
        }
        if (r.lemma4) {
            const auto& c = *r.lemma4;
            e["theorem"] = "lemma4";
            e["flux"] = {{"psi", c.flux.psi}, {"c_psi", c.flux.c_psi}, {"g0", c.flux.g0},
                         {"epsilon", c.flux.epsilon}, {"d_psi", c.flux.d_psi}};
            e["integral"] = c.integral;
            e["lhs"] = c.lhs;
            e["lhs_half_resolution"] = c.lhs_coarse;
            e["rhs"] = c.rhs;
            e["count"] = c.count;
            e["birman_schwinger_bound"] = c.bs_bound;
            e["chain_replayed"] = c.chain_replayed;
            if (c.partition) {
                json iv = json::array();
                for (const auto& [lo, hi] : c.partition->intervals) iv.push_back({lo, hi});
                e["partition"] = {{"epsilon", c.partition->epsilon},
                                  {"intervals", iv},
                                  {"overlap_tail", c.partition->overlap_tail}};
                e["cell_eigenvalues"] = c.cell_eigenvalues;
                e["cell_sum"] = c.cell_sum;
                e["chain_value"] = c.chain_value;
            }
            if (!c.note.empty()) e["note"] = c.note;
        }
        if (r.sweep_value != 0.0) e["sweep_value"] = r.sweep_value;
        list.push_back(std::move(e));
    }
    root["experiments"] = list;
    return root.dump(2) + "\n";
}

int RunArtifact::exit_code() const {
    bool fail = false, hypothesis = false, unconverged = false;
    for (const auto& r : results) {
        switch (r.verdict()) {
            case Verdict::Fail: fail = true; break;
            case Verdict::OutOfHypothesis: hypothesis = true; break;
            case Verdict::Unconverged: unconverged = true; break;
            default: break;
        }
    }
    return fail ? 1 : hypothesis ? 2 : unconverged ? 3 : 0;
}

void RunArtifact::write(const std::filesystem::path& dir, const std::string& stem) const {
    std::filesystem::create_directories(dir);
    std::ofstream(dir / (stem + ".csv")) << csv();
    std::ofstream(dir / (stem + ".json")) << report_text();
}

RunArtifact cmd_verify(const ExperimentConfig& cfg) {
    RunArtifact art;
    art.results.push_back(run_experiment(cfg));
    return art;
}

RunArtifact cmd_sweep(const ExperimentConfig& cfg, int workers) {
    RunArtifact art;
    if (!cfg.sweep || cfg.sweep->values.empty()) return art;
    const auto& sw = *cfg.sweep;
    if (sw.parameter != "amplitude" && sw.parameter != "radius" && sw.parameter != "flux" && sw.parameter != "decay")
        throw DomainError("sweep: unknown parameter '" + sw.parameter + "'");

    std::vector<ExperimentConfig> jobs;
    for (double value : sw.values) {
        ExperimentConfig c = cfg;
        c.sweep.reset();
        if (sw.parameter == "amplitude") c.potential.amplitude = value;
        if (sw.parameter == "radius") c.potential.radius = value;
        if (sw.parameter == "decay") c.potential.decay = value;
        if (sw.parameter == "flux") c.flux = value;
        c.name = cfg.name + "[" + sw.parameter + "=" + num(value) + "]";
        jobs.push_back(std::move(c));
    }
    art.results.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            art.results[i] = run_experiment(jobs[i]);
            art.results[i].sweep_value = sw.values[i];
        }
    };
    const int k = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < k; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return art;
}

SweepSummary summarize(const RunArtifact& artifact) {
    SweepSummary s;
    for (const auto& r : artifact.results) {
        if (!r.report || !r.report->counted) continue;
        const double n = static_cast<double>(*r.report->counted);
        if (r.report->bound > 0.0) s.max_count_over_bound = std::max(s.max_count_over_bound, n / r.report->bound);
        if (r.report->integral > 0.0)
            s.max_count_over_integral = std::max(s.max_count_over_integral, n / r.report->integral);
        ++s.counted;
    }
    return s;
}

}  // namespace calogero
