#include "calogero/errors.hpp"
#include "calogero/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace calogero;

namespace {

ExperimentConfig well(double amplitude) {
    return parse_config(R"({
        "name": "well",
        "theorem": "operator_calogero",
        "potential": {"family": "indicator", "amplitude": )" + std::to_string(amplitude) + R"(, "radius": 1},
        "grid": {"h": 0.01, "levels": 3, "domains": [10]}
    })");
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("config parsing") {
    const auto c = parse_config(R"({
        // comments are allowed
        "name": "ab",
        "theorem": "aharonov_bohm",
        "flux": 0.25,
        "potential": {"family": "indicator", "amplitude": 10, "radius": 1, "extent": 1},
        "grid": {"h": 0.02, "levels": 4, "domains": [5, 10]},
        "split": {"a": 2.0, "theta": 0.9},
        "output": {"dir": "runs"}
    })");
    CHECK(c.name == "ab");
    CHECK(c.theorem == TheoremKind::AharonovBohm);
    REQUIRE(c.flux.has_value());
    CHECK(*c.flux == 0.25);
    CHECK(c.grid.levels == 4);
    CHECK(c.grid.domains.size() == 2);
    REQUIRE(c.split.has_value());
    CHECK(c.split->a == 2.0);
    CHECK(c.out_dir == "runs");
    CHECK(theorem_id(c).flux->c_psi == doctest::Approx(1.0 / 16.0));

    CHECK(parse_config(R"({"theorem": "lemma4", "flux": 0.5})").lemma4);
    CHECK_FALSE(parse_config(R"({"split": "optimize"})").split.has_value());
    CHECK(parse_config(R"({"potential": {"family": "box", "shape": [[4, 0], [0, 1]]}})").potential.shape->rows() == 2);

    CHECK_THROWS_AS(parse_config("{ not json"), DomainError);
    CHECK_THROWS_AS(parse_config(R"({"theorem": "nonsense"})"), DomainError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"h": -1}})"), DomainError);
    CHECK_THROWS_AS(parse_config(R"({"potential": {"shape": [[1, 0], [0]]}})"), DomainError);
    CHECK_THROWS_AS(theorem_id(parse_config(R"({"theorem": "aharonov_bohm"})")), DomainError);
}

TEST_CASE("scalar well verification") {
    auto cfg = well(25.0);
    cfg.scalar_sharp = true;
    const auto art = cmd_verify(cfg);
    REQUIRE(art.results.size() == 1);
    const auto& rep = *art.results[0].report;
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.counted == 2);
    CHECK(rep.bound == doctest::Approx(10.0 / kPi));
    CHECK(art.exit_code() == 0);

    const auto general = cmd_verify(well(25.0));
    CHECK(general.results[0].report->bound == doctest::Approx(8.62487 * 5.0).epsilon(1e-4));
    CHECK(general.exit_code() == 0);
}

TEST_CASE("zero potential on the half-plane") {
    const auto cfg = parse_config(R"({
        "theorem": "half_plane",
        "potential": {"family": "box", "amplitude": 0, "radius": 1, "half_height": 1},
        "grid": {"h": 0.1, "levels": 3, "domains": [2]}
    })");
    const auto art = cmd_verify(cfg);
    CHECK(art.results[0].report->counted == 0);
    CHECK(art.results[0].report->bound == 0.0);
    CHECK(art.exit_code() == 0);
}

TEST_CASE("antisymmetric radial verification") {
    const auto cfg = parse_config(R"({
        "theorem": "antisymmetric",
        "potential": {"family": "indicator", "amplitude": 25, "radius": 1},
        "grid": {"h": 0.01, "levels": 3, "domains": [5]}
    })");
    const auto art = cmd_verify(cfg);
    const auto& rep = *art.results[0].report;
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.bound == doctest::Approx(5.421515354 * 25.0 * kPi).epsilon(1e-6));
}

TEST_CASE("exit codes") {
    const auto ramp = parse_config(R"({
        "theorem": "operator_calogero",
        "potential": {"family": "ramp", "amplitude": 10, "radius": 1},
        "grid": {"h": 0.01, "levels": 3, "domains": [5]}
    })");
    const auto bad = cmd_verify(ramp);
    CHECK(bad.results[0].verdict() == Verdict::OutOfHypothesis);
    CHECK(bad.exit_code() == 2);

    auto short_schedule = well(25.0);
    short_schedule.grid.levels = 2;
    CHECK(cmd_verify(short_schedule).exit_code() == 3);

    RunArtifact mixed;
    ExperimentResult fail;
    fail.report = BoundReport{};
    fail.report->verdict = Verdict::Fail;
    mixed.results = {bad.results[0], fail};
    CHECK(mixed.exit_code() == 1);
    CHECK(RunArtifact{}.exit_code() == 0);

    auto integer_flux = parse_config(R"({"theorem": "aharonov_bohm", "flux": 2.0,
        "potential": {"family": "indicator", "amplitude": 10}})");
    const auto degenerate = cmd_verify(integer_flux);
    CHECK(degenerate.results[0].verdict() == Verdict::OutOfHypothesis);
    CHECK(degenerate.exit_code() == 2);
}

TEST_CASE("CSV output is deterministic and follows the schema") {
    const auto a = cmd_verify(well(100.0)).csv();
    const auto b = cmd_verify(well(100.0)).csv();
    CHECK(a == b);
    std::istringstream lines(a);
    std::string header, row;
    std::getline(lines, header);
    CHECK(header == "theorem,psi,a,theta,constant,integral,bound,n,L,count,margin,verdict");
    int rows = 0;
    while (std::getline(lines, row)) {
        ++rows;
        CHECK(std::count(row.begin(), row.end(), ',') == 11);
        CHECK(row.rfind("operator_calogero,", 0) == 0);
    }
    CHECK(rows == 3);
    CHECK(a.find(",999,10,3,") != std::string::npos);

    const auto report = cmd_verify(well(100.0)).report_text();
    CHECK(report.find("\"version\": \"1.0.0\"") != std::string::npos);
    CHECK(report.find("\"counted\": 3") != std::string::npos);
}

TEST_CASE("artifact files") {
    const auto dir = std::filesystem::temp_directory_path() / "calogero_artifact_test";
    std::filesystem::remove_all(dir);
    cmd_verify(well(10.0)).write(dir, "run");
    CHECK(std::filesystem::exists(dir / "run.csv"));
    CHECK(std::filesystem::exists(dir / "run.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("circle half-moment runs") {
    const auto cfg = parse_config(R"({
        "theorem": "lemma4", "flux": 0.5,
        "potential": {"family": "constant", "amplitude": 1},
        "grid": {"h": 0.01}
    })");
    const auto art = cmd_verify(cfg);
    REQUIRE(art.results[0].lemma4.has_value());
    CHECK(art.results[0].lemma4->pass);
    CHECK(art.results[0].lemma4->partition->intervals.size() == 6);
    CHECK(art.exit_code() == 0);
    CHECK(art.csv().find("lemma4,0.5,") != std::string::npos);
}

TEST_CASE("sweeps") {
    auto cfg = well(1.0);
    cfg.scalar_sharp = true;
    cfg.sweep = SweepSpec{"amplitude", {}};
    CHECK(cmd_sweep(cfg, 2).results.empty());
    CHECK(cmd_sweep(cfg, 2).exit_code() == 0);

    cfg.sweep->values = {5.0, 10.0, 25.0, 50.0, 100.0, 150.0};
    const auto art = cmd_sweep(cfg, 3);
    REQUIRE(art.results.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(art.results[i].sweep_value == cfg.sweep->values[i]);
    const auto s = summarize(art);
    CHECK(s.counted == 6);
    CHECK(s.max_count_over_bound <= 1.0);
    CHECK(cmd_sweep(cfg, 1).csv() == art.csv());

    cfg.sweep->parameter = "colour";
    CHECK_THROWS_AS(cmd_sweep(cfg, 1), DomainError);
}

TEST_CASE("flux sweep is symmetric under reflection") {
    auto cfg = parse_config(R"({
        "theorem": "aharonov_bohm", "flux": 0.5,
        "potential": {"family": "indicator", "amplitude": 10, "radius": 1},
        "grid": {"h": 0.02, "levels": 3, "domains": [4]},
        "sweep": {"parameter": "flux", "values": [0.1, 0.3, 0.7, 0.9]}
    })");
    const auto art = cmd_sweep(cfg, 2);
    REQUIRE(art.results.size() == 4);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& lo = *art.results[i].report;
        const auto& hi = *art.results[3 - i].report;
        CHECK(lo.bound == doctest::Approx(hi.bound).epsilon(1e-8));
        CHECK(lo.counted == hi.counted);
    }
}

}
