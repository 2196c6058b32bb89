#include "calogero/bounds.hpp"

#include "calogero/errors.hpp"
#include "calogero/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace calogero {

namespace {

constexpr int kBisectionSteps = 200;

}  // namespace

double Partition::max_relative_defect(const GridPotential1D& v) const {
    double worst = 0.0;
    for (const auto& [lo, hi] : intervals)
        worst = std::max(worst, std::abs((hi - lo) * 2.0 * v.integral(lo, hi) - epsilon) / epsilon);
    return worst;
}

int Partition::covering_multiplicity() const {
    std::vector<double> cuts;
    for (const auto& [lo, hi] : intervals) {
        cuts.push_back(lo);
        cuts.push_back(hi);
    }
    std::sort(cuts.begin(), cuts.end());
    int worst = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i + 1] > cuts[i])) continue;
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        int cover = 0;
        for (const auto& [lo, hi] : intervals) cover += (lo < mid && mid < hi) ? 1 : 0;
        worst = std::max(worst, cover);
    }
    return worst;
}

Partition lemma4_partition(const GridPotential1D& v, const FluxData& flux) {
    if (v.front() > -kPi + 1e-12 || v.back() < kPi - 1e-12)
        throw DomainError("lemma4_partition: potential must be given on [-pi, pi]");
    const double mass = v.integral(-kPi, kPi);
    if (mass < 1.0 / flux.g0)
        throw PartitionDegenerateError(
            "lemma4_partition: int v below 1/G_0(0); the Birman-Schwinger bound already gives no "
            "negative eigenvalues");

    Partition part;
    part.epsilon = flux.epsilon;
    const double eps = flux.epsilon;
    auto weight = [&](double lo, double hi) { return (hi - lo) * 2.0 * v.integral(lo, hi); };

    double x = -kPi;
    while (weight(x, kPi) >= eps) {
        // Smallest x' with weight(x, x') >= eps; weight is continuous and non-decreasing in x'.
        double lo = x, hi = kPi;
        for (int i = 0; i < kBisectionSteps && hi > lo; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (weight(x, mid) >= eps ? hi : lo) = mid;
        }
        part.intervals.emplace_back(x, hi);
        x = hi;
        if (x >= kPi) return part;
    }

    // Tail: largest y <= x with weight(y, pi) >= eps, so the overlap stays within the predecessor.
    if (weight(-kPi, kPi) < eps)
        throw PartitionDegenerateError("lemma4_partition: terminal interval cannot reach the budget");
    double lo = -kPi, hi = x;
    for (int i = 0; i < kBisectionSteps && hi > lo; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (weight(mid, kPi) >= eps ? lo : hi) = mid;
    }
    part.intervals.emplace_back(lo, kPi);
    part.overlap_tail = part.intervals.size() > 1 && lo < x;
    return part;
}

double birman_schwinger_bound(const GridPotential1D& v, const FluxData& flux) {
    flux_constants(flux.psi);
    return flux.g0 * v.integral();
}

NeumannWellBound neumann_well_bounds(const GridPotential1D& q) {
    const double length = q.back() - q.front();
    const double strength = length * q.integral();
    const double root = eval_g(strength) / length;
    return {-root * root, strength <= 3.0};
}

long prop5_cell_count(double b, double gamma_sq) {
    if (!(b > 0.0)) throw DomainError("prop5_cell_count: Hardy weight must be positive");
    const double quarter = 0.25 * b;
    if (!(gamma_sq > quarter)) return 0;
    auto inside = [&](long m) {
        const double md = static_cast<double>(m);
        return kPi * kPi * md * md + quarter < gamma_sq;
    };
    long m = static_cast<long>(std::floor(std::sqrt((gamma_sq - quarter) / (kPi * kPi))));
    while (m > 0 && !inside(m)) --m;
    while (inside(m + 1)) ++m;
    return m + 1;
}

double prop5_majorant(double b, double gamma_sq) {
    if (!(b > 0.0)) throw DomainError("prop5_majorant: Hardy weight must be positive");
    return std::sqrt(std::max(gamma_sq, 0.0)) * eval_R(b);
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Unconverged: return "unconverged";
        case Verdict::OutOfHypothesis: return "out_of_hypothesis";
        case Verdict::NotCounted: return "not_counted";
    }
    return "unknown";
}

BoundReport theorem_bound(const TheoremId& id, const Potential& v, const BoundOptions& opts) {
    BoundReport rep;
    rep.theorem = id;

    bool type_ok = false;
    switch (id.kind) {
        case TheoremKind::HalfPlane: type_ok = std::holds_alternative<HalfPlanePotential>(v); break;
        case TheoremKind::AharonovBohm:
        case TheoremKind::Antisymmetric: type_ok = std::holds_alternative<RadialPotential>(v); break;
        case TheoremKind::OperatorCalogero:
            type_ok = std::holds_alternative<GridPotential1D>(v) || std::holds_alternative<MatrixPotential>(v);
            break;
    }
    if (!type_ok)
        throw DomainError("theorem_bound: potential type does not match theorem " +
                          std::string(to_string(id.kind)));
    require_monotone(v);

    if (const auto* scalar = std::get_if<GridPotential1D>(&v))
        rep.integral = scalar->sqrt_integral();
    else
        rep.integral = integrate(v);

    if (opts.scalar_sharp) {
        if (!std::holds_alternative<GridPotential1D>(v))
            throw DomainError("theorem_bound: the sharp constant 2/pi applies to scalar potentials only");
        rep.scalar_sharp = true;
        rep.constant = 2.0 / kPi;
    } else if (opts.params) {
        rep.params = opts.params;
        rep.constant = theorem_constant(id, *opts.params);
    } else {
        const auto best = optimize_constant(id);
        rep.params = best.params;
        rep.constant = best.value;
    }
    rep.constant_derived = id.kind == TheoremKind::AharonovBohm;
    rep.bound = rep.constant * rep.integral;
    rep.margin = rep.bound;
    return rep;
}

void assess(BoundReport& report) {
    const auto& t = report.trace;
    if (t.size() < kStableLevels) {
        report.verdict = Verdict::Unconverged;
        report.counted.reset();
        report.note = "fewer than three refinement levels";
        return;
    }
    const Eigen::Index last = t.back().count;
    for (std::size_t i = t.size() - kStableLevels; i < t.size(); ++i)
        if (t[i].count != last) {
            report.verdict = Verdict::Unconverged;
            report.counted.reset();
            report.note = "count not stable over the last three levels";
            return;
        }
    report.counted = last;
    report.margin = report.bound - static_cast<double>(last);
    report.verdict = static_cast<double>(last) <= report.bound ? Verdict::Pass : Verdict::Fail;
}

GridPotential1D restrict_to(const GridPotential1D& v, double lo, double hi) {
    if (!(hi > lo)) throw DomainError("restrict_to: empty interval");
    std::vector<double> x{lo}, y{v(lo)};
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double node = v.nodes()[i];
        if (node > lo && node < hi) {
            x.push_back(node);
            y.push_back(v.values()[i]);
        }
    }
    x.push_back(hi);
    y.push_back(v(hi));
    return {Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())),
            Eigen::Map<Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()))};
}

Lemma4Check lemma4_bound_check(const GridPotential1D& v, const FluxData& flux, const Lemma4Options& opts) {
    Lemma4Check out;
    out.flux = flux_constants(flux.psi);
    const FluxData& f = out.flux;
    out.integral = v.integral();
    out.rhs = f.d_psi * out.integral;
    out.bs_bound = birman_schwinger_bound(v, f);

    out.circle_n = opts.circle_n;
    const auto circle = build_circle(v, f, opts.circle_n);
    out.count = count_negative(circle).neg;
    out.lhs = trace_half_moment(circle);
    out.lhs_coarse = trace_half_moment(build_circle(v, f, opts.circle_n / 2));

    auto le = [&](double a, double b) { return a <= b + opts.rel_tolerance * std::max(std::abs(b), 1.0); };
    bool ok = le(out.lhs, out.rhs) && static_cast<double>(out.count) <= out.bs_bound + 1e-12;

    if (out.integral < 1.0 / f.g0) {
        out.note = "int v < 1/G_0(0): no partition needed";
        out.pass = ok;
        return out;
    }
    try {
        out.partition = lemma4_partition(v, f);
    } catch (const PartitionDegenerateError& e) {
        out.note = std::string("proof-chain replay skipped: ") + e.what();
        out.pass = ok;
        return out;
    }
    out.chain_replayed = true;
    const double g_eps = eval_g(f.epsilon);
    for (const auto& [lo, hi] : out.partition->intervals) {
        const auto cell = build_neumann(restrict_to(v, lo, hi).scaled(2.0), opts.cell_n);
        const double lowest = eigenvalues_dense(cell)[0];
        out.cell_eigenvalues.push_back(lowest);
        out.cell_negatives.push_back(count_negative(cell).neg);
        out.cell_sum += std::sqrt(std::max(-lowest, 0.0));
        out.chain_value += g_eps / (hi - lo);
    }
    ok = ok && le(out.lhs, out.cell_sum) && le(out.cell_sum, out.chain_value) && le(out.chain_value, out.rhs);
    for (auto c : out.cell_negatives) ok = ok && c <= 1;
    out.pass = ok;
    return out;
}

}  // namespace calogero
