#include "calogero/spectral.hpp"

#include "calogero/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

namespace calogero {

namespace {

void require_grid(Eigen::Index n, Eigen::Index min_n, const char* who) {
    if (n < min_n)
        throw DomainError(std::string(who) + ": grid needs at least " + std::to_string(min_n) +
                          " nodes");
}

void require_support(double support_end, double length, const char* who) {
    if (support_end > length * (1.0 + 1e-12))
        throw TruncationError(std::string(who) + ": potential support reaches " +
                              std::to_string(support_end) + " beyond the domain length " +
                              std::to_string(length));
}

void require_budget(Eigen::Index unknowns, Eigen::Index bandwidth, std::size_t budget,
                    const std::string& suggestion) {
    const std::size_t bytes = BandedSymmetric<double>::storage_bytes(unknowns, bandwidth);
    if (unknowns > kMaxUnknowns || bytes > budget) {
        std::ostringstream msg;
        msg << "discretization with " << unknowns << " unknowns and half-bandwidth " << bandwidth
            << " needs " << bytes / (1 << 20) << " MiB (limit " << kMaxUnknowns << " unknowns, "
            << budget / (1 << 20) << " MiB); try " << suggestion;
        throw ResourceLimitError(msg.str());
    }
}

// Position of node j in the order 0, n-1, 1, n-2, ... which keeps cyclic neighbours within 2.
Eigen::Index interleaved(Eigen::Index j, Eigen::Index n) { return j < (n + 1) / 2 ? 2 * j : 2 * (n - 1 - j) + 1; }

}  // namespace

TridiagonalOperator build_halfline(const GridPotential1D& v, double length, Eigen::Index n) {
    require_grid(n, 16, "build_halfline");
    if (!(length > 0.0)) throw DomainError("build_halfline: domain length must be positive");
    require_support(v.support_end(), length, "build_halfline");
    TridiagonalOperator op;
    op.h = length / static_cast<double>(n + 1);
    op.bc = Boundary::DirichletLeft;
    const double inv_h2 = 1.0 / (op.h * op.h);
    op.diag.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = static_cast<double>(i + 1) * op.h;
        op.diag[i] = 2.0 * inv_h2 - v.average(x - 0.5 * op.h, x + 0.5 * op.h);
    }
    op.off = Eigen::VectorXd::Constant(n - 1, -inv_h2);
    return op;
}

TridiagonalOperator build_neumann(const GridPotential1D& q, Eigen::Index n) {
    require_grid(n, 2, "build_neumann");
    const double length = q.back() - q.front();
    TridiagonalOperator op;
    op.h = length / static_cast<double>(n);
    op.bc = Boundary::NeumannBoth;
    const double inv_h2 = 1.0 / (op.h * op.h);
    op.diag.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double left = q.front() + static_cast<double>(i) * op.h;
        const double links = (i == 0 || i == n - 1) ? 1.0 : 2.0;
        op.diag[i] = links * inv_h2 - q.average(left, left + op.h);
    }
    op.off = Eigen::VectorXd::Constant(n - 1, -inv_h2);
    return op;
}

TridiagonalOperator build_circle(const GridPotential1D& v, const FluxData& flux, Eigen::Index n) {
    require_grid(n, 16, "build_circle");
    flux_constants(flux.psi);  // rejects integer flux
    TridiagonalOperator op;
    op.h = 2.0 * kPi / static_cast<double>(n);
    op.bc = Boundary::TwistedPeriodic;
    op.twist = 2.0 * kPi * (flux.psi - std::floor(flux.psi));
    const double inv_h2 = 1.0 / (op.h * op.h);
    op.diag.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        // Dual cell of node j, wrapped around the circle.
        const double lo = -kPi + (static_cast<double>(j) - 0.5) * op.h, hi = lo + op.h;
        double mass = v.integral(lo, hi);
        if (lo < -kPi) mass += v.integral(lo + 2.0 * kPi, kPi);
        if (hi > kPi) mass += v.integral(-kPi, hi - 2.0 * kPi);
        op.diag[j] = 2.0 * inv_h2 - mass / op.h;
    }
    op.off = Eigen::VectorXd::Constant(n, -inv_h2);
    return op;
}

TridiagonalOperator build_radial_mode(const RadialModeOperator& op, Eigen::Index n) {
    require_grid(n, 16, "build_radial_mode");
    if (!(op.nu >= 0.0)) throw DomainError("build_radial_mode: mode strength must be >= 0");
    if (op.weight_exponent != 0 && op.weight_exponent != 1)
        throw DomainError("build_radial_mode: weight exponent must be 0 or 1");
    if (!(op.domain_radius > 0.0)) throw DomainError("build_radial_mode: radius must be positive");
    require_support(op.potential.profile.support_end(), op.domain_radius, "build_radial_mode");

    TridiagonalOperator t;
    t.h = op.domain_radius / static_cast<double>(n + 1);
    t.bc = Boundary::DirichletLeft;
    const double h = t.h, inv_h2 = 1.0 / (h * h);
    const bool weighted = op.weight_exponent == 1;
    auto node = [h](Eigen::Index i) { return static_cast<double>(i + 1) * h; };
    auto face = [&](Eigen::Index i) {  // weight at r_{i+1/2}
        return weighted ? static_cast<double>(i) * h + 1.5 * h : 1.0;
    };
    t.diag.resize(n);
    t.off.resize(n - 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = node(i);
        const double mass = weighted ? r : 1.0;
        const double below = weighted ? r - 0.5 * h : 1.0;
        const double pot = op.potential.profile.average(r - 0.5 * h, r + 0.5 * h);
        const double stiff = (below + face(i)) * inv_h2 + (op.nu / (r * r) - pot) * mass;
        t.diag[i] = stiff / mass;
        if (i + 1 < n) {
            const double mass_next = weighted ? node(i + 1) : 1.0;
            t.off[i] = -face(i) * inv_h2 / std::sqrt(mass * mass_next);
        }
    }
    return t;
}

BandedSymmetric<double> build_halfplane(const HalfPlanePotential& v, const HalfPlaneGrid& grid,
                                        std::size_t memory_budget) {
    if (grid.n1 < 1 || grid.n2 < 1) throw DomainError("build_halfplane: empty grid");
    if (!(grid.length1 > 0.0 && grid.half_width2 > 0.0))
        throw DomainError("build_halfplane: domain extents must be positive");
    require_support(v.length1(), grid.length1, "build_halfplane");
    require_support(v.half_width2(), grid.half_width2, "build_halfplane");
    const Eigen::Index n = grid.n1 * grid.n2;
    {
        std::ostringstream s;
        s << "n1=" << std::max<Eigen::Index>(1, grid.n1 / 2) << ", n2=" << std::max<Eigen::Index>(1, grid.n2 / 2);
        require_budget(n, grid.n2, memory_budget, s.str());
    }

    const double h1 = grid.length1 / static_cast<double>(grid.n1 + 1);
    const double h2 = 2.0 * grid.half_width2 / static_cast<double>(grid.n2 + 1);
    const double c1 = 1.0 / (h1 * h1), c2 = 1.0 / (h2 * h2);
    BandedSymmetric<double> m(n, n > 1 ? std::min(grid.n2, n - 1) : 0);
    for (Eigen::Index i = 0; i < grid.n1; ++i) {
        const double x1 = static_cast<double>(i + 1) * h1;
        for (Eigen::Index j = 0; j < grid.n2; ++j) {
            const double x2 = -grid.half_width2 + static_cast<double>(j + 1) * h2;
            const Eigen::Index k = i * grid.n2 + j;
            m.coeffRef(k, k) = 2.0 * c1 + 2.0 * c2 - v.average(x1 - 0.5 * h1, x1 + 0.5 * h1, x2 - 0.5 * h2, x2 + 0.5 * h2);
            if (j + 1 < grid.n2) m.coeffRef(k + 1, k) = -c2;
            if (i + 1 < grid.n1) m.coeffRef(k + grid.n2, k) = -c1;
        }
    }
    return m;
}

BandedSymmetric<double> build_matrix_halfline(const MatrixPotential& v, double length, Eigen::Index n,
                                              std::size_t memory_budget) {
    require_grid(n, 16, "build_matrix_halfline");
    const Eigen::Index d = v.shape.rows();
    if (d < 1 || d > 64 || v.shape.cols() != d)
        throw DomainError("build_matrix_halfline: shape must be square with dimension in [1, 64]");
    if (!(length > 0.0)) throw DomainError("build_matrix_halfline: domain length must be positive");
    require_support(v.profile.support_end(), length, "build_matrix_halfline");
    require_budget(n * d, d, memory_budget, "n=" + std::to_string(n / 2));

    const double h = length / static_cast<double>(n + 1);
    const double inv_h2 = 1.0 / (h * h);
    const Eigen::Index dim = n * d;
    BandedSymmetric<double> m(dim, std::min(d, dim - 1));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = static_cast<double>(i + 1) * h;
        const double phi = v.profile.average(t - 0.5 * h, t + 0.5 * h);
        for (Eigen::Index c = 0; c < d; ++c) {
            const Eigen::Index k = i * d + c;
            for (Eigen::Index r = c; r < d; ++r) m.coeffRef(i * d + r, k) = -phi * v.shape(r, c);
            m.coeffRef(k, k) += 2.0 * inv_h2;
            if (i + 1 < n) m.coeffRef(k + d, k) = -inv_h2;
        }
    }
    return m;
}

BandedSymmetric<double> to_banded(const TridiagonalOperator& op) {
    const Eigen::Index n = op.size();
    if (op.bc != Boundary::TwistedPeriodic) {
        BandedSymmetric<double> m(n, n > 1 ? 1 : 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            m.coeffRef(i, i) = op.diag[i];
            if (i + 1 < n) m.coeffRef(i + 1, i) = op.off[i];
        }
        return m;
    }
    // Complex entry z at (j, k) becomes [[Re z, -Im z], [Im z, Re z]] on (Re, Im) unknowns.
    BandedSymmetric<double> m(2 * n, 5);
    auto re = [n](Eigen::Index j) { return 2 * interleaved(j, n); };
    auto put = [&](Eigen::Index j, Eigen::Index k, std::complex<double> z) {
        m.coeffRef(re(j), re(k)) = z.real();
        m.coeffRef(re(j) + 1, re(k) + 1) = z.real();
        m.coeffRef(re(j), re(k) + 1) = -z.imag();
        if (j != k) m.coeffRef(re(j) + 1, re(k)) = z.imag();
    };
    for (Eigen::Index j = 0; j < n; ++j) {
        put(j, j, op.diag[j]);
        if (j + 1 < n) put(j + 1, j, op.off[j]);
    }
    put(n - 1, 0, op.off[n - 1] * std::polar(1.0, op.twist));
    return m;
}

Eigen::MatrixXd to_dense(const TridiagonalOperator& op) { return to_banded(op).to_dense(); }

Inertia count_negative(const TridiagonalOperator& op, double shift) {
    if (op.bc != Boundary::TwistedPeriodic) return sturm_inertia<double>(op.diag, op.off, shift);
    Inertia in = count_negative(to_banded(op), shift);
    in.neg /= 2;
    in.zero /= 2;
    in.pos /= 2;
    return in;
}

Eigen::VectorXd eigenvalues_dense(const Eigen::MatrixXd& m) {
    if (m.rows() > kMaxDenseDimension)
        throw ResourceLimitError("eigenvalues_dense: dimension " + std::to_string(m.rows()) +
                                 " exceeds " + std::to_string(kMaxDenseDimension));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Eigen::VectorXd eigenvalues_dense(const BandedSymmetric<double>& m) { return eigenvalues_dense(m.to_dense()); }

Eigen::VectorXd eigenvalues_dense(const TridiagonalOperator& op) {
    if (op.bc != Boundary::TwistedPeriodic) {
        if (op.size() == 1) return op.diag;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(op.diag, op.off, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }
    // The n x n Hermitian form; the doubled real matrix has the same spectrum twice.
    const Eigen::Index n = op.size();
    if (n > kMaxDenseDimension)
        throw ResourceLimitError("eigenvalues_dense: dimension " + std::to_string(n) + " exceeds " +
                                 std::to_string(kMaxDenseDimension));
    Eigen::MatrixXcd hm = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        hm(j, j) = op.diag[j];
        if (j + 1 < n) hm(j + 1, j) = hm(j, j + 1) = op.off[j];
    }
    hm(n - 1, 0) = op.off[n - 1] * std::polar(1.0, op.twist);
    hm(0, n - 1) = std::conj(hm(n - 1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double max_eigen_residual(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double norm = std::max(m.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);
    const Eigen::MatrixXd r = m * es.eigenvectors() - es.eigenvectors() * es.eigenvalues().asDiagonal();
    return r.colwise().norm().maxCoeff() / norm;
}

double trace_half_moment(const TridiagonalOperator& op) {
    const Eigen::VectorXd ev = eigenvalues_dense(op);
    double sum = 0.0;
    for (double lambda : ev)
        if (lambda < 0.0) sum += std::sqrt(-lambda);
    return sum;
}

ModeCutoff mode_cutoff(const RadialPotential& v, const std::optional<FluxData>& flux) {
    if (flux) flux_constants(flux->psi);
    ModeCutoff c;
    const auto& p = v.profile;
    c.radius = p.support_end();
    c.peak = p.max_value();
    c.never_vanishes = p.size() >= 2 && c.radius >= p.back() && p.values()[p.size() - 1] > 0.0;
    c.modes = static_cast<int>(std::ceil(c.radius * std::sqrt(c.peak))) + 1;
    return c;
}

ModeSum count_radial_modes(const RadialPotential& v, const std::optional<FluxData>& flux,
                           double domain_radius, Eigen::Index n) {
    ModeSum sum;
    sum.cutoff = mode_cutoff(v, flux);
    const int big_m = sum.cutoff.modes;
    RadialModeOperator op{0.0, v, domain_radius, 1};
    auto add = [&](int m, double shift) {
        op.nu = (m + shift) * (m + shift);
        const Eigen::Index c = count_negative(build_radial_mode(op, n)).neg;
        sum.modes.push_back({m, op.nu, c});
        sum.total += c;
        return c;
    };
    if (flux) {
        const double frac = flux->psi - std::floor(flux->psi);
        bool edge_zero = true;
        for (int m = -big_m; m <= big_m; ++m) {
            const Eigen::Index c = add(m, frac);
            if (std::abs(m) == big_m) edge_zero = edge_zero && c == 0;
        }
        sum.cutoff_verified = edge_zero;
    } else {
        Eigen::Index last = 0;
        for (int m = 1; m <= big_m; ++m) last = add(m, 0.0);
        sum.cutoff_verified = last == 0;
    }
    return sum;
}

}  // namespace calogero
