#include "calogero/potentials.hpp"

#include "calogero/constants.hpp"
#include "calogero/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace calogero {

GridPotential1D::GridPotential1D(Eigen::VectorXd nodes, Eigen::VectorXd values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() < 2) throw DomainError("GridPotential1D: need at least two nodes");
    if (nodes_.size() != values_.size())
        throw DomainError("GridPotential1D: nodes and values differ in length");
    for (Eigen::Index i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i]) || !std::isfinite(values_[i]))
            throw DomainError("GridPotential1D: non-finite entry");
        if (values_[i] < 0.0) throw DomainError("GridPotential1D: negative value");
        if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
            throw DomainError("GridPotential1D: nodes must be strictly increasing");
    }
}

double GridPotential1D::operator()(double x) const {
    if (x < front() || x > back()) return 0.0;
    const double* begin = nodes_.data();
    const double* it = std::upper_bound(begin, begin + nodes_.size(), x);
    return values_[(it - begin) - 1];
}

double GridPotential1D::integral(double lo, double hi) const {
    lo = std::max(lo, front());
    hi = std::min(hi, back());
    if (!(hi > lo)) return 0.0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < nodes_.size(); ++i) {
        const double l = std::max(lo, nodes_[i]);
        const double r = std::min(hi, nodes_[i + 1]);
        if (r > l) sum += values_[i] * (r - l);
    }
    return sum;
}

double GridPotential1D::sqrt_integral() const {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < nodes_.size(); ++i)
        sum += std::sqrt(values_[i]) * (nodes_[i + 1] - nodes_[i]);
    return sum;
}

double GridPotential1D::support_end() const {
    for (Eigen::Index i = nodes_.size() - 2; i >= 0; --i)
        if (values_[i] > 0.0) return nodes_[i + 1];
    return front();
}

GridPotential1D GridPotential1D::scaled(double factor) const {
    if (!(factor >= 0.0)) throw DomainError("GridPotential1D::scaled: factor must be >= 0");
    return {nodes_, values_ * factor};
}

HalfPlanePotential::HalfPlanePotential(double length1, double half_width2, Eigen::MatrixXd cells)
    : length1_(length1), half_width2_(half_width2), cells_(std::move(cells)) {
    if (!(length1_ > 0.0 && half_width2_ > 0.0))
        throw DomainError("HalfPlanePotential: lattice extents must be positive");
    if (cells_.size() == 0) throw DomainError("HalfPlanePotential: empty lattice");
    if (!cells_.allFinite() || (cells_.array() < 0.0).any())
        throw DomainError("HalfPlanePotential: values must be finite and nonnegative");
}

double HalfPlanePotential::operator()(double x1, double x2) const {
    if (x1 < 0.0 || x1 >= length1_ || x2 < -half_width2_ || x2 >= half_width2_) return 0.0;
    const auto i = std::min<Eigen::Index>(static_cast<Eigen::Index>(x1 / h1()), cells_.rows() - 1);
    const auto j = std::min<Eigen::Index>(static_cast<Eigen::Index>((x2 + half_width2_) / h2()),
                                          cells_.cols() - 1);
    return cells_(i, j);
}

double HalfPlanePotential::average(double lo1, double hi1, double lo2, double hi2) const {
    const double a1 = std::max(lo1, 0.0), b1 = std::min(hi1, length1_);
    const double a2 = std::max(lo2, -half_width2_), b2 = std::min(hi2, half_width2_);
    if (!(b1 > a1 && b2 > a2)) return 0.0;
    const double dx = h1(), dy = h2();
    const auto i0 = static_cast<Eigen::Index>(a1 / dx);
    const auto j0 = static_cast<Eigen::Index>((a2 + half_width2_) / dy);
    double sum = 0.0;
    for (Eigen::Index i = i0; i < cells_.rows() && static_cast<double>(i) * dx < b1; ++i) {
        const double w1 = std::min(b1, static_cast<double>(i + 1) * dx) - std::max(a1, static_cast<double>(i) * dx);
        if (w1 <= 0.0) continue;
        for (Eigen::Index j = j0; j < cells_.cols() && -half_width2_ + static_cast<double>(j) * dy < b2; ++j) {
            const double w2 = std::min(b2, -half_width2_ + static_cast<double>(j + 1) * dy) -
                              std::max(a2, -half_width2_ + static_cast<double>(j) * dy);
            if (w2 > 0.0) sum += cells_(i, j) * w1 * w2;
        }
    }
    return sum / ((hi1 - lo1) * (hi2 - lo2));
}

HalfPlanePotential HalfPlanePotential::scaled(double factor) const {
    if (!(factor >= 0.0)) throw DomainError("HalfPlanePotential::scaled: factor must be >= 0");
    return {length1_, half_width2_, cells_ * factor};
}

MonotoneVerdict validate_monotone(const GridPotential1D& v) {
    const auto& val = v.values();
    for (Eigen::Index i = 0; i + 1 < val.size(); ++i) {
        if (val[i + 1] > val[i]) {
            std::ostringstream msg;
            msg << "potential increases between nodes " << i << " and " << i + 1 << " ("
                << val[i] << " -> " << val[i + 1] << ")";
            return {false, static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1), msg.str()};
        }
    }
    return {};
}

MonotoneVerdict validate_monotone(const RadialPotential& v) {
    if (v.profile.front() < 0.0) return {false, 0, 0, "radial profile starts at negative radius"};
    return validate_monotone(v.profile);
}

MonotoneVerdict validate_monotone(const HalfPlanePotential& v) {
    const auto& c = v.cells();
    for (Eigen::Index j = 0; j < c.cols(); ++j)
        for (Eigen::Index i = 0; i + 1 < c.rows(); ++i)
            if (c(i + 1, j) > c(i, j)) {
                std::ostringstream msg;
                msg << "potential increases in x1 between cells (" << i << ", " << j << ") and ("
                    << i + 1 << ", " << j << ")";
                return {false, static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1),
                        msg.str()};
            }
    return {};
}

MonotoneVerdict validate_monotone(const MatrixPotential& v) {
    const auto& a = v.shape;
    if (a.rows() != a.cols() || a.rows() == 0) return {false, 0, 0, "shape matrix must be square"};
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        return {false, 0, 0, "shape matrix is not symmetric"};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10 * scale)
        return {false, 0, 0, "shape matrix is not positive semidefinite"};
    return validate_monotone(v.profile);
}

MonotoneVerdict validate_monotone(const Potential& v) {
    return std::visit([](const auto& p) { return validate_monotone(p); }, v);
}

void require_monotone(const Potential& v) {
    if (auto verdict = validate_monotone(v); !verdict)
        throw HypothesisError(verdict.message, verdict.first, verdict.second);
}

double schatten_half_norm(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw DomainError("schatten_half_norm: matrix must be square");
    if (a.size() == 0) return 0.0;
    const double norm = a.cwiseAbs().maxCoeff();
    if (norm == 0.0) return 0.0;
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * norm)
        throw DomainError("schatten_half_norm: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    double root_sum = 0.0;
    for (double mu : es.eigenvalues()) {
        if (mu < -1e-10 * norm)
            throw DomainError("schatten_half_norm: matrix is significantly indefinite");
        root_sum += std::sqrt(std::max(mu, 0.0));
    }
    return root_sum * root_sum;
}

double integrate(const GridPotential1D& v) { return v.integral(); }

double integrate(const RadialPotential& v) {
    const auto& r = v.profile.nodes();
    const auto& val = v.profile.values();
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < r.size(); ++i)
        sum += val[i] * 0.5 * (r[i + 1] * r[i + 1] - r[i] * r[i]);
    return 2.0 * kPi * sum;
}

double integrate(const HalfPlanePotential& v) { return v.cells().sum() * v.h1() * v.h2(); }

double integrate(const MatrixPotential& v) {
    return v.profile.sqrt_integral() * std::sqrt(schatten_half_norm(v.shape));
}

double integrate(const Potential& v) {
    return std::visit([](const auto& p) { return integrate(p); }, v);
}

namespace families {

GridPotential1D indicator(double amplitude, double radius, double extent) {
    if (!(radius > 0.0) || !(extent >= radius))
        throw DomainError("indicator: need 0 < radius <= extent");
    if (extent == radius)
        return {Eigen::Vector2d(0.0, radius), Eigen::Vector2d(amplitude, 0.0)};
    return {Eigen::Vector3d(0.0, radius, extent), Eigen::Vector3d(amplitude, 0.0, 0.0)};
}

GridPotential1D exponential(double amplitude, double decay, double extent, int samples) {
    if (samples < 2 || !(extent > 0.0)) throw DomainError("exponential: bad sampling");
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(samples, 0.0, extent);
    Eigen::VectorXd v = amplitude * (-decay * x.array()).exp();
    return {std::move(x), std::move(v)};
}

GridPotential1D power_decay(double amplitude, double exponent, double cutoff, double extent,
                            int samples) {
    if (samples < 2 || !(cutoff > 0.0) || !(extent >= cutoff))
        throw DomainError("power_decay: bad sampling");
    Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(samples, 0.0, cutoff);
    Eigen::VectorXd v = amplitude * (1.0 + x.array()).pow(-exponent);
    v[samples - 1] = 0.0;
    if (extent > cutoff) {
        x.conservativeResize(samples + 1);
        v.conservativeResize(samples + 1);
        x[samples] = extent;
        v[samples] = 0.0;
    }
    return {std::move(x), std::move(v)};
}

GridPotential1D circle_indicator(double amplitude, double half_width) {
    if (!(half_width > 0.0)) throw DomainError("circle_indicator: half width must be positive");
    if (half_width >= kPi) return circle_constant(amplitude);
    Eigen::Vector4d x(-kPi, -half_width, half_width, kPi);
    Eigen::Vector4d v(0.0, amplitude, 0.0, 0.0);
    return {x, v};
}

GridPotential1D circle_constant(double amplitude) {
    return {Eigen::Vector2d(-kPi, kPi), Eigen::Vector2d(amplitude, amplitude)};
}

HalfPlanePotential half_plane_box(double amplitude, double width, double half_height) {
    return {width, half_height, Eigen::MatrixXd::Constant(1, 1, amplitude)};
}

}  // namespace families

}  // namespace calogero
