#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <string>
#include <variant>

namespace calogero {

/// Nonnegative piecewise-constant function on [nodes.front(), nodes.back()].
///
/// On [x_i, x_{i+1}) the value is values[i]; the final value only applies at
/// the last node. Outside the node range the function is zero.
class GridPotential1D {
public:
    GridPotential1D() = default;
    GridPotential1D(Eigen::VectorXd nodes, Eigen::VectorXd values);

    const Eigen::VectorXd& nodes() const { return nodes_; }
    const Eigen::VectorXd& values() const { return values_; }
    Eigen::Index size() const { return nodes_.size(); }
    double front() const { return nodes_[0]; }
    double back() const { return nodes_[nodes_.size() - 1]; }

    double operator()(double x) const;
    /// Exact integral over [lo, hi] (clipped to the node range).
    double integral(double lo, double hi) const;
    double integral() const { return integral(front(), back()); }
    /// Mean over [lo, hi] (zero outside the node range).
    double average(double lo, double hi) const { return integral(lo, hi) / (hi - lo); }
    /// Exact integral of the square root.
    double sqrt_integral() const;
    /// Largest x at which the function is still positive (support end); front() if identically zero.
    double support_end() const;
    double max_value() const { return values_.maxCoeff(); }

    GridPotential1D scaled(double factor) const;

private:
    Eigen::VectorXd nodes_;
    Eigen::VectorXd values_;
};

/// Radially symmetric potential V(|x|) on the plane, profile given on r in [0, R].
struct RadialPotential {
    GridPotential1D profile;
};

/// Potential on the half-plane lattice [0, L1) x [-L2, L2); cell (i, j) covers
/// [i h1, (i+1) h1) x [-L2 + j h2, -L2 + (j+1) h2). Zero outside the lattice.
class HalfPlanePotential {
public:
    HalfPlanePotential() = default;
    HalfPlanePotential(double length1, double half_width2, Eigen::MatrixXd cells);

    double length1() const { return length1_; }
    double half_width2() const { return half_width2_; }
    double h1() const { return length1_ / static_cast<double>(cells_.rows()); }
    double h2() const { return 2.0 * half_width2_ / static_cast<double>(cells_.cols()); }
    const Eigen::MatrixXd& cells() const { return cells_; }

    double operator()(double x1, double x2) const;
    /// Exact mean over the rectangle [lo1, hi1) x [lo2, hi2).
    double average(double lo1, double hi1, double lo2, double hi2) const;
    HalfPlanePotential scaled(double factor) const;

private:
    double length1_ = 0.0;
    double half_width2_ = 0.0;
    Eigen::MatrixXd cells_;
};

/// Separable operator-valued potential t -> profile(t) * shape on the half-line.
struct MatrixPotential {
    GridPotential1D profile;
    Eigen::MatrixXd shape;
};

using Potential = std::variant<GridPotential1D, RadialPotential, HalfPlanePotential, MatrixPotential>;

struct MonotoneVerdict {
    bool accepted = true;
    std::size_t first = 0;  ///< offending index pair (along the monotone direction)
    std::size_t second = 0;
    std::string message;

    explicit operator bool() const { return accepted; }
};

MonotoneVerdict validate_monotone(const GridPotential1D& v);
MonotoneVerdict validate_monotone(const RadialPotential& v);
MonotoneVerdict validate_monotone(const HalfPlanePotential& v);
MonotoneVerdict validate_monotone(const MatrixPotential& v);
MonotoneVerdict validate_monotone(const Potential& v);

/// Throws HypothesisError carrying the verdict's index pair on rejection.
void require_monotone(const Potential& v);

/// (sum_n sqrt(mu_n))^2 over the eigenvalues of a symmetric PSD matrix.
double schatten_half_norm(const Eigen::MatrixXd& a);

/// Plain integral on the line.
double integrate(const GridPotential1D& v);
/// Plane integral 2 pi int V(r) r dr.
double integrate(const RadialPotential& v);
double integrate(const HalfPlanePotential& v);
/// int sqrt(||V(t)||_{S_1/2}) dt.
double integrate(const MatrixPotential& v);
double integrate(const Potential& v);

namespace families {

/// amplitude on [0, radius), zero up to extent.
GridPotential1D indicator(double amplitude, double radius, double extent);
/// amplitude * exp(-decay x) sampled at `samples` uniform nodes on [0, extent].
GridPotential1D exponential(double amplitude, double decay, double extent, int samples);
/// amplitude * (1 + x)^(-exponent) on [0, cutoff), zero up to extent.
GridPotential1D power_decay(double amplitude, double exponent, double cutoff, double extent,
                            int samples);
/// amplitude on [-half_width, half_width) inside [-pi, pi].
GridPotential1D circle_indicator(double amplitude, double half_width);
/// amplitude on the whole circle [-pi, pi].
GridPotential1D circle_constant(double amplitude);
/// amplitude on the box [0, width) x [-half_height, half_height) of the half-plane.
HalfPlanePotential half_plane_box(double amplitude, double width, double half_height);

}  // namespace families

}  // namespace calogero
