#pragma once

#include "calogero/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace calogero {

/// Sylvester inertia of a symmetric matrix (or of M - shift I).
struct Inertia {
    Eigen::Index neg = 0;
    Eigen::Index zero = 0;
    Eigen::Index pos = 0;
    double tolerance = 0.0;  ///< pivot threshold tau
    double shift = 0.0;      ///< shift actually factored (differs from the request after jitter)
    bool jittered = false;

    Eigen::Index size() const { return neg + zero + pos; }
};

inline constexpr double kPivotRelTolerance = 1e-9;
inline constexpr double kShiftJitter = 1e-8;

/// Symmetric band matrix with half-bandwidth w, lower band stored column-wise:
/// band(k, j) = M(j + k, j) for 0 <= k <= w.
template <typename Scalar>
class BandedSymmetric {
public:
    using Band = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    BandedSymmetric() = default;
    BandedSymmetric(Eigen::Index n, Eigen::Index bandwidth)
        : n_(n), w_(bandwidth), band_(Band::Zero(bandwidth + 1, n)) {
        if (n < 1 || bandwidth < 0 || (bandwidth >= n && n > 1))
            throw DomainError("BandedSymmetric: need 0 <= bandwidth < n");
    }

    Eigen::Index rows() const { return n_; }
    Eigen::Index cols() const { return n_; }
    Eigen::Index bandwidth() const { return w_; }
    const Band& band() const { return band_; }

    static std::size_t storage_bytes(Eigen::Index n, Eigen::Index bandwidth) {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(bandwidth + 1) * sizeof(Scalar);
    }

    Scalar operator()(Eigen::Index i, Eigen::Index j) const {
        if (i < j) std::swap(i, j);
        return i - j <= w_ ? band_(i - j, j) : Scalar(0);
    }

    /// Reference to the stored entry (i, j) == (j, i); |i - j| must not exceed the bandwidth.
    Scalar& coeffRef(Eigen::Index i, Eigen::Index j) {
        if (i < j) std::swap(i, j);
        eigen_assert(i - j <= w_);
        return band_(i - j, j);
    }

    /// Max absolute row sum.
    Scalar inf_norm() const {
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rows = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(n_);
        for (Eigen::Index j = 0; j < n_; ++j) {
            rows[j] += std::abs(band_(0, j));
            for (Eigen::Index k = 1; k <= w_ && j + k < n_; ++k) {
                const Scalar a = std::abs(band_(k, j));
                rows[j] += a;
                rows[j + k] += a;
            }
        }
        return rows.maxCoeff();
    }

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> to_dense() const {
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
            Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_, n_);
        for (Eigen::Index j = 0; j < n_; ++j)
            for (Eigen::Index k = 0; k <= w_ && j + k < n_; ++k) m(j + k, j) = m(j, j + k) = band_(k, j);
        return m;
    }

private:
    Eigen::Index n_ = 0;
    Eigen::Index w_ = 0;
    Band band_;
};

namespace detail {

// Banded LDL^T without pivoting on a private copy of the band. Returns
// nullopt on pivot breakdown (tiny pivot with a nonzero remainder below it).
template <typename Scalar>
std::optional<Inertia> banded_ldlt_inertia(typename BandedSymmetric<Scalar>::Band band, Eigen::Index w,
                                           Scalar shift, Scalar tau) {
    const Eigen::Index n = band.cols();
    Inertia in;
    in.tolerance = static_cast<double>(tau);
    in.shift = static_cast<double>(shift);
    band.row(0).array() -= shift;
    for (Eigen::Index j = 0; j < n; ++j) {
        const Scalar d = band(0, j);
        const Eigen::Index reach = std::min(w, n - 1 - j);
        if (std::abs(d) < tau) {
            if (reach > 0 && band.col(j).segment(1, reach).cwiseAbs().maxCoeff() >= tau)
                return std::nullopt;
            ++in.zero;
            continue;
        }
        (d < 0 ? in.neg : in.pos) += 1;
        // Schur complement update of the trailing band: A(j+r, j+c) -= l_r * A(j+c, j), r >= c.
        for (Eigen::Index c = 1; c <= reach; ++c) {
            const Scalar colc = band(c, j);
            if (colc == Scalar(0)) continue;
            const Scalar lc = colc / d;
            for (Eigen::Index r = c; r <= reach; ++r) band(r - c, j + c) -= band(r, j) * lc;
        }
    }
    return in;
}

template <typename Scalar, typename Factor>
Inertia with_jitter(Factor&& factor, Scalar shift, Scalar norm) {
    if (auto in = factor(shift)) return *in;
    const Scalar delta = Scalar(kShiftJitter) * std::max(norm, Scalar(1));
    for (Scalar s : {shift + delta, shift - delta}) {
        if (auto in = factor(s)) {
            in->jittered = true;
            return *in;
        }
    }
    throw IndeterminateCountError("symmetric factorization broke down at shift " +
                                  std::to_string(static_cast<double>(shift)) + " even after jitter");
}

}  // namespace detail

/// Inertia of M - shift I from banded LDL^T pivots; pivots below 1e-9 ||M||_inf count as zero.
template <typename Scalar>
Inertia count_negative(const BandedSymmetric<Scalar>& m, Scalar shift = Scalar(0)) {
    const Scalar norm = m.inf_norm() + std::abs(shift);
    const Scalar tau = Scalar(kPivotRelTolerance) * norm;
    return detail::with_jitter<Scalar>(
        [&](Scalar s) { return detail::banded_ldlt_inertia<Scalar>(m.band(), m.bandwidth(), s, tau); },
        shift, norm);
}

/// Inertia of the symmetric tridiagonal T - shift I by the Sturm pivot recursion.
template <typename Scalar>
Inertia sturm_inertia(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag,
                      const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& off, Scalar shift = Scalar(0)) {
    const Eigen::Index n = diag.size();
    Scalar norm = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Scalar row = std::abs(diag[i]);
        if (i > 0) row += std::abs(off[i - 1]);
        if (i + 1 < n) row += std::abs(off[i]);
        norm = std::max(norm, row);
    }
    norm += std::abs(shift);
    const Scalar tau = Scalar(kPivotRelTolerance) * norm;
    auto factor = [&](Scalar s) -> std::optional<Inertia> {
        Inertia in;
        in.tolerance = static_cast<double>(tau);
        in.shift = static_cast<double>(s);
        Scalar prev = 1;  // previous pivot; 'zero' pivots decouple the recursion
        bool prev_zero = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            Scalar d = diag[i] - s;
            if (!prev_zero) d -= off[i - 1] * off[i - 1] / prev;
            if (std::abs(d) < tau) {
                if (i + 1 < n && std::abs(off[i]) >= tau) return std::nullopt;
                ++in.zero;
                prev_zero = true;
                continue;
            }
            (d < 0 ? in.neg : in.pos) += 1;
            prev = d;
            prev_zero = false;
        }
        return in;
    };
    return detail::with_jitter<Scalar>(factor, shift, norm);
}

}  // namespace calogero
