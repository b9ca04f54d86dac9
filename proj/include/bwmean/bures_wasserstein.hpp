#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "bwmean/core.hpp"
#include "bwmean/means.hpp"

namespace bwmean {

namespace detail {

/// tr((A+B)/2) - tr(A^{1/2} B A^{1/2})^{1/2}, clamped at zero when round-off
/// pushes it negative by less than 1e-12 (relative to the trace scale).
inline double bw_squared(const SpdMatrix& a, const SpdMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "bw_distance");
  const SpdMatrix inner = congruence(sqrtm(a).matrix(), b);
  const double half_trace = 0.5 * (a.trace() + b.trace());
  const double value = half_trace - trace_sqrt(inner);
  if (value >= 0.0) return value;
  const double slack = 1e-12 * std::max(1.0, half_trace);
  if (value >= -slack) return 0.0;
  throw NumericalError(concat("bw_distance: squared distance ", value,
                              " is negative beyond round-off"));
}

}  // namespace detail

/// d(A,B) = [tr((A+B)/2) - tr(A^{1/2} B A^{1/2})^{1/2}]^{1/2}.
inline double bw_distance(const SpdMatrix& a, const SpdMatrix& b) {
  return std::sqrt(detail::bw_squared(a, b));
}

inline double bw_distance_squared(const SpdMatrix& a, const SpdMatrix& b) {
  return detail::bw_squared(a, b);
}

/// Principal square root of the (non-Hermitian) product AB, through the
/// similarity A^{1/2} (A^{1/2} B A^{1/2})^{1/2} A^{-1/2}.
inline ComplexMatrix product_sqrt(const SpdMatrix& a, const SpdMatrix& b) {
  detail::require_same_dim(a.dim(), b.dim(), "product_sqrt");
  const SpdMatrix a_half = sqrtm(a);
  const SpdMatrix inner = congruence(a_half.matrix(), b);
  return a_half.matrix() * sqrtm(inner).matrix() * inv_sqrtm(a).matrix();
}

/// A <>_t B = (1-t)^2 A + t^2 B + t(1-t)[(AB)^{1/2} + (BA)^{1/2}], t in [0,1].
inline SpdMatrix geodesic(const SpdMatrix& a, const SpdMatrix& b, double t) {
  detail::require_same_dim(a.dim(), b.dim(), "geodesic");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError(detail::concat("geodesic: t = ", t, " is outside [0, 1]"));
  }
  if (t == 0.0) return a;
  if (t == 1.0) return b;
  const double s = 1.0 - t;
  const ComplexMatrix cross = product_sqrt(a, b) + product_sqrt(b, a);
  return SpdMatrix(ComplexMatrix(s * s * a.matrix() + t * t * b.matrix() + t * s * cross));
}

/// Gaussian measure N(mean, cov) on R^n.
struct GaussianParams {
  RealVector mean;
  SpdMatrix cov;

  GaussianParams(RealVector mean_in, SpdMatrix cov_in)
      : mean(std::move(mean_in)), cov(std::move(cov_in)) {
    detail::require_same_dim(mean.size(), cov.dim(), "GaussianParams");
  }
};

/// 2-Wasserstein distance between Gaussians:
/// W_2^2 = |m1 - m2|^2 + tr[A + B - 2 (A^{1/2} B A^{1/2})^{1/2}].
inline double gaussian_w2(const GaussianParams& mu, const GaussianParams& nu) {
  detail::require_same_dim(mu.cov.dim(), nu.cov.dim(), "gaussian_w2");
  const double shift = (mu.mean - nu.mean).squaredNorm();
  return std::sqrt(shift + 2.0 * detail::bw_squared(mu.cov, nu.cov));
}

/// Entrywise nonnegative vector summing to one.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw DomainError("probability vector is empty");
    for (std::size_t i = 0; i < p_.size(); ++i) {
      if (!(p_[i] >= 0.0) || !std::isfinite(p_[i])) {
        throw DomainError(detail::concat("p[", i, "] = ", p_[i], " is negative"));
      }
    }
    const double sum = std::accumulate(p_.begin(), p_.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12) {
      throw DomainError(detail::concat("probabilities sum to ", sum, ", expected 1"));
    }
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const { return p_; }

 private:
  std::vector<double> p_;
};

/// [1/2 Sum_i (sqrt p_i - sqrt q_i)^2]^{1/2}.
inline double hellinger(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) {
    throw DimensionError(detail::concat("hellinger: length mismatch (", p.size(), " vs ",
                                        q.size(), ")"));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
    s += d * d;
  }
  return std::sqrt(0.5 * s);
}

}  // namespace bwmean
