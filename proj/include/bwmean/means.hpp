#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "bwmean/core.hpp"

namespace bwmean {

/// Strictly positive weights summing to one.
class WeightVector {
 public:
  WeightVector() = default;

  explicit WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw DomainError("weights: empty weight vector");
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (!(w_[i] > 0.0) || !std::isfinite(w_[i])) {
        throw DomainError(detail::concat("weights[", i, "] = ", w_[i], " is not positive"));
      }
    }
    const double sum = std::accumulate(w_.begin(), w_.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-12) {
      throw DomainError(detail::concat("weights sum to ", sum, ", expected 1"));
    }
  }

  static WeightVector uniform(std::size_t n) {
    if (n == 0) throw DomainError("weights: empty weight vector");
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    // Put the rounding slack on the last entry so the sum is 1 to the ulp.
    w.back() = 1.0 - std::accumulate(w.begin(), w.end() - 1, 0.0);
    return WeightVector(std::move(w));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  const std::vector<double>& values() const { return w_; }

 private:
  std::vector<double> w_;
};

/// A # B = A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2}.
inline SpdMatrix geometric_mean(const SpdMatrix& a, const SpdMatrix& b) {
  detail::require_same_dim(a.dim(), b.dim(), "geometric_mean");
  const SpdMatrix a_half = sqrtm(a);
  const SpdMatrix a_neg_half = inv_sqrtm(a);
  const SpdMatrix inner = congruence(a_neg_half.matrix(), b);
  return congruence(a_half.matrix(), sqrtm(inner));
}

/// Sum_j w_j A_j, accumulated in index order.
inline SpdMatrix arithmetic_mean(const WeightVector& w, const std::vector<SpdMatrix>& mats) {
  if (w.size() != mats.size()) {
    throw DimensionError(detail::concat("arithmetic_mean: ", w.size(), " weights for ",
                                        mats.size(), " matrices"));
  }
  const Eigen::Index m = mats.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(m, m);
  for (std::size_t j = 0; j < mats.size(); ++j) {
    detail::require_same_dim(m, mats[j].dim(), "arithmetic_mean");
    sum += w[j] * mats[j].matrix();
  }
  return SpdMatrix(sum);
}

/// Weighted harmonic mean (Sum_j w_j A_j^{-1})^{-1}.
inline SpdMatrix harmonic_mean(const WeightVector& w, const std::vector<SpdMatrix>& mats) {
  std::vector<SpdMatrix> inv;
  inv.reserve(mats.size());
  for (const auto& a : mats) inv.push_back(inverse(a));
  return inverse(arithmetic_mean(w, inv));
}

/// Kantorovich constant (p + q)^2 / (4 p q) for spectral bounds 0 < p <= q.
inline double kantorovich(double p, double q) {
  if (!(p > 0.0) || !(p <= q) || !std::isfinite(q)) {
    throw DomainError(detail::concat("kantorovich: need 0 < p <= q, got p = ", p, ", q = ", q));
  }
  return (p + q) * (p + q) / (4.0 * p * q);
}

}  // namespace bwmean
