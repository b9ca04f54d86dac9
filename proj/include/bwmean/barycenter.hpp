#pragma once

// Wasserstein (Bures-Wasserstein) barycenter of positive definite matrices.
//
// The mean X of (w; A_1..A_n) is the unique positive definite solution of
//
//     I = Sum_j w_j (A_j # X^{-1}),   equivalently   X = Sum_j w_j (X^{1/2} A_j X^{1/2})^{1/2}.
//
// The default solver iterates X <- X^{-1/2} S(X)^2 X^{-1/2} with
// S(X) = Sum_j w_j (X^{1/2} A_j X^{1/2})^{1/2}, whose fixed points are exactly
// the solutions above. Convergence is certified by the first form's residual.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bwmean/bures_wasserstein.hpp"
#include "bwmean/core.hpp"
#include "bwmean/means.hpp"
#include "bwmean/report.hpp"

namespace bwmean {

/// Weights paired with equally sized positive definite matrices.
class Ensemble {
 public:
  Ensemble() = default;

  Ensemble(WeightVector weights, std::vector<SpdMatrix> matrices)
      : weights_(std::move(weights)), matrices_(std::move(matrices)) {
    if (matrices_.empty()) throw DomainError("ensemble: no matrices");
    if (weights_.size() != matrices_.size()) {
      throw DimensionError(detail::concat("ensemble: ", weights_.size(), " weights for ",
                                          matrices_.size(), " matrices"));
    }
    for (std::size_t j = 1; j < matrices_.size(); ++j) {
      if (matrices_[j].dim() != matrices_[0].dim()) {
        throw DimensionError(detail::concat("ensemble: matrices[", j, "] has dimension ",
                                            matrices_[j].dim(), ", expected ",
                                            matrices_[0].dim()));
      }
    }
  }

  static Ensemble single(SpdMatrix a) { return Ensemble(WeightVector({1.0}), {std::move(a)}); }

  std::size_t size() const { return matrices_.size(); }
  Eigen::Index dim() const { return matrices_.front().dim(); }
  const WeightVector& weights() const { return weights_; }
  const std::vector<SpdMatrix>& matrices() const { return matrices_; }
  double weight(std::size_t j) const { return weights_[j]; }
  const SpdMatrix& matrix(std::size_t j) const { return matrices_[j]; }

  /// (A_1^{-1}, ..., A_n^{-1}) with the same weights.
  Ensemble inverted() const {
    std::vector<SpdMatrix> inv;
    inv.reserve(size());
    for (const auto& a : matrices_) inv.push_back(inverse(a));
    return Ensemble(weights_, std::move(inv));
  }

  Ensemble scaled(double c) const {
    std::vector<SpdMatrix> out;
    out.reserve(size());
    for (const auto& a : matrices_) out.push_back(c * a);
    return Ensemble(weights_, std::move(out));
  }

 private:
  WeightVector weights_;
  std::vector<SpdMatrix> matrices_;
};

inline SpdMatrix arithmetic_mean(const Ensemble& e) {
  return arithmetic_mean(e.weights(), e.matrices());
}

enum class IterationRule {
  /// X <- X^{-1/2} S(X)^2 X^{-1/2}
  kCongruence,
  /// X <- S(X); kept for experimentation, not guaranteed to converge fast.
  kNaive,
};

struct SolverConfig {
  int max_iter = 200;
  double residual_tol = 1e-11;
  /// Starting point; the arithmetic mean when empty.
  std::optional<SpdMatrix> init;
  IterationRule rule = IterationRule::kCongruence;

  void validate() const {
    if (max_iter < 0) throw DomainError("solver: max_iter must be nonnegative");
    if (!(residual_tol > 0.0)) throw DomainError("solver: residual_tol must be positive");
  }
};

struct SolverReport {
  SpdMatrix mean;
  int iterations = 0;
  double residual = 0.0;
  double objective = 0.0;
  bool converged = false;
};

/// ||I - Sum_j w_j (A_j # X^{-1})||_F.
inline double residual(const SpdMatrix& x, const Ensemble& e) {
  detail::require_same_dim(x.dim(), e.dim(), "residual");
  const SpdMatrix x_inv = inverse(x);
  ComplexMatrix sum = ComplexMatrix::Identity(x.dim(), x.dim());
  for (std::size_t j = 0; j < e.size(); ++j) {
    sum -= e.weight(j) * geometric_mean(e.matrix(j), x_inv).matrix();
  }
  return sum.norm();
}

/// S(X) = Sum_j w_j (X^{1/2} A_j X^{1/2})^{1/2}.
inline ComplexMatrix fixed_point_map(const SpdMatrix& x, const Ensemble& e) {
  detail::require_same_dim(x.dim(), e.dim(), "fixed_point_map");
  const SpdMatrix x_half = sqrtm(x);
  ComplexMatrix sum = ComplexMatrix::Zero(x.dim(), x.dim());
  for (std::size_t j = 0; j < e.size(); ++j) {
    sum += e.weight(j) * sqrtm(congruence(x_half.matrix(), e.matrix(j))).matrix();
  }
  return detail::symmetrize(sum);
}

/// ||X - S(X)||_F, the residual of the second characterization.
inline double fixed_point_residual(const SpdMatrix& x, const Ensemble& e) {
  return (x.matrix() - fixed_point_map(x, e)).norm();
}

/// Sum_j w_j d^2(X, A_j).
inline double objective(const SpdMatrix& x, const Ensemble& e) {
  detail::require_same_dim(x.dim(), e.dim(), "objective");
  double f = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    f += e.weight(j) * bw_distance_squared(x, e.matrix(j));
  }
  return f;
}

namespace detail {

inline SpdMatrix barycenter_step(const SpdMatrix& x, const Ensemble& e, IterationRule rule) {
  const ComplexMatrix s = fixed_point_map(x, e);
  if (rule == IterationRule::kNaive) return SpdMatrix(s);
  const SpdMatrix x_neg_half = inv_sqrtm(x);
  const ComplexMatrix t = x_neg_half.matrix() * s;
  return SpdMatrix(ComplexMatrix(t * t.adjoint()));
}

}  // namespace detail

/// Solves for the Wasserstein mean. Non-convergence is reported through
/// `converged = false` together with the best iterate found; loss of positive
/// definiteness during the iteration throws NumericalError.
inline SolverReport wasserstein_mean(const Ensemble& e, const SolverConfig& cfg = {}) {
  cfg.validate();
  SpdMatrix x = cfg.init ? *cfg.init : arithmetic_mean(e);
  detail::require_same_dim(x.dim(), e.dim(), "wasserstein_mean");

  SolverReport best{x, 0, residual(x, e), 0.0, false};
  int k = 0;
  double res = best.residual;
  while (res > cfg.residual_tol && k < cfg.max_iter) {
    try {
      x = detail::barycenter_step(x, e, cfg.rule);
    } catch (const DomainError& ex) {
      throw NumericalError(detail::concat("wasserstein_mean: iterate ", k + 1,
                                          " lost positive definiteness: ", ex.what()));
    }
    ++k;
    res = residual(x, e);
    if (res < best.residual) {
      best.mean = x;
      best.residual = res;
    }
  }
  best.iterations = k;
  best.converged = best.residual <= cfg.residual_tol;
  best.objective = objective(best.mean, e);
  return best;
}

/// Max-norm of A_i A_j - A_j A_i relative to ||A_i|| ||A_j||, and the pair.
struct CommutatorReport {
  double relative_norm = 0.0;
  std::size_t first = 0;
  std::size_t second = 0;
};

inline CommutatorReport worst_commutator(const std::vector<SpdMatrix>& mats) {
  CommutatorReport worst;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = i + 1; j < mats.size(); ++j) {
      const ComplexMatrix& a = mats[i].matrix();
      const ComplexMatrix& b = mats[j].matrix();
      const double rel = (a * b - b * a).norm() / (a.norm() * b.norm());
      if (rel > worst.relative_norm) worst = {rel, i, j};
    }
  }
  return worst;
}

/// [Sum_j w_j A_j^{1/2}]^2 for pairwise commuting A_j.
inline SpdMatrix commuting_closed_form(const Ensemble& e, double commutator_tol = 1e-8) {
  const CommutatorReport c = worst_commutator(e.matrices());
  if (c.relative_norm > commutator_tol) {
    throw DomainError(detail::concat("commuting_closed_form: matrices[", c.first, "] and matrices[",
                                     c.second, "] do not commute (relative commutator norm ",
                                     c.relative_norm, ")"));
  }
  ComplexMatrix s = ComplexMatrix::Zero(e.dim(), e.dim());
  for (std::size_t j = 0; j < e.size(); ++j) s += e.weight(j) * sqrtm(e.matrix(j)).matrix();
  return SpdMatrix(ComplexMatrix(s * s));
}

inline Provenance describe(const Ensemble& e, std::string source = "ensemble") {
  Provenance p;
  p.source = std::move(source);
  p.dims = {e.dim()};
  p.weights = {e.weights().values()};
  return p;
}

/// 2I - Sum_j w_j A_j^{-1} <= X <= Sum_j w_j A_j.
inline CheckReport check_bounds(const Ensemble& e, const SpdMatrix& x,
                                const ToleranceConfig& cfg = {}, Provenance inputs = {}) {
  if (inputs.dims.empty()) inputs = describe(e);
  const Eigen::Index m = e.dim();
  ComplexMatrix lower = 2.0 * ComplexMatrix::Identity(m, m);
  for (std::size_t j = 0; j < e.size(); ++j) lower -= e.weight(j) * inverse(e.matrix(j)).matrix();
  return ReportBuilder("bounds", cfg, std::move(inputs))
      .loewner("lower", HermitianMatrix(lower), x)
      .loewner("upper", x, arithmetic_mean(e))
      .finish();
}

/// log det X >= Sum_j w_j log det A_j, with equality exactly when all A_j
/// coincide. The margin is the log-scale gap.
inline CheckReport check_det_inequality(const Ensemble& e, const SpdMatrix& x,
                                        const ToleranceConfig& cfg = {}, Provenance inputs = {}) {
  if (inputs.dims.empty()) inputs = describe(e);
  double weighted = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) weighted += e.weight(j) * log_det(e.matrix(j));
  const double gap = log_det(x) - weighted;

  double spread = 0.0;
  double norm = 1.0;
  for (std::size_t j = 0; j < e.size(); ++j) {
    spread = std::max(spread, (e.matrix(j).matrix() - e.matrix(0).matrix()).norm());
    norm = std::max(norm, e.matrix(j).frobenius());
  }
  const bool equality = gap <= 1e-9;
  const bool coincide = spread <= 1e-8 * norm;

  ReportBuilder b("det_inequality", cfg, std::move(inputs));
  b.scalar("log_det_gap", gap)
      .info("equality", equality ? 1.0 : 0.0)
      .info("matrices_coincide", coincide ? 1.0 : 0.0)
      .info("matrix_spread", spread);
  if (equality != coincide) {
    b.message(equality ? "equality reached although the matrices differ"
                       : "strict inequality although the matrices coincide");
  }
  return b.finish();
}

// ---------------------------------------------------------------------------
// Seeded ensembles
// ---------------------------------------------------------------------------

/// Weights drawn uniformly from [0.1, 1] and normalized.
inline WeightVector random_weights(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = uni(rng);
    sum += x;
  }
  for (auto& x : w) x /= sum;
  return WeightVector(std::move(w));
}

struct EnsembleSpec {
  Eigen::Index m = 3;
  std::size_t n = 3;
  double eig_lo = 0.5;
  double eig_hi = 2.0;
  /// All matrices share one random eigenbasis.
  bool commuting = false;
};

inline Ensemble random_ensemble(const EnsembleSpec& spec, Rng& rng) {
  if (spec.m <= 0 || spec.n == 0) throw DomainError("random_ensemble: m and n must be positive");
  WeightVector w = random_weights(spec.n, rng);
  std::vector<SpdMatrix> mats;
  mats.reserve(spec.n);
  if (spec.commuting) {
    const ComplexMatrix u = random_unitary(spec.m, rng);
    for (std::size_t j = 0; j < spec.n; ++j) {
      mats.push_back(spd_from_spectrum(u, random_spectrum(spec.m, spec.eig_lo, spec.eig_hi, rng)));
    }
  } else {
    for (std::size_t j = 0; j < spec.n; ++j) {
      mats.push_back(random_spd(spec.m, rng, spec.eig_lo, spec.eig_hi));
    }
  }
  return Ensemble(std::move(w), std::move(mats));
}

inline Ensemble random_ensemble(const EnsembleSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  return random_ensemble(spec, rng);
}

}  // namespace bwmean
