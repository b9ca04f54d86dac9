#pragma once

// Executable inequality and identity checks for the Wasserstein mean and the
// two-variable geometric mean, each producing a CheckReport whose verdict is
// derived from the worst slack eigenvalue.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bwmean/barycenter.hpp"
#include "bwmean/core.hpp"
#include "bwmean/means.hpp"
#include "bwmean/products.hpp"
#include "bwmean/report.hpp"

namespace bwmean {

namespace detail {

inline SolverReport solve_or_throw(const Ensemble& e, const SolverConfig& cfg, const char* which) {
  SolverReport r = wasserstein_mean(e, cfg);
  if (!r.converged) {
    throw NumericalError(concat(which, ": solver did not converge (residual ", r.residual,
                                " after ", r.iterations, " iterations)"));
  }
  return r;
}

inline Provenance describe_pair(const Ensemble& a, const Ensemble& b, std::string source) {
  Provenance p;
  p.source = std::move(source);
  p.dims = {a.dim(), b.dim()};
  p.weights = {a.weights().values(), b.weights().values()};
  return p;
}

inline Provenance describe_dims(std::vector<Eigen::Index> dims, std::string source) {
  Provenance p;
  p.source = std::move(source);
  p.dims = std::move(dims);
  return p;
}

/// alpha = min_i lambda_min(A_i), beta = max_i lambda_max(A_i).
inline std::pair<double, double> spectral_bounds(const Ensemble& e) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& a : e.matrices()) {
    lo = std::min(lo, a.min_eig());
    hi = std::max(hi, a.max_eig());
  }
  return {lo, hi};
}

inline HermitianMatrix scaled_identity(Eigen::Index m, double c) {
  return HermitianMatrix(ComplexMatrix(c * ComplexMatrix::Identity(m, m)));
}

}  // namespace detail

/// Solved-mean wrappers around the barycenter-level checks.
inline CheckReport check_bounds(const Ensemble& e, const SolverConfig& solver,
                                const ToleranceConfig& tol = {}) {
  const SolverReport r = detail::solve_or_throw(e, solver, "bounds");
  return check_bounds(e, r.mean, tol);
}

inline CheckReport check_det_inequality(const Ensemble& e, const SolverConfig& solver,
                                        const ToleranceConfig& tol = {}) {
  const SolverReport r = detail::solve_or_throw(e, solver, "det_inequality");
  return check_det_inequality(e, r.mean, tol);
}

/// Both characterizations of the mean at the solver output:
/// ||I - Sum w_j (A_j # X^{-1})||_F <= 1e-10 and ||X - S(X)||_F <= 1e-9 ||X||_F.
inline CheckReport check_fixed_point(const Ensemble& e, const SolverConfig& solver,
                                     const ToleranceConfig& tol = {}) {
  const SolverReport r = wasserstein_mean(e, solver);
  const double res = residual(r.mean, e);
  const double fp = fixed_point_residual(r.mean, e);
  return ReportBuilder("fixed_point", tol, describe(e))
      .scalar("geometric_mean_form", 1e-10 - res)
      .scalar("congruence_form", 1e-9 * r.mean.frobenius() - fp)
      .info("residual", res)
      .info("fixed_point_residual", fp)
      .info("iterations", r.iterations)
      .threshold(0.0)
      .finish();
}

/// log det(Sum w_j A_j) >= Sum w_j log det A_j.
inline CheckReport check_logdet_concavity(const Ensemble& e, const ToleranceConfig& tol = {}) {
  double weighted = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j) weighted += e.weight(j) * log_det(e.matrix(j));
  return ReportBuilder("logdet_concavity", tol, describe(e))
      .scalar("log_det_gap", log_det(arithmetic_mean(e)) - weighted)
      .finish();
}

/// Omega(w; A) (x) Omega(u; B) = Omega(w (x) u; A_i (x) B_j). The margin is
/// minus the relative Frobenius error; the identity holds below 1e-6.
inline CheckReport check_tensor_identity(const Ensemble& a, const Ensemble& b,
                                         const SolverConfig& solver,
                                         const ToleranceConfig& tol = {}) {
  ReportBuilder rb("tensor_identity", tol, detail::describe_pair(a, b, "ensembles"));
  rb.threshold(-1e-6);
  if (a.dim() * b.dim() > 16) {
    throw DomainError(detail::concat("tensor_identity: product dimension ", a.dim() * b.dim(),
                                     " exceeds 16"));
  }
  const SolverReport x = wasserstein_mean(a, solver);
  const SolverReport y = wasserstein_mean(b, solver);
  const SolverReport z = wasserstein_mean(ensemble_tensor(a, b), solver);
  if (!x.converged || !y.converged || !z.converged) {
    return rb.error(detail::concat("solver did not converge (residuals ", x.residual, ", ",
                                   y.residual, ", ", z.residual, ")"));
  }
  const ComplexMatrix lhs = kron(x.mean.matrix(), y.mean.matrix());
  const double rel = (lhs - z.mean.matrix()).norm() / z.mean.frobenius();
  return rb.scalar("relative_error", -rel).info("relative_error", rel).finish();
}

/// Omega(w; A) (x) Omega(u; B) <= Sum w_i u_j A_i (x) B_j.
inline CheckReport check_tensor_arithmetic_bound(const Ensemble& a, const Ensemble& b,
                                                 const SolverConfig& solver,
                                                 const ToleranceConfig& tol = {}) {
  const SolverReport x = detail::solve_or_throw(a, solver, "tensor_arithmetic_bound");
  const SolverReport y = detail::solve_or_throw(b, solver, "tensor_arithmetic_bound");
  return ReportBuilder("tensor_arithmetic_bound", tol, detail::describe_pair(a, b, "ensembles"))
      .loewner("mean_tensor_le_arithmetic", kron(x.mean, y.mean),
               arithmetic_mean(ensemble_tensor(a, b)))
      .finish();
}

/// Omega(w; A) o Omega(u; B) <= Sum w_i u_j A_i o B_j.
inline CheckReport check_hadamard_arithmetic_bound(const Ensemble& a, const Ensemble& b,
                                                   const SolverConfig& solver,
                                                   const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "hadamard_arithmetic_bound");
  const SolverReport x = detail::solve_or_throw(a, solver, "hadamard_arithmetic_bound");
  const SolverReport y = detail::solve_or_throw(b, solver, "hadamard_arithmetic_bound");
  return ReportBuilder("hadamard_arithmetic_bound", tol,
                       detail::describe_pair(a, b, "ensembles"))
      .loewner("mean_hadamard_le_arithmetic", hadamard(x.mean, y.mean),
               hadamard_arithmetic_mean(a, b))
      .finish();
}

/// Phi(A # B) <= Phi(A) # Phi(B) for a positive map Phi.
inline CheckReport check_phi_geometric_mean(const SpdMatrix& a, const SpdMatrix& b,
                                            const PositiveMapSpec& phi,
                                            const ToleranceConfig& tol = {}) {
  return ReportBuilder("phi_geometric_mean", tol,
                       detail::describe_dims({a.dim(), phi.target_dim()}, "matrices"))
      .loewner("phi_of_mean_le_mean_of_phi", phi(geometric_mean(a, b)),
               geometric_mean(phi(a), phi(b)))
      .finish();
}

/// For strictly positive unital Phi:
///   Phi(Omega) >= 2I - Sum w_j Phi(A_j^{-1})  and  Phi(Omega^{-1}) >= 2I - Sum w_j Phi(A_j).
/// Also reports the extreme eigenvalues of Phi(Omega) - Omega(w; Phi(A_j)),
/// whose order is not asserted.
inline CheckReport check_phi_wass(const Ensemble& e, const PositiveMapSpec& phi,
                                  const SolverConfig& solver, const ToleranceConfig& tol = {}) {
  const double defect = unitality_defect(phi);
  if (defect > 1e-10) {
    throw DomainError(detail::concat("phi_wass: map is not unital (||Phi(I) - I||_F = ", defect,
                                     ")"));
  }
  detail::require_same_dim(e.dim(), phi.source_dim(), "phi_wass");
  const SolverReport x = detail::solve_or_throw(e, solver, "phi_wass");
  const Eigen::Index k = phi.target_dim();

  ComplexMatrix lower_inv = 2.0 * ComplexMatrix::Identity(k, k);
  ComplexMatrix lower = 2.0 * ComplexMatrix::Identity(k, k);
  std::vector<SpdMatrix> mapped;
  for (std::size_t j = 0; j < e.size(); ++j) {
    lower_inv -= e.weight(j) * phi(inverse(e.matrix(j))).matrix();
    const SpdMatrix pa = phi(e.matrix(j));
    lower -= e.weight(j) * pa.matrix();
    mapped.push_back(pa);
  }

  const SpdMatrix phi_mean = phi(x.mean);
  const SolverReport mean_of_mapped = wasserstein_mean(Ensemble(e.weights(), mapped), solver);
  const HermitianMatrix diff = phi_mean.hermitian() - mean_of_mapped.mean.hermitian();
  const EigenDecomposition d = eigh(diff);

  Provenance p = describe(e);
  p.dims.push_back(k);
  return ReportBuilder("phi_wass", tol, std::move(p))
      .loewner("phi_of_mean", HermitianMatrix(lower_inv), phi_mean)
      .loewner("phi_of_inverse_mean", HermitianMatrix(lower), phi(inverse(x.mean)))
      .info("phi_mean_minus_mean_phi_min_eig", d.eigenvalues(0))
      .info("phi_mean_minus_mean_phi_max_eig", d.eigenvalues(d.eigenvalues.size() - 1))
      .finish();
}

/// ||Omega(w; A^{-1}) - Omega(w; A)^{-1}||_F must exceed 1e-4: the mean is
/// not self-dual. The margin is the gap minus 1e-4.
inline CheckReport check_self_duality_gap(const Ensemble& e, const SolverConfig& solver,
                                          const ToleranceConfig& tol = {}) {
  const SolverReport x = detail::solve_or_throw(e, solver, "self_duality_gap");
  const SolverReport y = detail::solve_or_throw(e.inverted(), solver, "self_duality_gap");
  const double gap = (y.mean.matrix() - inverse(x.mean).matrix()).norm();
  return ReportBuilder("self_duality_gap", tol, describe(e))
      .scalar("gap_exceeds_1e-4", gap - 1e-4)
      .info("gap", gap)
      .threshold(0.0)
      .finish();
}

/// For AB = BA and CD = DC:
/// (AB+BA) o (CD+DC) - (A^2+B^2) o (C^2+D^2) <= 1/2 (A-B)^2 o (C-D)^2.
inline CheckReport check_commuting_quadruple(const SpdMatrix& a, const SpdMatrix& b,
                                             const SpdMatrix& c, const SpdMatrix& d,
                                             const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "commuting_quadruple");
  detail::require_same_dim(a.dim(), c.dim(), "commuting_quadruple");
  detail::require_same_dim(a.dim(), d.dim(), "commuting_quadruple");
  const CommutatorReport ab = worst_commutator({a, b});
  const CommutatorReport cd = worst_commutator({c, d});
  if (ab.relative_norm > 1e-8 || cd.relative_norm > 1e-8) {
    throw DomainError(detail::concat("commuting_quadruple: pairs do not commute (relative "
                                     "commutator norms ",
                                     ab.relative_norm, ", ", cd.relative_norm, ")"));
  }
  const ComplexMatrix& A = a.matrix();
  const ComplexMatrix& B = b.matrix();
  const ComplexMatrix& C = c.matrix();
  const ComplexMatrix& D = d.matrix();
  const ComplexMatrix lhs = hadamard(ComplexMatrix(A * B + B * A), ComplexMatrix(C * D + D * C)) -
                            hadamard(ComplexMatrix(A * A + B * B), ComplexMatrix(C * C + D * D));
  const ComplexMatrix amb = A - B;
  const ComplexMatrix cmd = C - D;
  const ComplexMatrix rhs = 0.5 * hadamard(ComplexMatrix(amb * amb), ComplexMatrix(cmd * cmd));
  return ReportBuilder("commuting_quadruple", tol,
                       detail::describe_dims({a.dim()}, "matrices"))
      .loewner("quadruple", HermitianMatrix(lhs), HermitianMatrix(rhs))
      .finish();
}

/// (A o B)^{-1} <= A^{-1} o B^{-1} <= K (A o B)^{-1}, K the Kantorovich
/// constant of the extreme eigenvalues of A (x) B.
inline CheckReport check_hadamard_inverse(const SpdMatrix& a, const SpdMatrix& b,
                                          const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "hadamard_inverse");
  const SpdMatrix ab_inv = inverse(hadamard(a, b));
  const HermitianMatrix inv_ab(hadamard(inverse(a).matrix(), inverse(b).matrix()));
  const double k = kantorovich(a.min_eig() * b.min_eig(), a.max_eig() * b.max_eig());
  return ReportBuilder("hadamard_inverse", tol, detail::describe_dims({a.dim()}, "matrices"))
      .loewner("lower", ab_inv, inv_ab)
      .loewner("upper", inv_ab, k * ab_inv.hermitian())
      .info("kantorovich", k)
      .finish();
}

/// With alpha I <= A_i <= beta I and gamma I <= B_j <= delta I, X, Y the two means:
/// X o Y <= (alpha gamma + beta delta) / (2 sqrt(alpha beta gamma delta))
///          * Sum w_i u_j [(X o Y)^{1/2} (A_i o B_j) (X o Y)^{1/2}]^{1/2}.
inline CheckReport check_kantorovich_hadamard(const Ensemble& a, const Ensemble& b,
                                              const SolverConfig& solver,
                                              const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "kantorovich_hadamard");
  const SolverReport x = detail::solve_or_throw(a, solver, "kantorovich_hadamard");
  const SolverReport y = detail::solve_or_throw(b, solver, "kantorovich_hadamard");
  const auto [alpha, beta] = detail::spectral_bounds(a);
  const auto [gamma, delta] = detail::spectral_bounds(b);
  const double constant =
      (alpha * gamma + beta * delta) / (2.0 * std::sqrt(alpha * beta * gamma * delta));

  const SpdMatrix xy = hadamard(x.mean, y.mean);
  const ComplexMatrix xy_half = sqrtm(xy).matrix();
  ComplexMatrix sum = ComplexMatrix::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const SpdMatrix ab = hadamard(a.matrix(i), b.matrix(j));
      sum += a.weight(i) * b.weight(j) * sqrtm(congruence(xy_half, ab)).matrix();
    }
  }
  return ReportBuilder("kantorovich_hadamard", tol, detail::describe_pair(a, b, "ensembles"))
      .loewner("converse_bound", xy, HermitianMatrix(ComplexMatrix(constant * sum)))
      .info("constant", constant)
      .finish();
}

/// (X* A X)^p <= X* A^p X for 0 <= p <= 1 when X^{-1} is a contraction.
inline CheckReport check_jensen_contraction(const SpdMatrix& a, const ComplexMatrix& x, double p,
                                            const ToleranceConfig& tol = {}) {
  detail::require_square(x, "jensen_contraction");
  detail::require_same_dim(a.dim(), x.rows(), "jensen_contraction");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(detail::concat("jensen_contraction: p = ", p, " is outside [0, 1]"));
  }
  const double cond = condition_number(x);
  if (!(cond <= 1e14)) {
    throw DomainError(detail::concat("jensen_contraction: X is singular (condition estimate ",
                                     cond, ")"));
  }
  const double inv_norm = operator_norm(x.inverse());
  if (inv_norm > 1.0 + 1e-12) {
    throw DomainError(detail::concat("jensen_contraction: X^{-1} is not a contraction "
                                     "(operator norm ",
                                     inv_norm, ")"));
  }
  const ComplexMatrix xa = x.adjoint();
  const SpdMatrix lhs = matrix_power(congruence(xa, a), p);
  const HermitianMatrix rhs = congruence(xa, matrix_power(a, p).hermitian());
  return ReportBuilder("jensen_contraction", tol, detail::describe_dims({a.dim()}, "matrices"))
      .loewner("power_of_congruence", lhs, rhs)
      .info("p", p)
      .info("inverse_operator_norm", inv_norm)
      .finish();
}

/// If X^{-1} and Y^{-1} are contractions (X, Y >= I):
/// Sum w_i u_j (A_i o B_j)^{1/2} >= 2 sqrt(alpha beta gamma delta) / (alpha gamma + beta delta) I.
/// Skipped, not failed, when the contraction hypothesis does not hold.
inline CheckReport check_sqrt_sum_lower_bound(const Ensemble& a, const Ensemble& b,
                                              const SolverConfig& solver,
                                              const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "sqrt_sum_lower_bound");
  ReportBuilder rb("sqrt_sum_lower_bound", tol, detail::describe_pair(a, b, "ensembles"));
  const SolverReport x = detail::solve_or_throw(a, solver, "sqrt_sum_lower_bound");
  const SolverReport y = detail::solve_or_throw(b, solver, "sqrt_sum_lower_bound");
  const Eigen::Index m = a.dim();
  const HermitianMatrix id = HermitianMatrix::identity(m);
  const LoewnerResult x_ok = loewner_leq(id, x.mean, tol);
  const LoewnerResult y_ok = loewner_leq(id, y.mean, tol);
  if (!x_ok.holds || !y_ok.holds) {
    return rb.skip(detail::concat("means are not >= I (margins ", x_ok.margin, ", ", y_ok.margin,
                                  "), so their inverses are not contractions"));
  }
  const auto [alpha, beta] = detail::spectral_bounds(a);
  const auto [gamma, delta] = detail::spectral_bounds(b);
  const double constant =
      2.0 * std::sqrt(alpha * beta * gamma * delta) / (alpha * gamma + beta * delta);
  ComplexMatrix sum = ComplexMatrix::Zero(m, m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      sum += a.weight(i) * b.weight(j) * sqrtm(hadamard(a.matrix(i), b.matrix(j))).matrix();
    }
  }
  return rb.loewner("sqrt_sum", detail::scaled_identity(m, constant), HermitianMatrix(sum))
      .info("constant", constant)
      .finish();
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

struct SuitePlan {
  std::vector<std::string> checks;
  /// Half-open seed range [seed_lo, seed_hi).
  std::uint64_t seed_lo = 0;
  std::uint64_t seed_hi = 50;
  /// Base dimensions, cycled through by seed.
  std::vector<Eigen::Index> dims{2, 3, 4};
  ToleranceConfig tol;
  SolverConfig solver;
  /// Append the equality-case instances of every check.
  bool equality_cases = true;
};

/// Names run by "all", in suite order.
inline const std::vector<std::string>& all_check_names() {
  static const std::vector<std::string> names{
      "fixed_point",           "bounds",
      "det_inequality",        "logdet_concavity",
      "phi_geometric_mean",    "phi_wass",
      "self_duality_gap",      "tensor_identity",
      "tensor_arithmetic_bound", "hadamard_arithmetic_bound",
      "commuting_quadruple",   "hadamard_inverse",
      "kantorovich_hadamard",  "jensen_contraction",
      "sqrt_sum_lower_bound",
  };
  return names;
}

/// Test hook: asserts the arithmetic upper bound in the wrong direction, so a
/// suite containing it must fail. Never part of "all".
inline constexpr const char* kReversedBoundsCheck = "bounds_reversed";

inline bool is_known_check(const std::string& name) {
  const auto& all = all_check_names();
  return name == kReversedBoundsCheck || std::find(all.begin(), all.end(), name) != all.end();
}

namespace detail {

struct SuiteCase {
  std::function<CheckReport()> run;
  Provenance provenance;
};

inline Ensemble constant_ensemble(const SpdMatrix& a, std::size_t n) {
  return Ensemble(WeightVector::uniform(n), std::vector<SpdMatrix>(n, a));
}

/// Matrix with all singular values in [1, 2], so its inverse is a contraction.
inline ComplexMatrix random_expanding(Eigen::Index m, Rng& rng) {
  const ComplexMatrix u = random_unitary(m, rng);
  const ComplexMatrix v = random_unitary(m, rng);
  std::uniform_real_distribution<double> uni(1.0, 2.0);
  RealVector s(m);
  for (Eigen::Index i = 0; i < m; ++i) s(i) = uni(rng);
  return u * s.cast<Complex>().asDiagonal() * v.adjoint();
}

inline std::vector<SuiteCase> seeded_cases(const std::string& name, std::uint64_t seed,
                                           Eigen::Index m, const SuitePlan& plan) {
  Rng rng(seed);
  const SolverConfig& solver = plan.solver;
  const ToleranceConfig& tol = plan.tol;
  const std::size_t n = 2 + static_cast<std::size_t>(seed % 2);
  EnsembleSpec spec{m, n, 0.5, 2.0, false};
  std::vector<SuiteCase> out;

  if (name == "fixed_point" || name == "bounds" || name == "det_inequality" ||
      name == "logdet_concavity" || name == "self_duality_gap" || name == kReversedBoundsCheck) {
    spec.eig_lo = 0.2;
    spec.eig_hi = 5.0;
    const Ensemble e = random_ensemble(spec, rng);
    if (name == "fixed_point") {
      out.push_back({[=] { return check_fixed_point(e, solver, tol); }, {}});
    } else if (name == "bounds") {
      out.push_back({[=] { return check_bounds(e, solver, tol); }, {}});
    } else if (name == "det_inequality") {
      out.push_back({[=] { return check_det_inequality(e, solver, tol); }, {}});
    } else if (name == "logdet_concavity") {
      out.push_back({[=] { return check_logdet_concavity(e, tol); }, {}});
    } else if (name == "self_duality_gap") {
      out.push_back({[=] { return check_self_duality_gap(e, solver, tol); }, {}});
    } else {
      out.push_back({[=] {
                       const SolverReport x = solve_or_throw(e, solver, kReversedBoundsCheck);
                       return ReportBuilder(kReversedBoundsCheck, tol, describe(e))
                           .loewner("upper_reversed", arithmetic_mean(e), x.mean)
                           .finish();
                     },
                     {}});
    }
  } else if (name == "phi_geometric_mean") {
    const Eigen::Index s = m + 1;
    const SpdMatrix a = random_spd(s, rng, 0.5, 2.0);
    const SpdMatrix b = random_spd(s, rng, 0.5, 2.0);
    const PositiveMapSpec phi = random_isometry_map(s, m, seed);
    out.push_back({[=] { return check_phi_geometric_mean(a, b, phi, tol); }, {}});
  } else if (name == "phi_wass") {
    spec.m = 2 * m;
    const Ensemble e = random_ensemble(spec, rng);
    const PositiveMapSpec phi = random_isometry_map(2 * m, m, seed);
    out.push_back({[=] { return check_phi_wass(e, phi, solver, tol); }, {}});
  } else if (name == "tensor_identity" || name == "tensor_arithmetic_bound") {
    EnsembleSpec sa = spec;
    EnsembleSpec sb = spec;
    sa.m = std::min<Eigen::Index>(m, 2);
    sb.m = std::min<Eigen::Index>(m, 3);
    sb.n = 2 + static_cast<std::size_t>((seed / 2) % 2);
    const Ensemble a = random_ensemble(sa, rng);
    const Ensemble b = random_ensemble(sb, rng);
    if (name == "tensor_identity") {
      out.push_back({[=] { return check_tensor_identity(a, b, solver, tol); }, {}});
    } else {
      out.push_back({[=] { return check_tensor_arithmetic_bound(a, b, solver, tol); }, {}});
    }
  } else if (name == "hadamard_arithmetic_bound" || name == "kantorovich_hadamard" ||
             name == "sqrt_sum_lower_bound") {
    if (name == "sqrt_sum_lower_bound") {
      spec.eig_lo = 1.0;
      spec.eig_hi = 3.0;
    }
    const Ensemble a = random_ensemble(spec, rng);
    const Ensemble b = random_ensemble(spec, rng);
    if (name == "hadamard_arithmetic_bound") {
      out.push_back({[=] { return check_hadamard_arithmetic_bound(a, b, solver, tol); }, {}});
    } else if (name == "kantorovich_hadamard") {
      out.push_back({[=] { return check_kantorovich_hadamard(a, b, solver, tol); }, {}});
    } else {
      out.push_back({[=] { return check_sqrt_sum_lower_bound(a, b, solver, tol); }, {}});
    }
  } else if (name == "commuting_quadruple") {
    const ComplexMatrix u = random_unitary(m, rng);
    const ComplexMatrix v = random_unitary(m, rng);
    const SpdMatrix a = spd_from_spectrum(u, random_spectrum(m, 0.5, 2.0, rng));
    const SpdMatrix b = spd_from_spectrum(u, random_spectrum(m, 0.5, 2.0, rng));
    const SpdMatrix c = spd_from_spectrum(v, random_spectrum(m, 0.5, 2.0, rng));
    const SpdMatrix d = spd_from_spectrum(v, random_spectrum(m, 0.5, 2.0, rng));
    out.push_back({[=] { return check_commuting_quadruple(a, b, c, d, tol); }, {}});
  } else if (name == "hadamard_inverse") {
    const SpdMatrix a = random_spd(m, rng, 0.5, 2.0);
    const SpdMatrix b = random_spd(m, rng, 0.5, 2.0);
    out.push_back({[=] { return check_hadamard_inverse(a, b, tol); }, {}});
  } else if (name == "jensen_contraction") {
    const SpdMatrix a = random_spd(m, rng, 0.5, 2.0);
    const ComplexMatrix x = random_expanding(m, rng);
    const double p = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    out.push_back({[=] { return check_jensen_contraction(a, x, p, tol); }, {}});
  }
  for (auto& c : out) {
    c.provenance.source = "seeded";
    c.provenance.seed = seed;
  }
  return out;
}

/// Inputs at which the inequality of the named check is attained with equality.
inline std::vector<SuiteCase> equality_cases(const std::string& name, const SuitePlan& plan) {
  const SolverConfig& solver = plan.solver;
  const ToleranceConfig& tol = plan.tol;
  const SpdMatrix a = random_spd(3, std::uint64_t{2024}, 0.5, 2.0);
  const SpdMatrix b = random_spd(3, std::uint64_t{2025}, 0.5, 2.0);
  const SpdMatrix id2 = SpdMatrix::identity(2);
  std::vector<SuiteCase> out;

  if (name == "bounds") {
    // 2I - I^{-1} = I = Omega = arithmetic mean.
    const Ensemble e = Ensemble::single(SpdMatrix::identity(3));
    out.push_back({[=] { return check_bounds(e, solver, tol); }, {}});
  } else if (name == "det_inequality") {
    const Ensemble e = constant_ensemble(a, 3);
    out.push_back({[=] { return check_det_inequality(e, solver, tol); }, {}});
  } else if (name == "logdet_concavity") {
    const Ensemble e = constant_ensemble(a, 3);
    out.push_back({[=] { return check_logdet_concavity(e, tol); }, {}});
  } else if (name == "phi_geometric_mean") {
    const PositiveMapSpec phi = random_isometry_map(3, 2, 7);
    out.push_back({[=] { return check_phi_geometric_mean(a, a, phi, tol); }, {}});
  } else if (name == "phi_wass") {
    const PositiveMapSpec phi = PositiveMapSpec::isometry(ComplexMatrix::Identity(2, 2));
    const Ensemble e = Ensemble::single(id2);
    out.push_back({[=] { return check_phi_wass(e, phi, solver, tol); }, {}});
  } else if (name == "tensor_identity" || name == "tensor_arithmetic_bound" ||
             name == "hadamard_arithmetic_bound") {
    const Ensemble ea = Ensemble::single(a);
    const Ensemble eb = Ensemble::single(b);
    if (name == "tensor_identity") {
      out.push_back({[=] { return check_tensor_identity(ea, eb, solver, tol); }, {}});
    } else if (name == "tensor_arithmetic_bound") {
      out.push_back({[=] { return check_tensor_arithmetic_bound(ea, eb, solver, tol); }, {}});
    } else {
      out.push_back({[=] { return check_hadamard_arithmetic_bound(ea, eb, solver, tol); }, {}});
    }
  } else if (name == "commuting_quadruple") {
    out.push_back({[=] { return check_commuting_quadruple(a, a, b, b, tol); }, {}});
  } else if (name == "hadamard_inverse") {
    const SpdMatrix id3 = SpdMatrix::identity(3);
    out.push_back({[=] { return check_hadamard_inverse(id3, id3, tol); }, {}});
  } else if (name == "kantorovich_hadamard") {
    const Ensemble e = Ensemble::single(id2);
    out.push_back({[=] { return check_kantorovich_hadamard(e, e, solver, tol); }, {}});
  } else if (name == "jensen_contraction") {
    const ComplexMatrix x = random_unitary(3, std::uint64_t{99});
    out.push_back({[=] { return check_jensen_contraction(a, x, 0.0, tol); }, {}});
    out.push_back({[=] { return check_jensen_contraction(a, x, 1.0, tol); }, {}});
  } else if (name == "sqrt_sum_lower_bound") {
    const Ensemble e = Ensemble::single(SpdMatrix::identity(3));
    out.push_back({[=] { return check_sqrt_sum_lower_bound(e, e, solver, tol); }, {}});
  }
  for (auto& c : out) c.provenance.source = "equality-case";
  return out;
}

inline CheckReport run_case(const std::string& name, const SuiteCase& c,
                            const ToleranceConfig& tol) {
  CheckReport r;
  try {
    r = c.run();
  } catch (const std::exception& ex) {
    r = ReportBuilder(name, tol).error(ex.what());
  }
  r.check_name = name;
  const Provenance inner = r.inputs;
  r.inputs = c.provenance;
  r.inputs.dims = inner.dims;
  r.inputs.weights = inner.weights;
  return r;
}

}  // namespace detail

/// Runs every planned check over the seed range (and the equality cases),
/// in plan order. Per-check exceptions become error reports.
inline std::vector<CheckReport> run_suite(const SuitePlan& plan) {
  plan.tol.validate();
  std::vector<CheckReport> reports;
  if (plan.checks.empty()) return reports;
  if (plan.dims.empty()) throw DomainError("suite plan: dims is empty");
  for (const auto m : plan.dims) {
    if (m <= 0) throw DomainError("suite plan: dims must be positive");
  }
  for (const auto& name : plan.checks) {
    if (!is_known_check(name)) throw DomainError("suite plan: unknown check '" + name + "'");
  }
  if (plan.seed_hi < plan.seed_lo) throw DomainError("suite plan: seeds must satisfy lo <= hi");

  for (const auto& name : plan.checks) {
    for (std::uint64_t seed = plan.seed_lo; seed < plan.seed_hi; ++seed) {
      const Eigen::Index m = plan.dims[seed % plan.dims.size()];
      std::vector<detail::SuiteCase> cases;
      try {
        cases = detail::seeded_cases(name, seed, m, plan);
      } catch (const std::exception& ex) {
        Provenance p;
        p.source = "seeded";
        p.seed = seed;
        detail::SuiteCase failing{[msg = std::string(ex.what())]() -> CheckReport {
                                    throw Error(msg);
                                  },
                                  p};
        cases.push_back(failing);
      }
      for (const auto& c : cases) reports.push_back(detail::run_case(name, c, plan.tol));
    }
    if (plan.equality_cases) {
      for (const auto& c : detail::equality_cases(name, plan)) {
        reports.push_back(detail::run_case(name, c, plan.tol));
      }
    }
  }
  return reports;
}

struct SuiteSummary {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
  bool ok() const { return failed == 0; }
};

inline SuiteSummary summarize(const std::vector<CheckReport>& reports) {
  SuiteSummary s;
  for (const auto& r : reports) {
    if (r.status == CheckStatus::kPass) ++s.passed;
    else if (r.status == CheckStatus::kSkipped) ++s.skipped;
    else ++s.failed;
  }
  return s;
}

}  // namespace bwmean
