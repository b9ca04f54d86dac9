#pragma once

// Dense complex Hermitian / positive definite matrices and the spectral
// matrix functions everything else in the library is built on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace bwmean {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of the operation (non-Hermitian,
/// not positive definite, parameter out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The numerics broke down (eigensolver failure, loss of positivity).
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

template <typename... Args>
std::string concat(Args&&... args) {
  std::ostringstream os;
  os.precision(12);
  (os << ... << std::forward<Args>(args));
  return os.str();
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(concat(what, ": expected a non-empty square matrix, got ",
                                a.rows(), "x", a.cols()));
  }
}

inline void require_finite(const ComplexMatrix& a, const char* what) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Complex z = a.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError(concat(what, ": non-finite entry"));
    }
  }
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(concat(what, ": dimension mismatch (", a, " vs ", b, ")"));
  }
}

/// (A + A*) / 2. The result is exactly Hermitian in floating point.
inline ComplexMatrix symmetrize(const ComplexMatrix& a) {
  return (a + a.adjoint()) * 0.5;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct ToleranceConfig {
  double loewner_tol = 1e-9;
  double residual_tol = 1e-10;
  bool relative = true;

  void validate() const {
    if (!(loewner_tol > 0.0) || !(residual_tol > 0.0)) {
      throw DomainError("tolerances must be positive");
    }
  }
};

// ---------------------------------------------------------------------------
// Hermitian and positive definite matrices
// ---------------------------------------------------------------------------

/// A square complex matrix equal to its own adjoint. Construction symmetrizes
/// the input, so whatever asymmetry round-off left behind is removed.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const ComplexMatrix& a) {
    detail::require_square(a, "HermitianMatrix");
    detail::require_finite(a, "HermitianMatrix");
    data_ = detail::symmetrize(a);
  }

  static HermitianMatrix identity(Eigen::Index m) {
    return HermitianMatrix(ComplexMatrix::Identity(m, m));
  }

  static HermitianMatrix diagonal(const std::vector<double>& d) {
    ComplexMatrix a = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                          static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    }
    return HermitianMatrix(a);
  }

  Eigen::Index dim() const { return data_.rows(); }
  const ComplexMatrix& matrix() const { return data_; }
  double frobenius() const { return data_.stableNorm(); }
  double trace() const { return data_.trace().real(); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "operator+");
    return HermitianMatrix(a.data_ + b.data_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    detail::require_same_dim(a.dim(), b.dim(), "operator-");
    return HermitianMatrix(a.data_ - b.data_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) {
    return HermitianMatrix(s * a.data_);
  }

 private:
  ComplexMatrix data_;
};

/// Spectral decomposition A = U diag(lambda) U*, eigenvalues ascending.
struct EigenDecomposition {
  ComplexMatrix unitary;
  RealVector eigenvalues;

  /// U diag(f(lambda)) U*, symmetrized.
  template <typename F>
  ComplexMatrix apply(F&& f) const {
    RealVector mapped(eigenvalues.size());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) mapped(i) = f(eigenvalues(i));
    return detail::symmetrize(unitary * mapped.cast<Complex>().asDiagonal() *
                              unitary.adjoint());
  }
};

inline EigenDecomposition eigh(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(detail::concat("eigh: eigensolver did not converge (dim ", a.dim(),
                                        ", frobenius norm ", a.frobenius(), ")"));
  }
  return {solver.eigenvectors(), solver.eigenvalues()};
}

/// Smallest eigenvalue floor accepted for a positive definite matrix.
inline double spd_floor(double frobenius) { return 1e-12 * std::max(1.0, frobenius); }

/// Hermitian matrix with strictly positive spectrum. The eigendecomposition
/// computed during validation is kept and reused by every matrix function.
class SpdMatrix {
 public:
  SpdMatrix() = default;

  explicit SpdMatrix(HermitianMatrix a) : base_(std::move(a)), eig_(eigh(base_)) {
    const double floor = spd_floor(base_.frobenius());
    if (!(eig_.eigenvalues(0) > floor)) {
      throw DomainError(detail::concat("matrix is not positive definite (smallest eigenvalue ",
                                       eig_.eigenvalues(0), ", floor ", floor, ")"));
    }
  }

  explicit SpdMatrix(const ComplexMatrix& a) : SpdMatrix(HermitianMatrix(a)) {}

  static SpdMatrix identity(Eigen::Index m) { return SpdMatrix(HermitianMatrix::identity(m)); }
  static SpdMatrix diagonal(const std::vector<double>& d) {
    return SpdMatrix(HermitianMatrix::diagonal(d));
  }

  Eigen::Index dim() const { return base_.dim(); }
  const HermitianMatrix& hermitian() const { return base_; }
  const ComplexMatrix& matrix() const { return base_.matrix(); }
  const EigenDecomposition& eigen() const { return eig_; }
  double min_eig() const { return eig_.eigenvalues(0); }
  double max_eig() const { return eig_.eigenvalues(eig_.eigenvalues.size() - 1); }
  double frobenius() const { return base_.frobenius(); }
  double trace() const { return base_.trace(); }

  operator const HermitianMatrix&() const { return base_; }  // NOLINT(google-explicit-constructor)

 private:
  HermitianMatrix base_;
  EigenDecomposition eig_;
};

inline SpdMatrix operator+(const SpdMatrix& a, const SpdMatrix& b) {
  return SpdMatrix(a.hermitian() + b.hermitian());
}
inline SpdMatrix operator*(double s, const SpdMatrix& a) {
  if (!(s > 0.0)) throw DomainError("scaling a positive definite matrix needs s > 0");
  return SpdMatrix(s * a.hermitian());
}

// ---------------------------------------------------------------------------
// Matrix functions
// ---------------------------------------------------------------------------

inline SpdMatrix matrix_power(const SpdMatrix& a, double t) {
  if (t == 1.0) return a;
  if (t == 0.0) return SpdMatrix::identity(a.dim());
  return SpdMatrix(a.eigen().apply([t](double x) { return std::pow(x, t); }));
}

inline SpdMatrix sqrtm(const SpdMatrix& a) {
  return SpdMatrix(a.eigen().apply([](double x) { return std::sqrt(x); }));
}

inline SpdMatrix inverse(const SpdMatrix& a) {
  return SpdMatrix(a.eigen().apply([](double x) { return 1.0 / x; }));
}

inline SpdMatrix inv_sqrtm(const SpdMatrix& a) {
  return SpdMatrix(a.eigen().apply([](double x) { return 1.0 / std::sqrt(x); }));
}

/// Sum of log-eigenvalues.
inline double log_det(const SpdMatrix& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.eigen().eigenvalues.size(); ++i) {
    s += std::log(a.eigen().eigenvalues(i));
  }
  return s;
}

/// tr(A^{1/2}).
inline double trace_sqrt(const SpdMatrix& a) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.eigen().eigenvalues.size(); ++i) {
    s += std::sqrt(a.eigen().eigenvalues(i));
  }
  return s;
}

inline double min_eigenvalue(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError(detail::concat("min_eigenvalue: eigensolver did not converge (dim ",
                                        a.dim(), ")"));
  }
  return solver.eigenvalues()(0);
}

inline double condition_number(const ComplexMatrix& x) {
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  return smallest > 0.0 ? s(0) / smallest : std::numeric_limits<double>::infinity();
}

/// Largest singular value.
inline double operator_norm(const ComplexMatrix& x) {
  Eigen::JacobiSVD<ComplexMatrix> svd(x);
  return svd.singularValues()(0);
}

/// X A X*, re-symmetrized. X must be square and well conditioned.
inline HermitianMatrix congruence(const ComplexMatrix& x, const HermitianMatrix& a) {
  detail::require_square(x, "congruence");
  detail::require_same_dim(x.cols(), a.dim(), "congruence");
  const double cond = condition_number(x);
  if (!(cond <= 1e14)) {
    throw DomainError(detail::concat("congruence: transform is singular (condition estimate ",
                                     cond, ")"));
  }
  return HermitianMatrix(x * a.matrix() * x.adjoint());
}

inline SpdMatrix congruence(const ComplexMatrix& x, const SpdMatrix& a) {
  return SpdMatrix(congruence(x, a.hermitian()));
}

// ---------------------------------------------------------------------------
// Loewner order
// ---------------------------------------------------------------------------

struct LoewnerResult {
  bool holds = false;
  /// lambda_min(B - A).
  double margin = 0.0;
  /// Multiplier applied to loewner_tol.
  double scale = 1.0;
};

inline double loewner_scale(const HermitianMatrix& a, const HermitianMatrix& b,
                            const ToleranceConfig& cfg) {
  return cfg.relative ? std::max({1.0, a.frobenius(), b.frobenius()}) : 1.0;
}

/// Tolerance-aware test of A <= B.
inline LoewnerResult loewner_leq(const HermitianMatrix& a, const HermitianMatrix& b,
                                 const ToleranceConfig& cfg = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "loewner_leq");
  LoewnerResult r;
  r.margin = min_eigenvalue(b - a);
  r.scale = loewner_scale(a, b, cfg);
  r.holds = r.margin >= -cfg.loewner_tol * r.scale;
  return r;
}

// ---------------------------------------------------------------------------
// Seeded generators
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

inline ComplexMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal folded back into Q.
inline ComplexMatrix random_unitary(Eigen::Index m, Rng& rng) {
  const ComplexMatrix g = random_ginibre(m, m, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, m);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

inline ComplexMatrix random_unitary(Eigen::Index m, std::uint64_t seed) {
  Rng rng(seed);
  return random_unitary(m, rng);
}

inline HermitianMatrix random_hermitian(Eigen::Index m, Rng& rng) {
  return HermitianMatrix(random_ginibre(m, m, rng));
}

/// U diag(lambda) U* with the given spectrum and unitary.
inline SpdMatrix spd_from_spectrum(const ComplexMatrix& u, const std::vector<double>& spectrum) {
  RealVector d(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t i = 0; i < spectrum.size(); ++i) d(static_cast<Eigen::Index>(i)) = spectrum[i];
  return SpdMatrix(ComplexMatrix(u * d.cast<Complex>().asDiagonal() * u.adjoint()));
}

inline std::vector<double> random_spectrum(Eigen::Index m, double eig_lo, double eig_hi,
                                           Rng& rng) {
  if (!(eig_lo > 0.0) || !(eig_lo <= eig_hi) || !std::isfinite(eig_hi)) {
    throw DomainError(detail::concat("random_spd: invalid eigenvalue range [", eig_lo, ", ",
                                     eig_hi, "]"));
  }
  std::uniform_real_distribution<double> uni(eig_lo, eig_hi);
  std::vector<double> spectrum(static_cast<std::size_t>(m));
  for (auto& x : spectrum) x = eig_lo == eig_hi ? eig_lo : uni(rng);
  return spectrum;
}

inline SpdMatrix random_spd(Eigen::Index m, Rng& rng, double eig_lo, double eig_hi) {
  if (m <= 0) throw DomainError("random_spd: dimension must be positive");
  const auto spectrum = random_spectrum(m, eig_lo, eig_hi, rng);
  if (eig_lo == eig_hi) {
    // U (cI) U* is cI; skip the round-off of conjugating a scalar matrix.
    return SpdMatrix(HermitianMatrix::diagonal(spectrum));
  }
  return spd_from_spectrum(random_unitary(m, rng), spectrum);
}

/// Deterministic for a fixed seed.
inline SpdMatrix random_spd(Eigen::Index m, std::uint64_t seed, double eig_lo, double eig_hi) {
  Rng rng(seed);
  return random_spd(m, rng, eig_lo, eig_hi);
}

}  // namespace bwmean
