#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bwmean/barycenter.hpp"
#include "bwmean/core.hpp"
#include "bwmean/means.hpp"

namespace bwmean {

/// Kronecker product: the block matrix [a_ij B].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline SpdMatrix kron(const SpdMatrix& a, const SpdMatrix& b) {
  return SpdMatrix(kron(a.matrix(), b.matrix()));
}

/// Entrywise (Schur) product.
inline ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(detail::concat("hadamard: shape mismatch (", a.rows(), "x", a.cols(),
                                        " vs ", b.rows(), "x", b.cols(), ")"));
  }
  return a.cwiseProduct(b);
}

inline SpdMatrix hadamard(const SpdMatrix& a, const SpdMatrix& b) {
  return SpdMatrix(hadamard(a.matrix(), b.matrix()));
}

/// (w_1 u_1, ..., w_1 u_n, ..., w_n u_1, ..., w_n u_n): second index fastest.
inline WeightVector weight_tensor(const WeightVector& w, const WeightVector& u) {
  std::vector<double> out;
  out.reserve(w.size() * u.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) out.push_back(w[i] * u[j]);
  }
  return WeightVector(std::move(out));
}

/// (A_i (x) B_j) in the same order as weight_tensor.
inline Ensemble ensemble_tensor(const Ensemble& a, const Ensemble& b) {
  std::vector<SpdMatrix> mats;
  mats.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) mats.push_back(kron(a.matrix(i), b.matrix(j)));
  }
  return Ensemble(weight_tensor(a.weights(), b.weights()), std::move(mats));
}

/// Sum_{i,j} w_i u_j A_i o B_j.
inline SpdMatrix hadamard_arithmetic_mean(const Ensemble& a, const Ensemble& b) {
  detail::require_same_dim(a.dim(), b.dim(), "hadamard_arithmetic_mean");
  ComplexMatrix sum = ComplexMatrix::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      sum += a.weight(i) * b.weight(j) * hadamard(a.matrix(i).matrix(), b.matrix(j).matrix());
    }
  }
  return SpdMatrix(sum);
}

// ---------------------------------------------------------------------------
// Positive unital maps realized as compressions M -> V* M V
// ---------------------------------------------------------------------------

enum class MapKind { kIsometry, kAndo };

class PositiveMapSpec {
 public:
  /// V must have orthonormal columns (V*V = I) to within 1e-12.
  static PositiveMapSpec isometry(ComplexMatrix v) {
    detail::require_finite(v, "isometry map");
    if (v.cols() == 0 || v.cols() > v.rows()) {
      throw DimensionError(detail::concat("isometry map: V is ", v.rows(), "x", v.cols(),
                                          ", need rows >= cols >= 1"));
    }
    const double err = (v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).norm();
    if (err > 1e-12) {
      throw DomainError(detail::concat("isometry map: ||V*V - I||_F = ", err, " exceeds 1e-12"));
    }
    return PositiveMapSpec(MapKind::kIsometry, std::move(v), 0);
  }

  /// The compression by Z = [e_1 (x) e_1, ..., e_m (x) e_m], which sends
  /// A (x) B to A o B.
  static PositiveMapSpec ando(Eigen::Index m) {
    if (m <= 0) throw DomainError("ando map: dimension must be positive");
    ComplexMatrix z = ComplexMatrix::Zero(m * m, m);
    for (Eigen::Index i = 0; i < m; ++i) z(i * m + i, i) = 1.0;
    return PositiveMapSpec(MapKind::kAndo, std::move(z), m);
  }

  MapKind kind() const { return kind_; }
  const ComplexMatrix& isometry_matrix() const { return v_; }
  Eigen::Index source_dim() const { return v_.rows(); }
  Eigen::Index target_dim() const { return v_.cols(); }
  /// Base dimension m of an Ando map (source m^2, target m).
  Eigen::Index ando_dim() const { return ando_m_; }

  HermitianMatrix operator()(const HermitianMatrix& a) const {
    detail::require_same_dim(a.dim(), source_dim(), "positive map");
    return HermitianMatrix(ComplexMatrix(v_.adjoint() * a.matrix() * v_));
  }

  SpdMatrix operator()(const SpdMatrix& a) const { return SpdMatrix((*this)(a.hermitian())); }

 private:
  PositiveMapSpec(MapKind kind, ComplexMatrix v, Eigen::Index m)
      : kind_(kind), v_(std::move(v)), ando_m_(m) {}

  MapKind kind_;
  ComplexMatrix v_;
  Eigen::Index ando_m_ = 0;
};

inline PositiveMapSpec ando_map(Eigen::Index m) { return PositiveMapSpec::ando(m); }

inline HermitianMatrix apply(const PositiveMapSpec& phi, const HermitianMatrix& a) {
  return phi(a);
}

inline SpdMatrix apply(const PositiveMapSpec& phi, const SpdMatrix& a) { return phi(a); }

/// ||Phi(I) - I||_F.
inline double unitality_defect(const PositiveMapSpec& phi) {
  const auto out = phi(HermitianMatrix::identity(phi.source_dim()));
  return (out.matrix() - ComplexMatrix::Identity(phi.target_dim(), phi.target_dim())).norm();
}

/// V = the first k columns of a seeded Haar unitary of size s.
inline PositiveMapSpec random_isometry_map(Eigen::Index s, Eigen::Index k, std::uint64_t seed) {
  if (k <= 0 || k > s) {
    throw DomainError(detail::concat("random_isometry_map: need 0 < k <= s, got s = ", s,
                                     ", k = ", k));
  }
  const ComplexMatrix u = random_unitary(s, seed);
  ComplexMatrix v = u.leftCols(k);
  // Re-orthonormalize so the 1e-12 isometry check never trips on round-off.
  Eigen::HouseholderQR<ComplexMatrix> qr(v);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(s, k);
  const ComplexMatrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < k; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return PositiveMapSpec::isometry(std::move(q));
}

}  // namespace bwmean
