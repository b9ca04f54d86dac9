#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "bwmean/bures_wasserstein.hpp"
#include "test_util.hpp"

namespace bwmean {
namespace {

using testing::rel_err;

TEST(BwDistance, Examples) {
  const SpdMatrix a = random_spd(4, std::uint64_t{3}, 0.5, 2.0);
  EXPECT_LE(bw_distance(a, a), 1e-7);
  EXPECT_NEAR(bw_distance(SpdMatrix::identity(2), 4.0 * SpdMatrix::identity(2)), 1.0, 1e-14);
  EXPECT_EQ(bw_distance(SpdMatrix::identity(3), SpdMatrix::identity(3)), 0.0);
}

TEST(BwDistance, MatchesCholeskySvdOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(seed % 4);
    const SpdMatrix a = random_spd(m, rng, 0.1, 10.0);
    const SpdMatrix b = random_spd(m, rng, 0.1, 10.0);
    EXPECT_NEAR(bw_distance(a, b), testing::bw_distance_svd(a.matrix(), b.matrix()), 1e-9);
  }
}

TEST(BwDistance, SymmetricViaCyclicTrace) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(seed % 3);
    const SpdMatrix a = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(m, rng, 0.2, 5.0);
    EXPECT_NEAR(bw_distance(a, b), bw_distance(b, a), 1e-10);
  }
}

TEST(BwDistance, TriangleInequality) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const Eigen::Index m = 2 + static_cast<Eigen::Index>(seed % 3);
    const SpdMatrix a = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(m, rng, 0.2, 5.0);
    const SpdMatrix c = random_spd(m, rng, 0.2, 5.0);
    EXPECT_GE(bw_distance(a, b), 0.0);
    EXPECT_LE(bw_distance(a, c), bw_distance(a, b) + bw_distance(b, c) + 1e-8);
  }
}

TEST(BwDistance, Scaling) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const SpdMatrix a = random_spd(3, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(3, rng, 0.2, 5.0);
    const double d = bw_distance(a, b);
    for (double c : {0.5, 2.0, 4.0}) EXPECT_NEAR(bw_distance(c * a, c * b), std::sqrt(c) * d, 1e-10);
  }
}

TEST(BwDistance, DimensionMismatch) {
  EXPECT_THROW(bw_distance(SpdMatrix::identity(2), SpdMatrix::identity(3)), DimensionError);
}

TEST(Geodesic, Endpoints) {
  const SpdMatrix a = random_spd(3, std::uint64_t{1}, 0.5, 2.0);
  const SpdMatrix b = random_spd(3, std::uint64_t{2}, 0.5, 2.0);
  EXPECT_EQ(geodesic(a, b, 0.0).matrix(), a.matrix());
  EXPECT_EQ(geodesic(a, b, 1.0).matrix(), b.matrix());
}

TEST(Geodesic, ScalarMidpoint) {
  const SpdMatrix g = geodesic(SpdMatrix::identity(2), 4.0 * SpdMatrix::identity(2), 0.5);
  EXPECT_LE(rel_err(g.matrix(), testing::scalar_identity(2, 2.25)), 1e-14);
}

TEST(Geodesic, ConstantSpeed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const SpdMatrix a = random_spd(3, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(3, rng, 0.2, 5.0);
    const double d = bw_distance(a, b);
    for (double t : {0.25, 0.5, 0.75}) {
      const SpdMatrix g = geodesic(a, b, t);
      EXPECT_NEAR(bw_distance(a, g), t * d, 1e-7);
      EXPECT_NEAR(bw_distance(g, b), (1 - t) * d, 1e-7);
      EXPECT_GT(g.min_eig(), 0.0);
    }
  }
}

TEST(Geodesic, CommutingReduction) {
  // AB = BA gives A <>_t B = ((1-t) A^{1/2} + t B^{1/2})^2.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const ComplexMatrix u = random_unitary(4, rng);
    const SpdMatrix a = spd_from_spectrum(u, random_spectrum(4, 0.2, 5.0, rng));
    const SpdMatrix b = spd_from_spectrum(u, random_spectrum(4, 0.2, 5.0, rng));
    for (double t : {0.1, 0.5, 0.9}) {
      const ComplexMatrix r = (1 - t) * sqrtm(a).matrix() + t * sqrtm(b).matrix();
      EXPECT_LE((geodesic(a, b, t).matrix() - r * r).norm(), 1e-10 * std::max(1.0, (r * r).norm()));
    }
  }
}

TEST(Geodesic, RejectsParameterOutsideUnitInterval) {
  const SpdMatrix a = SpdMatrix::identity(2);
  EXPECT_THROW(geodesic(a, a, -0.1), DomainError);
  EXPECT_THROW(geodesic(a, a, 1.5), DomainError);
  EXPECT_THROW(geodesic(a, a, std::nan("")), DomainError);
  EXPECT_THROW(geodesic(a, SpdMatrix::identity(3), 0.5), DimensionError);
}

TEST(ProductSqrt, SquaresToProduct) {
  const SpdMatrix a = random_spd(3, std::uint64_t{21}, 0.3, 3.0);
  const SpdMatrix b = random_spd(3, std::uint64_t{22}, 0.3, 3.0);
  const ComplexMatrix r = product_sqrt(a, b);
  const ComplexMatrix ab = a.matrix() * b.matrix();
  EXPECT_LE((r * r - ab).norm(), 1e-10 * ab.norm());
  // The principal root has positive spectrum.
  Eigen::ComplexEigenSolver<ComplexMatrix> es(r);
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_GT(es.eigenvalues()(i).real(), 0.0);
}

TEST(GaussianW2, Examples) {
  const SpdMatrix a = random_spd(3, std::uint64_t{4}, 0.5, 2.0);
  const RealVector zero = RealVector::Zero(3);
  EXPECT_LE(gaussian_w2({zero, a}, {zero, a}), 1e-7);

  RealVector m1(3), m2(3);
  m1 << 1, 2, 3;
  m2 << -1, 0, 3;
  EXPECT_NEAR(gaussian_w2({m1, a}, {m2, a}), (m1 - m2).norm(), 1e-7);

  const RealVector z2 = RealVector::Zero(2);
  EXPECT_NEAR(gaussian_w2({z2, SpdMatrix::identity(2)}, {z2, 4.0 * SpdMatrix::identity(2)}),
              std::sqrt(2.0), 1e-14);
}

TEST(GaussianW2, ScaledDistanceConsistency) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const SpdMatrix a = random_spd(3, rng, 0.2, 5.0);
    const SpdMatrix b = random_spd(3, rng, 0.2, 5.0);
    const RealVector z = RealVector::Zero(3);
    EXPECT_NEAR(bw_distance(a, b), gaussian_w2({z, a}, {z, b}) / std::sqrt(2.0), 1e-10);
  }
}

TEST(GaussianW2, Mismatches) {
  EXPECT_THROW(GaussianParams(RealVector::Zero(2), SpdMatrix::identity(3)), DimensionError);
  EXPECT_THROW(gaussian_w2({RealVector::Zero(2), SpdMatrix::identity(2)},
                           {RealVector::Zero(3), SpdMatrix::identity(3)}),
               DimensionError);
}

TEST(Hellinger, Examples) {
  const ProbVector p({0.2, 0.3, 0.5});
  EXPECT_EQ(hellinger(p, p), 0.0);
  EXPECT_NEAR(hellinger(ProbVector({1, 0}), ProbVector({0, 1})), 1.0, 1e-15);
  EXPECT_THROW(hellinger(ProbVector({1.0}), ProbVector({0.5, 0.5})), DimensionError);
  EXPECT_THROW(ProbVector({0.5, 0.6}), DomainError);
  EXPECT_THROW(ProbVector({1.5, -0.5}), DomainError);
}

TEST(Hellinger, DiagonalReductionOfBwDistance) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    std::vector<double> p(5), q(5);
    double sp = 0, sq = 0;
    for (int i = 0; i < 5; ++i) {
      p[i] = uni(rng);
      q[i] = uni(rng);
      sp += p[i];
      sq += q[i];
    }
    for (int i = 0; i < 5; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    const double h = hellinger(ProbVector(p), ProbVector(q));
    EXPECT_GE(h, 0.0);
    EXPECT_LE(h, 1.0);
    EXPECT_NEAR(bw_distance(SpdMatrix::diagonal(p), SpdMatrix::diagonal(q)), h, 1e-10);
  }
}

}  // namespace
}  // namespace bwmean
