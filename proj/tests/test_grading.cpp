#include "oracles.hpp"

#include "tractor/grading.hpp"

#include <gtest/gtest.h>

using namespace tractor;

namespace {

std::vector<Eigen::Index> dims(const GradedDecomposition<Rational>& gd) {
  std::vector<Eigen::Index> out;
  for (int j = -gd.k; j <= gd.k; ++j) out.push_back(gd.dim(j));
  return out;
}

std::vector<SigmaSet> all_sigmas(int rank) {
  std::vector<SigmaSet> out;
  for (unsigned mask = 1; mask < (1u << rank); ++mask) {
    SigmaSet s;
    for (int i = 0; i < rank; ++i)
      if (mask & (1u << i)) s.insert(i + 1);
    out.push_back(s);
  }
  return out;
}

MatrixXq diag(std::initializer_list<Rational> v) {
  VectorXq d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& x : v) d(i++) = x;
  return d.asDiagonal();
}

// Sigma-height of E_ij in sl(n+1): E_ij with i < j carries alpha_{i+1} + ... + alpha_j.
int sl_degree(const MatrixXq& m, const SigmaSet& sigma) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i == j || m(i, j) == 0) continue;
      const auto lo = std::min(i, j), hi = std::max(i, j);
      int count = 0;
      for (int s : sigma)
        if (lo < s && s <= hi) ++count;
      return i < j ? count : -count;
    }
  return 0;
}

}  // namespace

TEST(SigmaHeight, SumsSelectedCoefficients) {
  EXPECT_EQ(sigma_height({1, 1}, {1}), 1);
  EXPECT_EQ(sigma_height({1, 1, 1}, {1, 3}), 2);
  EXPECT_EQ(sigma_height({1, 2, 2}, {1, 2, 3}), 5);
  EXPECT_EQ(sigma_height({1, 2, 1, 1}, {2}), 2);
  EXPECT_EQ(sigma_height({1, 2, 1, 1}, {1, 3}), 2);
  EXPECT_EQ(sigma_height({-1, -1}, {1, 2}), -2);
  EXPECT_EQ(sigma_height({0, 1}, {1}), 0);
  EXPECT_THROW(sigma_height({1, 1}, {3}), std::out_of_range);
}

TEST(Grade, Sl2Borel) {
  const auto a = build_algebra<Rational>(Family::A, 1);
  const auto gd = grade(a, {1});
  EXPECT_EQ(gd.k, 1);
  EXPECT_EQ(dims(gd), (std::vector<Eigen::Index>{1, 1, 1}));
  EXPECT_EQ(a.realize(gd.grading_element), diag({Rational(1, 2), Rational(-1, 2)}));
}

TEST(Grade, Sl3Dimensions) {
  const auto a = build_algebra<Rational>(Family::A, 2);
  const auto g1 = grade(a, {1});
  EXPECT_EQ(g1.k, 1);
  EXPECT_EQ(dims(g1), (std::vector<Eigen::Index>{2, 4, 2}));
  EXPECT_EQ(a.realize(g1.grading_element), diag({Rational(2, 3), Rational(-1, 3), Rational(-1, 3)}));

  const auto g12 = grade(a, {1, 2});
  EXPECT_EQ(g12.k, 2);
  EXPECT_EQ(dims(g12), (std::vector<Eigen::Index>{1, 2, 2, 2, 1}));
  EXPECT_EQ(a.realize(g12.grading_element), diag({Rational(1), Rational(0), Rational(-1)}));
}

TEST(Grade, DegreesMatchMatrixPositions) {
  for (int n : {2, 3}) {
    const auto a = build_algebra<Rational>(Family::A, n);
    for (const auto& sigma : all_sigmas(n)) {
      const auto gd = grade(a, sigma);
      for (const auto& [deg, idx] : gd.components)
        for (auto b : idx) EXPECT_EQ(deg, sl_degree(a.basis()[static_cast<std::size_t>(b)], sigma));
    }
  }
}

TEST(Grade, KActsByDegreeOnMatrices) {
  for (const auto& c : oracle::small_algebras()) {
    const auto a = build_algebra<Rational>(parse_family(std::string(1, c.family)), c.rank);
    const auto gd = grade(a, {1});
    const MatrixXq k = a.realize(gd.grading_element);
    for (const auto& [deg, idx] : gd.components)
      for (auto b : idx) {
        const MatrixXq& x = a.basis()[static_cast<std::size_t>(b)];
        EXPECT_EQ(oracle::commutator(k, x), MatrixXq(Rational(deg) * x)) << c.family << c.rank;
      }
  }
}

TEST(Grade, BorelOfB2IsFiveGrading) {
  const auto a = build_algebra<Rational>(Family::B, 2);
  const auto gd = grade(a, {1, 2});
  // highest root alpha1 + 2 alpha2 has height 3
  EXPECT_EQ(gd.k, 3);
  EXPECT_EQ(dims(gd), (std::vector<Eigen::Index>{1, 1, 2, 2, 2, 1, 1}));
}

TEST(Grade, ContactGradingOfC2) {
  const auto a = build_algebra<Rational>(Family::C, 2);
  const auto gd = grade(a, {1});
  // highest root 2 alpha1 + alpha2
  EXPECT_EQ(gd.k, 2);
  EXPECT_EQ(gd.dim(-2), 1);
  EXPECT_EQ(gd.dim(-1), 2);
}

TEST(Grade, RejectsBadSigma) {
  const auto a = build_algebra<Rational>(Family::A, 2);
  EXPECT_THROW(grade(a, {}), PreconditionError);
  EXPECT_THROW(grade(a, {3}), std::out_of_range);
  EXPECT_THROW(grade(a, {0}), std::out_of_range);
}

TEST(Grade, FiltrationPieces) {
  const auto a = build_algebra<Rational>(Family::A, 3);
  const auto gd = grade(a, {2});
  EXPECT_EQ(static_cast<Eigen::Index>(gd.parabolic().size()), gd.dim(0) + gd.dim(1));
  EXPECT_EQ(static_cast<Eigen::Index>(gd.negative_part().size()), gd.dim(-1));
  EXPECT_EQ(gd.dim(-1), 4);  // Grassmannian Gr(2,4)
  EXPECT_EQ(gd.filtration(-gd.k).size(), static_cast<std::size_t>(a.dimension()));
}

TEST(VerifyGrading, AllSigmasOfSmallAlgebras) {
  for (const auto& c : oracle::small_algebras()) {
    if (c.family == 'D') continue;  // the acceptance suite sweeps D4
    const auto a = build_algebra<Rational>(parse_family(std::string(1, c.family)), c.rank);
    for (const auto& sigma : all_sigmas(c.rank)) {
      const auto gd = grade(a, sigma);
      const Report g = verify_grading(a, gd);
      const Report d = verify_duality(a, gd);
      EXPECT_TRUE(g.passed()) << c.family << c.rank << sigma_string(sigma);
      EXPECT_TRUE(d.passed()) << c.family << c.rank << sigma_string(sigma);
    }
  }
}

TEST(VerifyGrading, DetectsMisplacedBasisElement) {
  const auto a = build_algebra<Rational>(Family::A, 2);
  auto gd = grade(a, {1, 2});
  // move one element of g_1 into g_0
  const auto moved = gd.components[1].back();
  gd.components[1].pop_back();
  gd.components[0].push_back(moved);
  const Report r = verify_grading(a, gd);
  EXPECT_TRUE(r.find("partition")->passed);
  EXPECT_FALSE(r.find("grading_element")->passed);
  EXPECT_FALSE(r.find("bracket_compatibility")->passed);
  EXPECT_FALSE(r.passed());
}

TEST(VerifyGrading, DetectsSwappedBasisVectors) {
  const auto a = build_algebra<Rational>(Family::A, 2);
  auto gd = grade(a, {1});
  std::swap(gd.components[1].front(), gd.components[0].front());
  const Report r = verify_grading(a, gd);
  EXPECT_TRUE(r.find("partition")->passed);
  EXPECT_FALSE(r.find("bracket_compatibility")->passed);
  EXPECT_FALSE(r.find("bracket_compatibility")->witness.empty());
}

TEST(VerifyGrading, DetectsWrongGradingElement) {
  const auto a = build_algebra<Rational>(Family::B, 2);
  auto gd = grade(a, {2});
  gd.grading_element *= Rational(2);
  const Report r = verify_grading(a, gd);
  EXPECT_FALSE(r.find("grading_element")->passed);
  EXPECT_FALSE(r.find("grading_element")->witness.empty());
}

TEST(VerifyGrading, DetectsDuplicatedIndex) {
  const auto a = build_algebra<Rational>(Family::A, 1);
  auto gd = grade(a, {1});
  gd.components[0].push_back(gd.components[1].front());
  EXPECT_FALSE(verify_grading(a, gd).find("partition")->passed);
}

TEST(VerifyDuality, DetectsWrongPieces) {
  const auto a = build_algebra<Rational>(Family::A, 2);
  auto gd = grade(a, {1});
  // swap g_1 and g_0 labels: p^perp no longer matches
  std::swap(gd.components[1], gd.components[0]);
  const Report r = verify_duality(a, gd);
  EXPECT_FALSE(r.passed());
}

TEST(Duality, PairingBlocksAreSquareAndInvertible) {
  const auto a = build_algebra<Rational>(Family::C, 3);
  const auto gd = grade(a, {1, 3});
  for (int j = 1; j <= gd.k; ++j) {
    const MatrixXq block = gram_block(a, gd.component(j), gd.component(-j));
    ASSERT_EQ(block.rows(), block.cols());
    EXPECT_NE(determinant<Rational>(block), Rational(0));
  }
}
