#include "oracles.hpp"

#include "tractor/coisotropy.hpp"

#include <gtest/gtest.h>

using namespace tractor;

namespace {

// Index of a basis element whose realization has its single off-diagonal entry at (r, c).
Eigen::Index elementary(const LieAlgebra<Rational>& a, Eigen::Index r, Eigen::Index c) {
  for (Eigen::Index b = 0; b < a.dimension(); ++b) {
    const auto& m = a.basis()[static_cast<std::size_t>(b)];
    if (m(r, c) != 0 && (m.array() != 0).count() == 1) return b;
  }
  return -1;
}

}  // namespace

TEST(Subspace, EchelonBasisAndMembership) {
  const auto a = build_algebra<Rational>(Family::A, 1);
  VectorXq x = VectorXq::Zero(3), y = VectorXq::Zero(3);
  x << 1, 1, 0;
  y << 2, 2, 0;
  const auto s = Subspace<Rational>::from_elements(a, {x, y});
  EXPECT_EQ(s.dim(), 1);
  EXPECT_TRUE(s.contains(VectorXq(Rational(-3) * x)));
  EXPECT_FALSE(s.contains(a.basis_element(0)));
  EXPECT_THROW(s.contains(VectorXq::Zero(2)), SizeMismatch);
  EXPECT_EQ(Subspace<Rational>::whole(a).dim(), 3);
  EXPECT_EQ(Subspace<Rational>::zero(a).dim(), 0);
}

TEST(OrthComplement, Sl2Examples) {
  const auto a = build_algebra<Rational>(Family::A, 1);
  // B(e, -) vanishes on span{e, h}
  const auto e = Subspace<Rational>::from_basis_indices(a, {0});
  EXPECT_EQ(orth_complement(e), Subspace<Rational>::from_basis_indices(a, {0, 2}));
  // h^perp = span{e, f}
  const auto h = Subspace<Rational>::from_basis_indices(a, {2});
  EXPECT_EQ(orth_complement(h), Subspace<Rational>::from_basis_indices(a, {0, 1}));
  const auto borel = Subspace<Rational>::from_basis_indices(a, {2, 0});
  EXPECT_EQ(orth_complement(borel), e);
  EXPECT_EQ(orth_complement(Subspace<Rational>::whole(a)).dim(), 0);
  EXPECT_EQ(orth_complement(Subspace<Rational>::zero(a)).dim(), 3);
}

TEST(OrthComplement, DimensionFormulaAndInvolution) {
  std::mt19937 rng(4);
  const auto a = build_algebra<Rational>(Family::B, 2);
  for (int k = 1; k <= 4; ++k) {
    std::vector<VectorXq> gens;
    for (int i = 0; i < k; ++i) gens.push_back(oracle::random_vector(a.dimension(), rng));
    const auto s = Subspace<Rational>::from_elements(a, gens);
    const auto perp = orth_complement(s);
    EXPECT_EQ(s.dim() + perp.dim(), a.dimension());
    EXPECT_EQ(orth_complement(perp), s);
    for (Eigen::Index i = 0; i < s.basis().rows(); ++i)
      for (Eigen::Index j = 0; j < perp.basis().rows(); ++j)
        EXPECT_EQ(killing_form(a, VectorXq(s.basis().row(i).transpose()), VectorXq(perp.basis().row(j).transpose())),
                  Rational(0));
  }
}

TEST(Predicates, Sl2Subspaces) {
  const auto a = build_algebra<Rational>(Family::A, 1);
  const auto borel = Subspace<Rational>::from_basis_indices(a, {0, 2});
  const auto ef = Subspace<Rational>::from_basis_indices(a, {0, 1});
  const auto cartan = Subspace<Rational>::from_basis_indices(a, {2});
  EXPECT_TRUE(is_subalgebra(borel));
  EXPECT_TRUE(is_coisotropic(borel));
  EXPECT_FALSE(is_subalgebra(ef));
  EXPECT_TRUE(is_subalgebra(cartan));
  EXPECT_FALSE(is_coisotropic(cartan));
  EXPECT_TRUE(is_coisotropic(Subspace<Rational>::whole(a)));
}

TEST(Predicates, ParabolicFromGradingIsCoisotropic) {
  const auto a = build_algebra<Rational>(Family::C, 3);
  const auto gd = grade(a, {2});
  const auto p = Subspace<Rational>::from_basis_indices(a, gd.parabolic());
  EXPECT_TRUE(is_subalgebra(p));
  EXPECT_TRUE(is_coisotropic(p));
  EXPECT_EQ(orth_complement(p), Subspace<Rational>::from_basis_indices(a, gd.nilradical()));
  const auto g0 = Subspace<Rational>::from_basis_indices(a, gd.component(0));
  EXPECT_TRUE(is_subalgebra(g0));
  EXPECT_FALSE(is_coisotropic(g0));
}

TEST(Predicates, MatrixLevelCheckInSl3) {
  const auto a = build_algebra<Rational>(Family::A, 2);
  // upper triangular matrices plus diagonal: the Borel subalgebra
  std::vector<Eigen::Index> idx = a.cartan_indices();
  for (auto [r, c] : {std::pair{0, 1}, {0, 2}, {1, 2}}) idx.push_back(elementary(a, r, c));
  const auto b = Subspace<Rational>::from_basis_indices(a, idx);
  EXPECT_TRUE(is_subalgebra(b));
  EXPECT_TRUE(is_coisotropic(b));
}

TEST(RootSubsets, ClosednessAndParabolicity) {
  const auto a = build_algebra<Rational>(Family::A, 2);
  const auto rd = root_decomposition(a);
  const int a1 = rd.index_of({1, 0}), a2 = rd.index_of({0, 1}), a12 = rd.index_of({1, 1});
  EXPECT_FALSE(is_closed_root_subset(rd, {a1, a2}));
  EXPECT_TRUE(is_closed_root_subset(rd, {a1, a2, a12}));
  const auto borel = make_descriptor(rd, {a12, a1, a2});
  EXPECT_TRUE(borel.closed);
  EXPECT_TRUE(std::is_sorted(borel.root_subset.begin(), borel.root_subset.end()));
  EXPECT_TRUE(is_parabolic_root_subalgebra(rd, borel));
  const auto small = make_descriptor(rd, {a1});
  EXPECT_TRUE(small.closed);
  EXPECT_FALSE(is_parabolic_root_subalgebra(rd, small));
  EXPECT_THROW(is_parabolic_root_subalgebra(rd, make_descriptor(rd, {a1, a2})), PreconditionError);
  std::vector<int> negative;
  for (const auto& r : rd.positive_roots) negative.push_back(rd.index_of(negated(r)));
  EXPECT_TRUE(is_parabolic_root_subalgebra(rd, make_descriptor(rd, negative)));
  const auto cartan_only = make_descriptor(rd, {});
  EXPECT_TRUE(cartan_only.closed);
  EXPECT_FALSE(is_parabolic_root_subalgebra(rd, cartan_only));
}

TEST(Sweep, Sl2Counts) {
  const auto a = build_algebra<Rational>(Family::A, 1);
  const auto s = sweep_root_subalgebras(a);
  EXPECT_EQ(s.root_count, 2u);
  EXPECT_EQ(s.entries.size(), 4u);
  EXPECT_EQ(s.count_closed(), 4u);
  EXPECT_EQ(s.count_coisotropic(), 3u);  // {h,e}, {h,f}, g
  EXPECT_EQ(s.count_parabolic(), 3u);
  EXPECT_TRUE(s.counterexamples.empty());
}

TEST(Sweep, NoCounterexamplesInRankTwo) {
  for (auto f : {Family::A, Family::B, Family::C}) {
    const auto a = build_algebra<Rational>(f, 2);
    const auto s = sweep_root_subalgebras(a);
    EXPECT_TRUE(s.counterexamples.empty()) << family_letter(f);
    EXPECT_GT(s.count_parabolic(), 0u);
    EXPECT_EQ(s.count_coisotropic(), s.count_parabolic());
  }
}

TEST(Sweep, ParabolicCountOfSl3) {
  // parabolics containing the diagonal: 6 Borels, 3 + 3 maximal, and g
  const auto s = sweep_root_subalgebras(build_algebra<Rational>(Family::A, 2));
  EXPECT_EQ(s.count_parabolic(), 13u);
}

TEST(Sweep, CapRefusal) {
  const auto a = build_algebra<Rational>(Family::B, 3);
  try {
    sweep_root_subalgebras(a);
    FAIL() << "expected refusal";
  } catch (const SweepCapExceeded& e) {
    EXPECT_EQ(e.cap(), kDefaultSweepCap);
    EXPECT_NE(std::string(e.what()).find("18"), std::string::npos);
  }
  EXPECT_THROW(sweep_root_subalgebras(build_algebra<Rational>(Family::A, 2), 4), SweepCapExceeded);
}
