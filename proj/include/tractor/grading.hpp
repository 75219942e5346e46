#pragma once

// |k|-gradings of a split classical Lie algebra induced by a set of simple roots.

#include "tractor/algebra.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace tractor {

/// Simple-root indices, 1-based as in the Bourbaki labeling.
using SigmaSet = std::set<int>;

inline std::string sigma_string(const SigmaSet& sigma) {
  std::string out = "{";
  bool first = true;
  for (int s : sigma) {
    if (!first) out += ",";
    out += std::to_string(s);
    first = false;
  }
  return out + "}";
}

/// Sum of the root's coefficients at the (1-based) indices in sigma.
inline int sigma_height(const RootVector& root, const SigmaSet& sigma) {
  int h = 0;
  for (int s : sigma) {
    if (s < 1 || s > static_cast<int>(root.size()))
      throw std::out_of_range("simple root index " + std::to_string(s) + " out of range 1.." +
                              std::to_string(root.size()));
    h += root[static_cast<std::size_t>(s - 1)];
  }
  return h;
}

template <typename Scalar>
struct GradedDecomposition {
  SigmaSet sigma;
  int k = 0;
  std::map<int, std::vector<Eigen::Index>> components;  // degree j -> basis indices of g_j
  VectorX<Scalar> grading_element;

  const std::vector<Eigen::Index>& component(int j) const {
    static const std::vector<Eigen::Index> empty;
    auto it = components.find(j);
    return it == components.end() ? empty : it->second;
  }

  /// Basis of g^j = sum of g_i for i >= j.
  std::vector<Eigen::Index> filtration(int j) const {
    std::vector<Eigen::Index> out;
    for (const auto& [deg, idx] : components)
      if (deg >= j) out.insert(out.end(), idx.begin(), idx.end());
    return out;
  }

  Eigen::Index dim(int j) const { return static_cast<Eigen::Index>(component(j).size()); }

  /// g_- = g_{-k} + ... + g_{-1}.
  std::vector<Eigen::Index> negative_part() const {
    std::vector<Eigen::Index> out;
    for (const auto& [deg, idx] : components)
      if (deg < 0) out.insert(out.end(), idx.begin(), idx.end());
    return out;
  }
  std::vector<Eigen::Index> parabolic() const { return filtration(0); }
  std::vector<Eigen::Index> nilradical() const { return filtration(1); }

  /// Degree of each basis element.
  std::map<Eigen::Index, int> degree_of() const {
    std::map<Eigen::Index, int> out;
    for (const auto& [deg, idx] : components)
      for (auto i : idx) out[i] = deg;
    return out;
  }
};

inline void validate_sigma(const SigmaSet& sigma, int rank) {
  if (sigma.empty()) throw PreconditionError("sigma must be nonempty (an empty set gives p = g, no |k|-grading)");
  for (int s : sigma)
    if (s < 1 || s > rank)
      throw std::out_of_range("sigma index " + std::to_string(s) + " out of range 1.." + std::to_string(rank));
}

/// K in the Cartan subalgebra with alpha_i(K) = 1 for i in sigma and 0 otherwise.
template <typename Scalar>
VectorX<Scalar> grading_element(const LieAlgebra<Scalar>& a, const SigmaSet& sigma) {
  validate_sigma(sigma, a.rank());
  const int rank = a.rank();
  VectorX<Scalar> target = VectorX<Scalar>::Zero(rank);
  for (int s : sigma) target(s - 1) = Scalar(1);
  const auto& sv = a.simple_root_values();
  if (tractor::rank<Scalar>(sv) != rank) throw StructuralError("simple-root system for the grading element is singular");
  auto c = solve<Scalar>(sv, target);
  if (!c) throw StructuralError("grading element system is inconsistent");
  VectorX<Scalar> k = VectorX<Scalar>::Zero(a.dimension());
  for (int m = 0; m < rank; ++m) k(a.cartan_indices()[static_cast<std::size_t>(m)]) = (*c)(m);
  return k;
}

template <typename Scalar>
VectorX<Scalar> grading_element(const LieAlgebra<Scalar>& a, const GradedDecomposition<Scalar>& gd) {
  return grading_element(a, gd.sigma);
}

template <typename Scalar>
GradedDecomposition<Scalar> grade(const LieAlgebra<Scalar>& a, const SigmaSet& sigma) {
  validate_sigma(sigma, a.rank());
  const RootDatum rd = root_decomposition(a);
  GradedDecomposition<Scalar> gd;
  gd.sigma = sigma;
  for (Eigen::Index b = 0; b < a.dimension(); ++b) {
    const int r = rd.root_of_basis[static_cast<std::size_t>(b)];
    const int deg = r < 0 ? 0 : sigma_height(rd.roots[static_cast<std::size_t>(r)], sigma);
    gd.components[deg].push_back(b);
  }
  gd.k = sigma_height(rd.highest_root, sigma);
  gd.grading_element = grading_element(a, sigma);
  return gd;
}

namespace detail {

template <typename Scalar>
MatrixX<Scalar> rows_of(Eigen::Index dim, const std::vector<Eigen::Index>& idx) {
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(static_cast<Eigen::Index>(idx.size()), dim);
  for (std::size_t r = 0; r < idx.size(); ++r) m(static_cast<Eigen::Index>(r), idx[r]) = Scalar(1);
  return m;
}

}  // namespace detail

template <typename Scalar>
Report verify_grading(const LieAlgebra<Scalar>& a, const GradedDecomposition<Scalar>& gd) {
  Report rep;
  rep.title = "grading " + sigma_string(gd.sigma);
  const Eigen::Index n = a.dimension();

  auto& part = rep.add("partition");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& [deg, idx] : gd.components)
    for (auto i : idx) {
      ++part.evaluated;
      if (i < 0 || i >= n) part.fail("index " + std::to_string(i) + " out of range");
      else ++seen[static_cast<std::size_t>(i)];
    }
  for (Eigen::Index i = 0; i < n; ++i)
    if (seen[static_cast<std::size_t>(i)] != 1) part.fail("basis element " + std::to_string(i) + " covered " +
                                                          std::to_string(seen[static_cast<std::size_t>(i)]) + " times");
  if (!part.passed) return rep;

  auto& range = rep.add("degree_range");
  range.evaluated = gd.components.size();
  for (const auto& [deg, idx] : gd.components)
    if (!idx.empty() && (deg < -gd.k || deg > gd.k)) range.fail("degree " + std::to_string(deg) + " outside [-k,k]");

  // [g_i, g_j] in g_{i+j}
  auto& compat = rep.add("bracket_compatibility");
  const auto degree = gd.degree_of();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      ++compat.evaluated;
      const int target = degree.at(i) + degree.at(j);
      for (const auto& [l, c] : a.structure(i, j))
        if (degree.at(l) != target) {
          compat.fail("[" + std::to_string(i) + "," + std::to_string(j) + "] has a component in degree " +
                      std::to_string(degree.at(l)) + ", expected " + std::to_string(target));
          break;
        }
    }

  // g_- generated by g_{-1}
  auto& gen = rep.add("generated_by_minus_one");
  gen.evaluated = 1;
  {
    const auto& minus_one = gd.component(-1);
    MatrixX<Scalar> spanned = detail::rows_of<Scalar>(n, minus_one);
    MatrixX<Scalar> frontier = spanned;
    for (int step = 1; step < gd.k && frontier.rows() > 0; ++step) {
      std::vector<VectorX<Scalar>> next;
      for (auto g : minus_one)
        for (Eigen::Index r = 0; r < frontier.rows(); ++r)
          next.push_back(bracket(a, a.basis_element(g), VectorX<Scalar>(frontier.row(r).transpose())));
      MatrixX<Scalar> nm(static_cast<Eigen::Index>(next.size()), n);
      for (std::size_t r = 0; r < next.size(); ++r) nm.row(static_cast<Eigen::Index>(r)) = next[r].transpose();
      frontier = row_space<Scalar>(nm);
      MatrixX<Scalar> stacked(spanned.rows() + frontier.rows(), n);
      stacked << spanned, frontier;
      spanned = row_space<Scalar>(stacked);
    }
    const MatrixX<Scalar> minus = detail::rows_of<Scalar>(n, gd.negative_part());
    if (rank<Scalar>(spanned) != minus.rows() || !rows_in_span<Scalar>(spanned, minus) ||
        !rows_in_span<Scalar>(minus, spanned))
      gen.fail("span of iterated brackets of g_{-1} has dimension " + std::to_string(rank<Scalar>(spanned)) +
               ", g_- has dimension " + std::to_string(minus.rows()));
  }

  auto& ends = rep.add("extreme_degrees_nonzero");
  ends.evaluated = 2;
  if (gd.k < 1) ends.fail("k = " + std::to_string(gd.k));
  else if (gd.dim(gd.k) == 0 || gd.dim(-gd.k) == 0) ends.fail("g_{+-k} vanishes for k = " + std::to_string(gd.k));

  // k recomputed as the largest nonzero degree
  auto& kcheck = rep.add("k_matches_highest_degree");
  kcheck.evaluated = 1;
  int top = 0;
  for (const auto& [deg, idx] : gd.components)
    if (!idx.empty()) top = std::max(top, deg);
  if (top != gd.k) kcheck.fail("largest degree " + std::to_string(top) + " != k = " + std::to_string(gd.k));

  auto& sym = rep.add("dimension_symmetry");
  for (int j = 1; j <= gd.k; ++j) {
    ++sym.evaluated;
    if (gd.dim(j) != gd.dim(-j)) sym.fail("dim g_" + std::to_string(j) + " != dim g_-" + std::to_string(j));
  }

  auto& kel = rep.add("grading_element");
  for (const auto& [deg, idx] : gd.components)
    for (auto i : idx) {
      ++kel.evaluated;
      VectorX<Scalar> r = bracket(a, gd.grading_element, a.basis_element(i));
      r(i) -= Scalar(deg);
      if (!is_zero_vector(r)) kel.fail("[K, x" + std::to_string(i) + "] != " + std::to_string(deg) + " x" + std::to_string(i));
    }

  auto& filt = rep.add("filtration_compatibility");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      ++filt.evaluated;
      const int lower = degree.at(i) + degree.at(j);
      for (const auto& [l, c] : a.structure(i, j))
        if (degree.at(l) < lower) {
          filt.fail("[" + std::to_string(i) + "," + std::to_string(j) + "] leaves g^" + std::to_string(lower));
          break;
        }
    }
  return rep;
}

template <typename Scalar>
MatrixX<Scalar> gram_block(const LieAlgebra<Scalar>& a, const std::vector<Eigen::Index>& rows,
                           const std::vector<Eigen::Index>& cols) {
  MatrixX<Scalar> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a.killing_gram()(rows[r], cols[c]);
  return m;
}

/// Killing-form dualities between graded pieces, all exact.
template <typename Scalar>
Report verify_duality(const LieAlgebra<Scalar>& a, const GradedDecomposition<Scalar>& gd) {
  Report rep;
  rep.title = "duality " + sigma_string(gd.sigma);
  const Eigen::Index n = a.dimension();

  auto& orth = rep.add("orthogonality");
  for (int i = -gd.k; i <= gd.k; ++i)
    for (int j = -gd.k; j <= gd.k; ++j) {
      if (i + j == 0) continue;
      ++orth.evaluated;
      if (!is_zero_matrix<Scalar>(gram_block(a, gd.component(i), gd.component(j))))
        orth.fail("B(g_" + std::to_string(i) + ", g_" + std::to_string(j) + ") != 0");
    }

  auto& pair = rep.add("graded_pairing");
  for (int j = -gd.k; j <= gd.k; ++j) {
    ++pair.evaluated;
    const auto block = gram_block(a, gd.component(j), gd.component(-j));
    if (block.rows() != block.cols() || tractor::rank<Scalar>(block) != block.rows())
      pair.fail("B on g_" + std::to_string(j) + " x g_" + std::to_string(-j) + " is degenerate");
  }

  auto& quot = rep.add("quotient_pairing");
  quot.evaluated = 1;
  {
    const auto block = gram_block(a, gd.negative_part(), gd.nilradical());
    if (block.rows() != block.cols() || tractor::rank<Scalar>(block) != block.rows())
      quot.fail("B on g_- x p_+ is degenerate");
  }

  // p_+ = p^perp: null space of B(p, -) compared with p_+.
  auto& perp = rep.add("nilradical_is_orthogonal_of_parabolic");
  perp.evaluated = 1;
  {
    const MatrixX<Scalar> p_rows = detail::rows_of<Scalar>(n, gd.parabolic());
    const MatrixX<Scalar> complement = null_space<Scalar>(MatrixX<Scalar>(p_rows * a.killing_gram())).transpose();
    const MatrixX<Scalar> nil = detail::rows_of<Scalar>(n, gd.nilradical());
    if (complement.rows() != nil.rows() || !rows_in_span<Scalar>(complement, nil))
      perp.fail("p^perp has dimension " + std::to_string(complement.rows()) + ", p_+ has dimension " +
                std::to_string(nil.rows()));
    else if (!rows_in_span<Scalar>(complement, p_rows))
      perp.fail("p^perp not contained in p");
  }
  return rep;
}

}  // namespace tractor
