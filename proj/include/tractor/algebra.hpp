#pragma once

// Split classical Lie algebras realized as matrix algebras over an exact field.
//
// A_n is sl(n+1) with its diagonal Cartan subalgebra. B_n, C_n and D_n are the
// Lie algebras preserving an anti-diagonal symmetric (B, D) or symplectic (C)
// form, so their Cartan subalgebras are diagonal as well and every
// elementary-matrix projection is a weight vector.

#include "tractor/errors.hpp"
#include "tractor/linalg.hpp"
#include "tractor/report.hpp"
#include "tractor/scalar.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tractor {

enum class Family { A, B, C, D };

inline char family_letter(Family f) {
  switch (f) {
    case Family::A: return 'A';
    case Family::B: return 'B';
    case Family::C: return 'C';
    case Family::D: return 'D';
  }
  return '?';
}

inline Family parse_family(std::string_view s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  if (s == "D" || s == "d") return Family::D;
  throw UnsupportedInput("unsupported Lie algebra family '" + std::string(s) + "' (expected A, B, C or D)");
}

inline constexpr int kMaxRank = 8;

inline int minimum_rank(Family f) {
  switch (f) {
    case Family::A: return 1;
    case Family::B: return 2;
    case Family::C: return 2;
    case Family::D: return 4;
  }
  return 1;
}

inline Eigen::Index classical_dimension(Family f, int n) {
  switch (f) {
    case Family::A: return n * (n + 2);
    case Family::B: return n * (2 * n + 1);
    case Family::C: return n * (2 * n + 1);
    case Family::D: return n * (2 * n - 1);
  }
  return 0;
}

/// Coordinates of a root over the simple roots.
using RootVector = std::vector<int>;

inline int root_height(const RootVector& r) { return std::accumulate(r.begin(), r.end(), 0); }

inline RootVector negated(RootVector r) {
  for (auto& c : r) c = -c;
  return r;
}

inline std::string root_string(const RootVector& r) {
  std::string out = "[";
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(r[i]);
  }
  return out + "]";
}

template <typename Scalar>
using SparseCoords = std::vector<std::pair<Eigen::Index, Scalar>>;

template <typename Scalar>
class LieAlgebra {
 public:
  using Element = VectorX<Scalar>;
  using Matrix = MatrixX<Scalar>;

  /// Raw data from which an algebra is assembled. `table[i * dim + j]` holds the
  /// sparse coordinates of [x_i, x_j]; `simple_root_values(j, m)` is the value of
  /// the j-th simple root on the m-th Cartan basis element.
  struct Data {
    Family family = Family::A;
    int rank = 0;
    Eigen::Index dimension = 0;
    std::vector<Matrix> basis;  // may be empty for an abstract algebra
    std::vector<SparseCoords<Scalar>> table;
    std::vector<Eigen::Index> cartan_indices;
    Matrix simple_root_values;
  };

  explicit LieAlgebra(Data data) : d_(std::move(data)) {
    if (d_.dimension <= 0) throw PreconditionError("Lie algebra must have positive dimension");
    if (static_cast<Eigen::Index>(d_.table.size()) != d_.dimension * d_.dimension)
      throw SizeMismatch("structure table must hold dimension^2 entries");
    if (!d_.basis.empty() && static_cast<Eigen::Index>(d_.basis.size()) != d_.dimension)
      throw SizeMismatch("basis size does not match dimension");
    for (const auto& entry : d_.table)
      for (const auto& [k, v] : entry)
        if (k < 0 || k >= d_.dimension) throw SizeMismatch("structure table index out of range");
    if (!d_.basis.empty()) prepare_coordinates();
    compute_killing();
  }

  Family family() const { return d_.family; }
  int rank() const { return d_.rank; }
  Eigen::Index dimension() const { return d_.dimension; }
  const std::vector<Matrix>& basis() const { return d_.basis; }
  bool has_realization() const { return !d_.basis.empty(); }
  const std::vector<Eigen::Index>& cartan_indices() const { return d_.cartan_indices; }
  const Matrix& killing_gram() const { return killing_; }
  const Matrix& simple_root_values() const { return d_.simple_root_values; }
  const Data& data() const { return d_; }

  const SparseCoords<Scalar>& structure(Eigen::Index i, Eigen::Index j) const {
    return d_.table[static_cast<std::size_t>(i * d_.dimension + j)];
  }

  /// c_ij^k in [x_i, x_j] = sum_k c_ij^k x_k.
  Scalar structure_constant(Eigen::Index i, Eigen::Index j, Eigen::Index k) const {
    for (const auto& [idx, v] : structure(i, j))
      if (idx == k) return v;
    return Scalar(0);
  }

  Element basis_element(Eigen::Index i) const {
    Element e = Element::Zero(d_.dimension);
    e(i) = Scalar(1);
    return e;
  }

  void check_size(const Element& x, const char* what) const {
    if (x.size() != d_.dimension)
      throw SizeMismatch(std::string(what) + ": element has " + std::to_string(x.size()) +
                         " coordinates, algebra dimension is " + std::to_string(d_.dimension));
  }

  /// Matrix realizing the element; only for algebras built with a realization.
  Matrix realize(const Element& x) const {
    check_size(x, "realize");
    if (!has_realization()) throw PreconditionError("algebra has no matrix realization");
    Matrix m = Matrix::Zero(d_.basis.front().rows(), d_.basis.front().cols());
    for (Eigen::Index i = 0; i < d_.dimension; ++i)
      if (!is_zero(x(i))) m += x(i) * d_.basis[static_cast<std::size_t>(i)];
    return m;
  }

  /// Basis coordinates of a realized matrix. Throws when m is not in the algebra.
  Element coordinates(const Matrix& m) const {
    if (!has_realization()) throw PreconditionError("algebra has no matrix realization");
    const Eigen::Index size = d_.basis.front().rows();
    if (m.rows() != size || m.cols() != size) throw SizeMismatch("coordinates: matrix size mismatch");
    Element sample(d_.dimension);
    for (Eigen::Index r = 0; r < d_.dimension; ++r) {
      const Eigen::Index pos = pivot_positions_[static_cast<std::size_t>(r)];
      sample(r) = m(pos / size, pos % size);
    }
    Element x = pivot_inverse_ * sample;
    if (realize(x) != m) throw PreconditionError("matrix does not lie in the algebra");
    return x;
  }

  std::string basis_label(Eigen::Index i) const {
    auto it = std::find(d_.cartan_indices.begin(), d_.cartan_indices.end(), i);
    if (it != d_.cartan_indices.end())
      return "h" + std::to_string(it - d_.cartan_indices.begin() + 1);
    return "x" + std::to_string(i);
  }

 private:
  void prepare_coordinates() {
    const Eigen::Index size = d_.basis.front().rows();
    Matrix flat(d_.dimension, size * size);
    for (Eigen::Index b = 0; b < d_.dimension; ++b)
      for (Eigen::Index r = 0; r < size; ++r)
        for (Eigen::Index c = 0; c < size; ++c) flat(b, r * size + c) = d_.basis[static_cast<std::size_t>(b)](r, c);
    const auto ech = row_reduce<Scalar>(flat);
    if (ech.rank() != d_.dimension) throw StructuralError("basis matrices are linearly dependent");
    pivot_positions_ = ech.pivots;
    Matrix sub(d_.dimension, d_.dimension);
    for (Eigen::Index r = 0; r < d_.dimension; ++r)
      sub.row(r) = flat.col(pivot_positions_[static_cast<std::size_t>(r)]).transpose();
    pivot_inverse_ = inverse<Scalar>(sub);
  }

  // B(x_i, x_j) = tr(ad x_i ad x_j) = sum_l sum_k c_il^k c_jk^l.
  void compute_killing() {
    const Eigen::Index n = d_.dimension;
    killing_ = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) {
        Scalar sum(0);
        for (Eigen::Index l = 0; l < n; ++l)
          for (const auto& [k, v] : structure(i, l)) {
            const Scalar w = structure_constant(j, k, l);
            if (!is_zero(w)) sum += v * w;
          }
        killing_(i, j) = sum;
        killing_(j, i) = sum;
      }
  }

  Data d_;
  Matrix killing_;
  std::vector<Eigen::Index> pivot_positions_;
  Matrix pivot_inverse_;
};

template <typename Scalar>
typename LieAlgebra<Scalar>::Element bracket(const LieAlgebra<Scalar>& a,
                                             const typename LieAlgebra<Scalar>::Element& x,
                                             const typename LieAlgebra<Scalar>::Element& y) {
  a.check_size(x, "bracket");
  a.check_size(y, "bracket");
  VectorX<Scalar> out = VectorX<Scalar>::Zero(a.dimension());
  for (Eigen::Index i = 0; i < a.dimension(); ++i) {
    if (is_zero(x(i))) continue;
    for (Eigen::Index j = 0; j < a.dimension(); ++j) {
      if (is_zero(y(j))) continue;
      const Scalar xy = x(i) * y(j);
      for (const auto& [k, v] : a.structure(i, j)) out(k) += xy * v;
    }
  }
  return out;
}

/// Column j is the coordinate vector of [x, basis_j].
template <typename Scalar>
MatrixX<Scalar> ad_matrix(const LieAlgebra<Scalar>& a, const typename LieAlgebra<Scalar>::Element& x) {
  a.check_size(x, "ad_matrix");
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(a.dimension(), a.dimension());
  for (Eigen::Index i = 0; i < a.dimension(); ++i) {
    if (is_zero(x(i))) continue;
    for (Eigen::Index j = 0; j < a.dimension(); ++j)
      for (const auto& [k, v] : a.structure(i, j)) m(k, j) += x(i) * v;
  }
  return m;
}

template <typename Scalar>
Scalar killing_form(const LieAlgebra<Scalar>& a, const typename LieAlgebra<Scalar>::Element& x,
                    const typename LieAlgebra<Scalar>::Element& y) {
  a.check_size(x, "killing_form");
  a.check_size(y, "killing_form");
  return x.dot(a.killing_gram() * y);
}

namespace detail {

template <typename Scalar>
MatrixX<Scalar> unit_matrix(Eigen::Index size, Eigen::Index r, Eigen::Index c) {
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(size, size);
  m(r, c) = Scalar(1);
  return m;
}

// Value of simple root j on a diagonal matrix, Bourbaki labeling.
template <typename Scalar>
Scalar simple_root_on_diagonal(Family f, int n, int j, const MatrixX<Scalar>& h) {
  if (f == Family::A || j < n - 1) return h(j, j) - h(j + 1, j + 1);
  switch (f) {
    case Family::B: return h(n - 1, n - 1);
    case Family::C: return Scalar(2) * h(n - 1, n - 1);
    case Family::D: return h(n - 2, n - 2) + h(n - 1, n - 1);
    default: break;
  }
  return Scalar(0);
}

// Weight of a realized weight vector: the eigenvalues of ad(H_m) on it, then
// rewritten over the simple roots.
template <typename Scalar>
RootVector realized_weight(const std::vector<MatrixX<Scalar>>& cartan, const MatrixX<Scalar>& simple_values,
                           const MatrixX<Scalar>& x) {
  Eigen::Index probe_r = -1, probe_c = -1;
  for (Eigen::Index r = 0; r < x.rows() && probe_r < 0; ++r)
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      if (!is_zero(x(r, c))) {
        probe_r = r;
        probe_c = c;
        break;
      }
  const auto rank = static_cast<Eigen::Index>(cartan.size());
  VectorX<Scalar> lambda(rank);
  for (Eigen::Index m = 0; m < rank; ++m) {
    const MatrixX<Scalar>& h = cartan[static_cast<std::size_t>(m)];
    MatrixX<Scalar> comm = h * x - x * h;
    lambda(m) = comm(probe_r, probe_c) / x(probe_r, probe_c);
    if (comm != lambda(m) * x) throw StructuralError("basis matrix is not a Cartan weight vector");
  }
  auto coeffs = solve<Scalar>(simple_values.transpose(), lambda);
  if (!coeffs) throw StructuralError("weight is not in the span of the simple roots");
  RootVector root(static_cast<std::size_t>(rank));
  for (Eigen::Index j = 0; j < rank; ++j) {
    if (!is_integer((*coeffs)(j))) throw StructuralError("non-integral root coefficient");
    root[static_cast<std::size_t>(j)] = static_cast<int>(to_int64((*coeffs)(j)));
  }
  return root;
}

inline bool root_order(const RootVector& a, const RootVector& b) {
  const int ha = root_height(a), hb = root_height(b);
  if (ha != hb) return ha < hb;
  return a > b;
}

}  // namespace detail

/// Split classical Lie algebra of the given family and rank.
template <typename Scalar = Rational>
LieAlgebra<Scalar> build_algebra(Family family, int rank) {
  if (rank < minimum_rank(family) || rank > kMaxRank)
    throw UnsupportedInput(std::string("unsupported algebra ") + family_letter(family) + std::to_string(rank) +
                           " (rank must be in [" + std::to_string(minimum_rank(family)) + ", " +
                           std::to_string(kMaxRank) + "])");
  using Matrix = MatrixX<Scalar>;
  const int n = rank;
  Eigen::Index size = 0;
  switch (family) {
    case Family::A: size = n + 1; break;
    case Family::B: size = 2 * n + 1; break;
    case Family::C:
    case Family::D: size = 2 * n; break;
  }

  std::vector<Matrix> cartan;
  std::vector<Matrix> candidates;
  if (family == Family::A) {
    for (int i = 0; i < n; ++i)
      cartan.push_back(detail::unit_matrix<Scalar>(size, i, i) - detail::unit_matrix<Scalar>(size, i + 1, i + 1));
    for (Eigen::Index p = 0; p < size; ++p)
      for (Eigen::Index q = 0; q < size; ++q)
        if (p != q) candidates.push_back(detail::unit_matrix<Scalar>(size, p, q));
  } else {
    // Form matrix J; the algebra is {X : X^T J + J X = 0} and X -> X - J^{-1} X^T J
    // projects onto it.
    Matrix form = Matrix::Zero(size, size);
    for (Eigen::Index i = 0; i < size; ++i) {
      Scalar sign(1);
      if (family == Family::C && i >= n) sign = Scalar(-1);
      form(i, size - 1 - i) = sign;
    }
    const Matrix form_inv = inverse<Scalar>(form);
    for (int i = 0; i < n; ++i)
      cartan.push_back(detail::unit_matrix<Scalar>(size, i, i) -
                       detail::unit_matrix<Scalar>(size, size - 1 - i, size - 1 - i));
    std::set<std::pair<Eigen::Index, Eigen::Index>> seen;
    for (Eigen::Index p = 0; p < size; ++p)
      for (Eigen::Index q = 0; q < size; ++q) {
        if (p == q) continue;
        Matrix e = detail::unit_matrix<Scalar>(size, p, q);
        Matrix proj = e - form_inv * e.transpose() * form;
        // Normalize so the first nonzero entry is 1, and skip duplicates.
        Eigen::Index fr = -1, fc = -1;
        for (Eigen::Index r = 0; r < size && fr < 0; ++r)
          for (Eigen::Index c = 0; c < size; ++c)
            if (!is_zero(proj(r, c))) {
              fr = r;
              fc = c;
              break;
            }
        if (fr < 0) continue;
        if (!seen.insert({fr, fc}).second) continue;
        proj /= proj(fr, fc);
        candidates.push_back(proj);
      }
  }

  Matrix simple_values(n, n);
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      simple_values(j, m) = detail::simple_root_on_diagonal<Scalar>(family, n, j, cartan[static_cast<std::size_t>(m)]);

  std::vector<std::pair<RootVector, Matrix>> root_vectors;
  for (auto& c : candidates) root_vectors.emplace_back(detail::realized_weight<Scalar>(cartan, simple_values, c), c);

  std::vector<RootVector> positive;
  for (const auto& [r, m] : root_vectors)
    if (root_height(r) > 0) positive.push_back(r);
  std::sort(positive.begin(), positive.end(), detail::root_order);
  positive.erase(std::unique(positive.begin(), positive.end()), positive.end());

  auto find_vector = [&](const RootVector& r) -> const Matrix& {
    for (const auto& [root, m] : root_vectors)
      if (root == r) return m;
    throw StructuralError("missing root vector for " + root_string(r));
  };

  typename LieAlgebra<Scalar>::Data data;
  data.family = family;
  data.rank = rank;
  for (const auto& r : positive) data.basis.push_back(find_vector(r));
  for (const auto& r : positive) data.basis.push_back(find_vector(negated(r)));
  for (const auto& h : cartan) {
    data.cartan_indices.push_back(static_cast<Eigen::Index>(data.basis.size()));
    data.basis.push_back(h);
  }
  data.dimension = static_cast<Eigen::Index>(data.basis.size());
  if (data.dimension != classical_dimension(family, rank))
    throw StructuralError("realized dimension does not match the classical formula");
  data.simple_root_values = simple_values;

  // Structure constants from matrix commutators.
  LieAlgebra<Scalar> shell([&] {
    typename LieAlgebra<Scalar>::Data d = data;
    d.table.assign(static_cast<std::size_t>(d.dimension * d.dimension), {});
    return d;
  }());
  data.table.assign(static_cast<std::size_t>(data.dimension * data.dimension), {});
  for (Eigen::Index i = 0; i < data.dimension; ++i)
    for (Eigen::Index j = 0; j < data.dimension; ++j) {
      const Matrix& xi = data.basis[static_cast<std::size_t>(i)];
      const Matrix& xj = data.basis[static_cast<std::size_t>(j)];
      const VectorX<Scalar> c = shell.coordinates(xi * xj - xj * xi);
      auto& entry = data.table[static_cast<std::size_t>(i * data.dimension + j)];
      for (Eigen::Index k = 0; k < data.dimension; ++k)
        if (!is_zero(c(k))) entry.emplace_back(k, c(k));
    }
  return LieAlgebra<Scalar>(std::move(data));
}

/// Root system data read off from the adjoint action of the Cartan subalgebra.
struct RootDatum {
  std::vector<RootVector> roots;                                  // one per root, basis order
  std::map<RootVector, std::vector<Eigen::Index>> root_space_basis;
  std::vector<RootVector> simple_roots;
  std::vector<RootVector> positive_roots;
  std::vector<int> root_of_basis;  // index into `roots`, -1 for Cartan basis elements
  RootVector highest_root;

  int index_of(const RootVector& r) const {
    auto it = std::find(roots.begin(), roots.end(), r);
    return it == roots.end() ? -1 : static_cast<int>(it - roots.begin());
  }
  bool is_root(const RootVector& r) const { return index_of(r) >= 0; }
};

template <typename Scalar>
RootDatum root_decomposition(const LieAlgebra<Scalar>& a) {
  const int rank = a.rank();
  const auto& cartan = a.cartan_indices();
  if (static_cast<int>(cartan.size()) != rank) throw StructuralError("Cartan basis size differs from rank");
  if (a.simple_root_values().rows() != rank) throw PreconditionError("algebra carries no simple-root data");

  for (auto hi : cartan)
    for (auto hj : cartan)
      if (!a.structure(hi, hj).empty()) throw StructuralError("Cartan subalgebra is not abelian");

  RootDatum rd;
  rd.root_of_basis.assign(static_cast<std::size_t>(a.dimension()), -1);
  const MatrixX<Scalar> st = a.simple_root_values().transpose();
  for (Eigen::Index b = 0; b < a.dimension(); ++b) {
    if (std::find(cartan.begin(), cartan.end(), b) != cartan.end()) continue;
    VectorX<Scalar> lambda(rank);
    for (int m = 0; m < rank; ++m) {
      const auto& image = a.structure(cartan[static_cast<std::size_t>(m)], b);
      Scalar eig(0);
      for (const auto& [k, v] : image) {
        if (k != b) throw StructuralError("basis element " + std::to_string(b) + " is not an ad-eigenvector");
        eig = v;
      }
      lambda(m) = eig;
    }
    auto coeffs = solve<Scalar>(st, lambda);
    if (!coeffs) throw StructuralError("eigenvalue vector outside the simple-root span");
    RootVector r(static_cast<std::size_t>(rank));
    for (int j = 0; j < rank; ++j) {
      if (!is_integer((*coeffs)(j))) throw StructuralError("non-integral root coefficient");
      r[static_cast<std::size_t>(j)] = static_cast<int>(to_int64((*coeffs)(j)));
    }
    if (std::all_of(r.begin(), r.end(), [](int c) { return c == 0; }))
      throw StructuralError("non-Cartan basis element with zero weight");
    int idx = rd.index_of(r);
    if (idx < 0) {
      idx = static_cast<int>(rd.roots.size());
      rd.roots.push_back(r);
    }
    rd.root_space_basis[r].push_back(b);
    rd.root_of_basis[static_cast<std::size_t>(b)] = idx;
  }

  for (const auto& r : rd.roots) {
    const bool nonneg = std::all_of(r.begin(), r.end(), [](int c) { return c >= 0; });
    const bool nonpos = std::all_of(r.begin(), r.end(), [](int c) { return c <= 0; });
    if (!nonneg && !nonpos) throw StructuralError("root " + root_string(r) + " has mixed-sign coefficients");
    if (!rd.is_root(negated(r))) throw StructuralError("root " + root_string(r) + " has no negative");
    if (nonneg) rd.positive_roots.push_back(r);
  }
  std::sort(rd.positive_roots.begin(), rd.positive_roots.end(), detail::root_order);
  for (int j = 0; j < rank; ++j) {
    RootVector s(static_cast<std::size_t>(rank), 0);
    s[static_cast<std::size_t>(j)] = 1;
    if (!rd.is_root(s)) throw StructuralError("simple root missing from the root system");
    rd.simple_roots.push_back(s);
  }
  rd.highest_root = rd.positive_roots.back();
  for (const auto& r : rd.positive_roots)
    if (root_height(r) == root_height(rd.highest_root) && r != rd.highest_root)
      throw StructuralError("highest root is not unique");
  return rd;
}

/// Exhaustive check of the Lie algebra axioms and the Killing form properties.
template <typename Scalar>
Report verify_structure(const LieAlgebra<Scalar>& a) {
  Report rep;
  rep.title = std::string("structure ") + family_letter(a.family()) + std::to_string(a.rank());
  const Eigen::Index n = a.dimension();
  auto triple = [](Eigen::Index i, Eigen::Index j, Eigen::Index k) {
    std::ostringstream os;
    os << "(" << i << "," << j << "," << k << ")";
    return os.str();
  };

  auto& dim = rep.add("dimension");
  dim.evaluated = 1;
  if (n != classical_dimension(a.family(), a.rank()))
    dim.fail("dimension " + std::to_string(n) + " != " + std::to_string(classical_dimension(a.family(), a.rank())));

  auto& anti = rep.add("antisymmetry");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      ++anti.evaluated;
      if (!anti.passed) continue;
      for (Eigen::Index k = 0; k < n; ++k)
        if (a.structure_constant(i, j, k) != -a.structure_constant(j, i, k)) {
          anti.fail(triple(i, j, k));
          break;
        }
    }

  // [x_i, v] for a sparse v.
  auto bracket_with = [&](Eigen::Index i, const VectorX<Scalar>& v) {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      if (is_zero(v(l))) continue;
      for (const auto& [k, c] : a.structure(i, l)) out(k) += v(l) * c;
    }
    return out;
  };
  auto dense = [&](Eigen::Index i, Eigen::Index j) {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(n);
    for (const auto& [k, c] : a.structure(i, j)) out(k) = c;
    return out;
  };

  auto& jac = rep.add("jacobi");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        ++jac.evaluated;
        if (!jac.passed) continue;
        // [x_i,[x_j,x_k]] - [[x_i,x_j],x_k] - [x_j,[x_i,x_k]]
        VectorX<Scalar> lhs = bracket_with(i, dense(j, k));
        VectorX<Scalar> ij = dense(i, j);
        for (Eigen::Index l = 0; l < n; ++l) {
          if (is_zero(ij(l))) continue;
          for (const auto& [m, c] : a.structure(l, k)) lhs(m) -= ij(l) * c;
        }
        lhs -= bracket_with(j, dense(i, k));
        if (!is_zero_vector(lhs)) jac.fail(triple(i, j, k));
      }

  const auto& g = a.killing_gram();
  auto& sym = rep.add("killing_symmetry");
  sym.evaluated = static_cast<std::size_t>(n * n);
  for (Eigen::Index i = 0; i < n && sym.passed; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (g(i, j) != g(j, i)) {
        sym.fail("(" + std::to_string(i) + "," + std::to_string(j) + ")");
        break;
      }

  auto& inv = rep.add("killing_invariance");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        ++inv.evaluated;
        if (!inv.passed) continue;
        Scalar s(0);
        for (const auto& [l, c] : a.structure(i, j)) s += c * g(l, k);
        for (const auto& [l, c] : a.structure(i, k)) s += c * g(j, l);
        if (!is_zero(s)) inv.fail(triple(i, j, k));
      }

  auto& nondeg = rep.add("killing_nondegeneracy");
  nondeg.evaluated = 1;
  const Scalar det = determinant<Scalar>(g);
  if (is_zero(det)) nondeg.fail("det(killing_gram) = 0");
  else nondeg.note = "det = " + to_string(det);
  return rep;
}

}  // namespace tractor
