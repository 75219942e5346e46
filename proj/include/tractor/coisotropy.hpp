#pragma once

// Subspaces of a Lie algebra, their Killing-orthogonal complements, and the
// sweep comparing coisotropy with parabolicity over root subalgebras.

#include "tractor/grading.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tractor {

/// Span of a set of elements of a fixed algebra. The algebra must outlive it.
template <typename Scalar>
class Subspace {
 public:
  Subspace(const LieAlgebra<Scalar>& owner, MatrixX<Scalar> generator_rows)
      : owner_(&owner), generators_(std::move(generator_rows)) {
    if (generators_.rows() > 0 && generators_.cols() != owner.dimension())
      throw SizeMismatch("subspace generators must have one coordinate per basis element");
    if (generators_.rows() == 0) generators_.resize(0, owner.dimension());
    basis_ = row_space<Scalar>(generators_);
  }

  static Subspace from_elements(const LieAlgebra<Scalar>& owner, const std::vector<VectorX<Scalar>>& elements) {
    MatrixX<Scalar> rows(static_cast<Eigen::Index>(elements.size()), owner.dimension());
    for (std::size_t r = 0; r < elements.size(); ++r) {
      owner.check_size(elements[r], "subspace generator");
      rows.row(static_cast<Eigen::Index>(r)) = elements[r].transpose();
    }
    return Subspace(owner, std::move(rows));
  }

  static Subspace from_basis_indices(const LieAlgebra<Scalar>& owner, const std::vector<Eigen::Index>& idx) {
    return Subspace(owner, detail::rows_of<Scalar>(owner.dimension(), idx));
  }

  static Subspace whole(const LieAlgebra<Scalar>& owner) {
    return Subspace(owner, MatrixX<Scalar>::Identity(owner.dimension(), owner.dimension()));
  }

  static Subspace zero(const LieAlgebra<Scalar>& owner) { return Subspace(owner, MatrixX<Scalar>(0, owner.dimension())); }

  const LieAlgebra<Scalar>& owner() const { return *owner_; }
  const MatrixX<Scalar>& generators() const { return generators_; }
  /// Reduced row echelon basis, one row per basis vector.
  const MatrixX<Scalar>& basis() const { return basis_; }
  Eigen::Index dim() const { return basis_.rows(); }

  bool contains(const VectorX<Scalar>& x) const {
    owner_->check_size(x, "subspace membership");
    return rows_in_span<Scalar>(MatrixX<Scalar>(x.transpose()), basis_);
  }

  bool contains(const Subspace& other) const { return rows_in_span<Scalar>(other.basis_, basis_); }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.owner_ == b.owner_ && a.basis_ == b.basis_;  // reduced echelon form is canonical
  }

 private:
  const LieAlgebra<Scalar>* owner_;
  MatrixX<Scalar> generators_;
  MatrixX<Scalar> basis_;
};

/// {x : B(s, x) = 0 for all s in the subspace}.
template <typename Scalar>
Subspace<Scalar> orth_complement(const Subspace<Scalar>& s) {
  const auto& a = s.owner();
  if (s.dim() == 0) return Subspace<Scalar>::whole(a);
  const MatrixX<Scalar> pairing = s.basis() * a.killing_gram();
  return Subspace<Scalar>(a, null_space<Scalar>(pairing).transpose());
}

template <typename Scalar>
bool is_subalgebra(const Subspace<Scalar>& s) {
  const auto& b = s.basis();
  for (Eigen::Index i = 0; i < b.rows(); ++i)
    for (Eigen::Index j = i + 1; j < b.rows(); ++j) {
      VectorX<Scalar> c = bracket(s.owner(), VectorX<Scalar>(b.row(i).transpose()), VectorX<Scalar>(b.row(j).transpose()));
      if (!s.contains(c)) return false;
    }
  return true;
}

template <typename Scalar>
bool is_coisotropic(const Subspace<Scalar>& s) {
  return s.contains(orth_complement(s));
}

/// Cartan subalgebra plus the root spaces of a subset of the roots.
struct RootSubalgebraDescriptor {
  std::vector<int> root_subset;  // indices into RootDatum::roots, ascending
  bool contains_cartan = true;
  bool closed = false;
};

/// Additive closure of a root subset within the root system.
inline bool is_closed_root_subset(const RootDatum& rd, const std::vector<int>& subset) {
  std::vector<bool> in(rd.roots.size(), false);
  for (int i : subset) in[static_cast<std::size_t>(i)] = true;
  for (int i : subset)
    for (int j : subset) {
      RootVector sum = rd.roots[static_cast<std::size_t>(i)];
      const auto& other = rd.roots[static_cast<std::size_t>(j)];
      for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += other[c];
      const int idx = rd.index_of(sum);
      if (idx >= 0 && !in[static_cast<std::size_t>(idx)]) return false;
    }
  return true;
}

inline RootSubalgebraDescriptor make_descriptor(const RootDatum& rd, std::vector<int> subset) {
  std::sort(subset.begin(), subset.end());
  RootSubalgebraDescriptor d;
  d.root_subset = std::move(subset);
  d.closed = is_closed_root_subset(rd, d.root_subset);
  return d;
}

/// For closed root subsets containing the Cartan: parabolic iff R u -R covers every root.
inline bool is_parabolic_root_subalgebra(const RootDatum& rd, const RootSubalgebraDescriptor& d) {
  if (!d.closed) throw PreconditionError("root subset is not closed, so it does not describe a subalgebra");
  std::vector<bool> covered(rd.roots.size(), false);
  for (int i : d.root_subset) {
    covered[static_cast<std::size_t>(i)] = true;
    covered[static_cast<std::size_t>(rd.index_of(negated(rd.roots[static_cast<std::size_t>(i)])))] = true;
  }
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

template <typename Scalar>
Subspace<Scalar> root_subalgebra_subspace(const LieAlgebra<Scalar>& a, const RootDatum& rd,
                                          const RootSubalgebraDescriptor& d) {
  std::vector<Eigen::Index> idx = a.cartan_indices();
  for (int r : d.root_subset) {
    const auto& space = rd.root_space_basis.at(rd.roots[static_cast<std::size_t>(r)]);
    idx.insert(idx.end(), space.begin(), space.end());
  }
  return Subspace<Scalar>::from_basis_indices(a, idx);
}

struct SweepEntry {
  RootSubalgebraDescriptor descriptor;
  bool is_subalgebra = false;
  bool is_coisotropic = false;
  bool is_parabolic = false;
};

struct SweepResult {
  std::size_t root_count = 0;
  std::vector<SweepEntry> entries;  // one per subset, in bitmask order
  std::vector<SweepEntry> counterexamples;

  std::size_t count_closed() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const SweepEntry& e) { return e.descriptor.closed; }));
  }
  std::size_t count_coisotropic() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                  [](const SweepEntry& e) { return e.descriptor.closed && e.is_coisotropic; }));
  }
  std::size_t count_parabolic() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(),
                                                  [](const SweepEntry& e) { return e.descriptor.closed && e.is_parabolic; }));
  }
};

inline constexpr std::size_t kDefaultSweepCap = 12;

class SweepCapExceeded : public UnsupportedInput {
 public:
  SweepCapExceeded(std::size_t roots, std::size_t cap)
      : UnsupportedInput("root system has " + std::to_string(roots) + " roots, over the enumeration cap of " +
                         std::to_string(cap)),
        cap_(cap) {}
  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// Enumerates every subset of the roots. Closed subsets get both predicates;
/// a disagreement between them is recorded as a counterexample. Subsets that are
/// not closed are cross-checked against `is_subalgebra` as well.
template <typename Scalar>
SweepResult sweep_root_subalgebras(const LieAlgebra<Scalar>& a, std::size_t cap = kDefaultSweepCap) {
  const RootDatum rd = root_decomposition(a);
  const std::size_t m = rd.roots.size();
  if (m > cap) throw SweepCapExceeded(m, cap);
  SweepResult out;
  out.root_count = m;
  const std::uint64_t total = std::uint64_t{1} << m;
  out.entries.reserve(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<int> subset;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::uint64_t{1} << i)) subset.push_back(static_cast<int>(i));
    SweepEntry e;
    e.descriptor = make_descriptor(rd, std::move(subset));
    const auto space = root_subalgebra_subspace(a, rd, e.descriptor);
    e.is_subalgebra = is_subalgebra(space);
    if (e.descriptor.closed) {
      e.is_coisotropic = is_coisotropic(space);
      e.is_parabolic = is_parabolic_root_subalgebra(rd, e.descriptor);
    }
    const bool disagree = (e.is_subalgebra != e.descriptor.closed) ||
                          (e.descriptor.closed && e.is_coisotropic != e.is_parabolic);
    if (disagree) out.counterexamples.push_back(e);
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace tractor
