#pragma once

// The pre-Courant structure on TM + E + T*M over a chart, where E is the trivial
// bundle with fiber g_0 of a graded algebra. The data are a g_0-valued
// connection 1-form A and a free 3-form H; the metric pairs TM with T*M and
// uses the Killing form on g_0:
//
//   ((X,s,eta), (Y,t,mu)) = <eta,Y> + <mu,X> + B(s,t).

#include "tractor/chartcalc.hpp"
#include "tractor/grading.hpp"
#include "tractor/literal.hpp"

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace tractor {

/// Section of the fiber bundle E: one polynomial per g_0 basis element.
template <typename Scalar>
using FiberSection = std::vector<PolyFn<Scalar>>;

template <typename Scalar>
struct CourantContext {
  std::shared_ptr<const LieAlgebra<Scalar>> algebra;
  GradedDecomposition<Scalar> gd;
  int n = 0;                                   // chart dimension, dim g - dim p
  std::vector<Eigen::Index> e0_basis;          // basis indices of g_0
  MatrixX<Scalar> e0_gram;                     // Killing form restricted to g_0
  std::vector<SparseCoords<Scalar>> e0_table;  // [e_a, e_b] in g_0 coordinates, a * m + b
  ValuedForm<Scalar> connection;               // A, degree 1, g_0-valued
  PolyForm<Scalar> h_form;                     // H, degree 3
  ValuedForm<Scalar> curvature;                // R, degree 2, g_0-valued

  int fiber_dim() const { return static_cast<int>(e0_basis.size()); }
};

template <typename Scalar>
struct Section {
  PolyField<Scalar> vec;
  FiberSection<Scalar> mid;
  PolyForm<Scalar> form;

  friend bool operator==(const Section& a, const Section& b) {
    return a.vec == b.vec && a.mid == b.mid && a.form == b.form;
  }
};

template <typename Scalar>
struct ReducedSection {
  PolyField<Scalar> vec;
  FiberSection<Scalar> mid;

  friend bool operator==(const ReducedSection& a, const ReducedSection& b) { return a.vec == b.vec && a.mid == b.mid; }
};

// ---------------------------------------------------------------------------
// Fiber operations

template <typename Scalar>
FiberSection<Scalar> zero_fiber(const CourantContext<Scalar>& ctx) {
  return FiberSection<Scalar>(static_cast<std::size_t>(ctx.fiber_dim()), PolyFn<Scalar>(ctx.n));
}

/// Constant fiber section with the given g_0 coordinates.
template <typename Scalar>
FiberSection<Scalar> constant_fiber(const CourantContext<Scalar>& ctx, const VectorX<Scalar>& coords) {
  if (coords.size() != ctx.fiber_dim()) throw SizeMismatch("fiber coordinates have the wrong length");
  FiberSection<Scalar> s = zero_fiber(ctx);
  for (int a = 0; a < ctx.fiber_dim(); ++a) s[static_cast<std::size_t>(a)] = PolyFn<Scalar>::constant(ctx.n, coords(a));
  return s;
}

template <typename Scalar>
void check_fiber(const CourantContext<Scalar>& ctx, const FiberSection<Scalar>& s, const char* what) {
  if (static_cast<int>(s.size()) != ctx.fiber_dim())
    throw SizeMismatch(std::string(what) + ": fiber section has " + std::to_string(s.size()) + " components, expected " +
                       std::to_string(ctx.fiber_dim()));
  for (const auto& c : s) check_same_chart(c.chart_dim(), ctx.n, what);
}

template <typename Scalar>
FiberSection<Scalar> fiber_add(FiberSection<Scalar> a, const FiberSection<Scalar>& b, const Scalar& scale = Scalar(1)) {
  if (a.size() != b.size()) throw SizeMismatch("fiber sections of different lengths");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i] * scale;
  return a;
}

template <typename Scalar>
FiberSection<Scalar> fiber_scale(const PolyFn<Scalar>& f, FiberSection<Scalar> a) {
  for (auto& c : a) c = f * c;
  return a;
}

/// Pointwise g_0 bracket [s,t]_E.
template <typename Scalar>
FiberSection<Scalar> fiber_bracket(const CourantContext<Scalar>& ctx, const FiberSection<Scalar>& s,
                                   const FiberSection<Scalar>& t) {
  const int m = ctx.fiber_dim();
  FiberSection<Scalar> out = zero_fiber(ctx);
  for (int a = 0; a < m; ++a) {
    if (s[static_cast<std::size_t>(a)].is_zero()) continue;
    for (int b = 0; b < m; ++b) {
      if (t[static_cast<std::size_t>(b)].is_zero()) continue;
      const auto& entry = ctx.e0_table[static_cast<std::size_t>(a * m + b)];
      if (entry.empty()) continue;
      const PolyFn<Scalar> st = s[static_cast<std::size_t>(a)] * t[static_cast<std::size_t>(b)];
      for (const auto& [c, v] : entry) out[static_cast<std::size_t>(c)] += st * v;
    }
  }
  return out;
}

/// Pointwise fiber metric (s,t)_E.
template <typename Scalar>
PolyFn<Scalar> fiber_pair(const CourantContext<Scalar>& ctx, const FiberSection<Scalar>& s, const FiberSection<Scalar>& t) {
  const int m = ctx.fiber_dim();
  PolyFn<Scalar> out(ctx.n);
  for (int a = 0; a < m; ++a) {
    if (s[static_cast<std::size_t>(a)].is_zero()) continue;
    for (int b = 0; b < m; ++b) {
      const Scalar& g = ctx.e0_gram(a, b);
      if (is_zero(g) || t[static_cast<std::size_t>(b)].is_zero()) continue;
      out += (s[static_cast<std::size_t>(a)] * t[static_cast<std::size_t>(b)]) * g;
    }
  }
  return out;
}

/// 1-form Y -> (w(Y), t)_E for a g_0-valued 1-form w.
template <typename Scalar>
PolyForm<Scalar> fiber_pair(const CourantContext<Scalar>& ctx, const ValuedForm<Scalar>& w, const FiberSection<Scalar>& t) {
  const int m = ctx.fiber_dim();
  PolyForm<Scalar> out(ctx.n, w.degree());
  for (int a = 0; a < m; ++a) {
    if (w[a].is_zero()) continue;
    PolyFn<Scalar> coeff(ctx.n);
    for (int b = 0; b < m; ++b) {
      const Scalar& g = ctx.e0_gram(a, b);
      if (!is_zero(g)) coeff += t[static_cast<std::size_t>(b)] * g;
    }
    if (!coeff.is_zero()) out += coeff * w[a];
  }
  return out;
}

/// X(s), componentwise.
template <typename Scalar>
FiberSection<Scalar> fiber_derivative(const PolyField<Scalar>& x, const FiberSection<Scalar>& s) {
  FiberSection<Scalar> out;
  out.reserve(s.size());
  for (const auto& c : s) out.push_back(x.apply(c));
  return out;
}

/// A(X) as a fiber section.
template <typename Scalar>
FiberSection<Scalar> connection_at(const CourantContext<Scalar>& ctx, const PolyField<Scalar>& x) {
  FiberSection<Scalar> out;
  for (const auto& c : ctx.connection.components()) out.push_back(pair(c, x));
  return out;
}

// ---------------------------------------------------------------------------
// Context construction

template <typename Scalar>
ReducedSection<Scalar> reduced_bracket(const CourantContext<Scalar>& ctx, const ReducedSection<Scalar>& u,
                                       const ReducedSection<Scalar>& v);

/// Curvature from its defining formula R(X,Y) = [gamma X, gamma Y] - gamma [X,Y]
/// with gamma(X) = (X, A(X)), evaluated on coordinate fields.
template <typename Scalar>
ValuedForm<Scalar> curvature(const CourantContext<Scalar>& ctx) {
  const int n = ctx.n;
  const int m = ctx.fiber_dim();
  ValuedForm<Scalar> r(n, 2, m);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const auto xi = PolyField<Scalar>::coordinate(n, i);
      const auto xj = PolyField<Scalar>::coordinate(n, j);
      const ReducedSection<Scalar> gi{xi, connection_at(ctx, xi)};
      const ReducedSection<Scalar> gj{xj, connection_at(ctx, xj)};
      const auto br = reduced_bracket(ctx, gi, gj);
      const auto commutator = lie_bracket(xi, xj);
      if (!(br.vec == commutator)) throw StructuralError("anchor of the reduced bracket is not the vector field bracket");
      const auto value = fiber_add(br.mid, connection_at(ctx, commutator), Scalar(-1));
      const FormIndex mask = (FormIndex{1} << i) | (FormIndex{1} << j);
      for (int a = 0; a < m; ++a) r[a].add_term(mask, value[static_cast<std::size_t>(a)]);
    }
  return r;
}

/// dA + 1/2 [A ^ A], the structure-equation route to the curvature.
template <typename Scalar>
ValuedForm<Scalar> curvature_from_structure_equation(const CourantContext<Scalar>& ctx) {
  const int m = ctx.fiber_dim();
  ValuedForm<Scalar> r = d(ctx.connection);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const auto& entry = ctx.e0_table[static_cast<std::size_t>(a * m + b)];
      if (entry.empty()) continue;
      const PolyForm<Scalar> ab = wedge(ctx.connection[a], ctx.connection[b]);
      if (ab.is_zero()) continue;
      for (const auto& [c, v] : entry) r[static_cast<int>(c)] += ab * (v / Scalar(2));
    }
  return r;
}

template <typename Scalar>
CourantContext<Scalar> make_context(std::shared_ptr<const LieAlgebra<Scalar>> algebra, GradedDecomposition<Scalar> gd,
                                    ValuedForm<Scalar> connection, PolyForm<Scalar> h_form) {
  if (!algebra) throw PreconditionError("make_context: null algebra");
  const auto& a = *algebra;
  CourantContext<Scalar> ctx;
  ctx.n = static_cast<int>(gd.negative_part().size());
  const auto parabolic_dim = static_cast<Eigen::Index>(gd.parabolic().size());
  if (ctx.n != a.dimension() - parabolic_dim) throw SizeMismatch("grading does not partition the algebra");
  check_chart_dim(ctx.n);
  ctx.e0_basis = gd.component(0);
  const int m = ctx.fiber_dim();

  ctx.e0_gram = gram_block(a, ctx.e0_basis, ctx.e0_basis);
  if (ctx.e0_gram != ctx.e0_gram.transpose()) throw StructuralError("Killing form on g_0 is not symmetric");
  if (tractor::rank<Scalar>(ctx.e0_gram) != m) throw StructuralError("Killing form on g_0 is degenerate");

  std::vector<Eigen::Index> local(static_cast<std::size_t>(a.dimension()), -1);
  for (int i = 0; i < m; ++i) local[static_cast<std::size_t>(ctx.e0_basis[static_cast<std::size_t>(i)])] = i;
  ctx.e0_table.assign(static_cast<std::size_t>(m * m), {});
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (const auto& [k, v] : a.structure(ctx.e0_basis[static_cast<std::size_t>(i)], ctx.e0_basis[static_cast<std::size_t>(j)])) {
        const Eigen::Index lk = local[static_cast<std::size_t>(k)];
        if (lk < 0) throw StructuralError("g_0 is not closed under the bracket");
        ctx.e0_table[static_cast<std::size_t>(i * m + j)].emplace_back(lk, v);
      }

  if (connection.degree() != 1 || connection.chart_dim() != ctx.n || connection.value_dim() != m)
    throw SizeMismatch("connection must be a g_0-valued 1-form on a chart of dimension " + std::to_string(ctx.n) +
                       " with " + std::to_string(m) + " components");
  if (h_form.degree() != 3) throw SizeMismatch("h_form must be a 3-form, got degree " + std::to_string(h_form.degree()));
  if (h_form.chart_dim() != ctx.n) throw SizeMismatch("h_form lives on the wrong chart dimension");

  ctx.algebra = std::move(algebra);
  ctx.gd = std::move(gd);
  ctx.connection = std::move(connection);
  ctx.h_form = std::move(h_form);
  ctx.curvature = curvature(ctx);
  return ctx;
}

/// Context with A = 0 and H = 0.
template <typename Scalar>
CourantContext<Scalar> make_flat_context(std::shared_ptr<const LieAlgebra<Scalar>> algebra, GradedDecomposition<Scalar> gd) {
  const int n = static_cast<int>(gd.negative_part().size());
  const int m = static_cast<int>(gd.component(0).size());
  return make_context(std::move(algebra), std::move(gd), ValuedForm<Scalar>(n, 1, m), PolyForm<Scalar>(n, 3));
}

/// Same context with different connection and 3-form; the curvature is recomputed.
template <typename Scalar>
CourantContext<Scalar> with_data(const CourantContext<Scalar>& ctx, ValuedForm<Scalar> connection, PolyForm<Scalar> h_form) {
  return make_context(ctx.algebra, ctx.gd, std::move(connection), std::move(h_form));
}

// ---------------------------------------------------------------------------
// Sections

template <typename Scalar>
Section<Scalar> zero_section(const CourantContext<Scalar>& ctx) {
  return Section<Scalar>{PolyField<Scalar>(ctx.n), zero_fiber(ctx), PolyForm<Scalar>(ctx.n, 1)};
}

template <typename Scalar>
Section<Scalar> vector_section(const CourantContext<Scalar>& ctx, PolyField<Scalar> x) {
  auto e = zero_section(ctx);
  e.vec = std::move(x);
  return e;
}

template <typename Scalar>
Section<Scalar> fiber_section(const CourantContext<Scalar>& ctx, FiberSection<Scalar> s) {
  auto e = zero_section(ctx);
  e.mid = std::move(s);
  return e;
}

template <typename Scalar>
Section<Scalar> form_section(const CourantContext<Scalar>& ctx, PolyForm<Scalar> eta) {
  auto e = zero_section(ctx);
  e.form = std::move(eta);
  return e;
}

template <typename Scalar>
void check_section(const CourantContext<Scalar>& ctx, const Section<Scalar>& e, const char* what) {
  check_same_chart(e.vec.chart_dim(), ctx.n, what);
  check_fiber(ctx, e.mid, what);
  check_same_chart(e.form.chart_dim(), ctx.n, what);
  if (e.form.degree() != 1) throw SizeMismatch(std::string(what) + ": cotangent part must be a 1-form");
}

template <typename Scalar>
Section<Scalar> operator+(const Section<Scalar>& a, const Section<Scalar>& b) {
  return Section<Scalar>{a.vec + b.vec, fiber_add(a.mid, b.mid), a.form + b.form};
}

template <typename Scalar>
Section<Scalar> operator-(const Section<Scalar>& a, const Section<Scalar>& b) {
  return Section<Scalar>{a.vec - b.vec, fiber_add(a.mid, b.mid, Scalar(-1)), a.form - b.form};
}

template <typename Scalar>
Section<Scalar> operator*(const Scalar& c, const Section<Scalar>& a) {
  return Section<Scalar>{a.vec * c, fiber_scale(PolyFn<Scalar>::constant(a.vec.chart_dim(), c), a.mid), a.form * c};
}

template <typename Scalar>
Section<Scalar> operator*(const PolyFn<Scalar>& f, const Section<Scalar>& a) {
  return Section<Scalar>{f * a.vec, fiber_scale(f, a.mid), f * a.form};
}

template <typename Scalar>
bool is_zero(const Section<Scalar>& e) {
  return e.vec.is_zero() && e.form.is_zero() &&
         std::all_of(e.mid.begin(), e.mid.end(), [](const auto& c) { return c.is_zero(); });
}

template <typename Scalar>
const PolyField<Scalar>& anchor(const Section<Scalar>& e) {
  return e.vec;
}

/// ((X,s,eta),(Y,t,mu)) = <eta,Y> + <mu,X> + (s,t)_E.
template <typename Scalar>
PolyFn<Scalar> pairing(const CourantContext<Scalar>& ctx, const Section<Scalar>& a, const Section<Scalar>& b) {
  return pair(a.form, b.vec) + pair(b.form, a.vec) + fiber_pair(ctx, a.mid, b.mid);
}

template <typename Scalar>
std::string to_string(const CourantContext<Scalar>& ctx, const Section<Scalar>& e) {
  std::string mid;
  for (int a = 0; a < ctx.fiber_dim(); ++a) {
    if (e.mid[static_cast<std::size_t>(a)].is_zero()) continue;
    if (!mid.empty()) mid += ", ";
    mid += "e" + std::to_string(a) + ": " + to_string(e.mid[static_cast<std::size_t>(a)]);
  }
  return "(vec: " + to_string(e.vec) + "; mid: {" + mid + "}; form: " + to_string(e.form) + ")";
}

// ---------------------------------------------------------------------------
// Brackets

/// Atiyah-algebroid bracket [(X,s),(Y,t)] = ([X,Y], X(t) - Y(s) + [s,t]).
template <typename Scalar>
ReducedSection<Scalar> reduced_bracket(const CourantContext<Scalar>& ctx, const ReducedSection<Scalar>& u,
                                       const ReducedSection<Scalar>& v) {
  check_same_chart(u.vec.chart_dim(), ctx.n, "reduced_bracket");
  check_same_chart(v.vec.chart_dim(), ctx.n, "reduced_bracket");
  check_fiber(ctx, u.mid, "reduced_bracket");
  check_fiber(ctx, v.mid, "reduced_bracket");
  FiberSection<Scalar> mid = fiber_derivative(u.vec, v.mid);
  mid = fiber_add(mid, fiber_derivative(v.vec, u.mid), Scalar(-1));
  mid = fiber_add(mid, fiber_bracket(ctx, u.mid, v.mid));
  return ReducedSection<Scalar>{lie_bracket(u.vec, v.vec), std::move(mid)};
}

/// nabla_X s = X(s) + [A(X), s].
template <typename Scalar>
FiberSection<Scalar> nabla(const CourantContext<Scalar>& ctx, const PolyField<Scalar>& x, const FiberSection<Scalar>& s) {
  check_same_chart(x.chart_dim(), ctx.n, "nabla");
  check_fiber(ctx, s, "nabla");
  return fiber_add(fiber_derivative(x, s), fiber_bracket(ctx, connection_at(ctx, x), s));
}

/// R(X, Y) from the stored curvature form.
template <typename Scalar>
FiberSection<Scalar> curvature_at(const CourantContext<Scalar>& ctx, const PolyField<Scalar>& x, const PolyField<Scalar>& y) {
  return evaluate(ctx.curvature, {x, y});
}

/// 1-form Y -> (nabla_Y s, t)_E.
template <typename Scalar>
PolyForm<Scalar> nabla_pairing_form(const CourantContext<Scalar>& ctx, const FiberSection<Scalar>& s,
                                    const FiberSection<Scalar>& t) {
  PolyForm<Scalar> out(ctx.n, 1);
  for (int i = 0; i < ctx.n; ++i) {
    const PolyFn<Scalar> c = fiber_pair(ctx, nabla(ctx, PolyField<Scalar>::coordinate(ctx.n, i), s), t);
    out.add_term(FormIndex{1} << i, c);
  }
  return out;
}

/// The bracket on TM + E + T*M, extended from the pure-type formulas by
/// bilinearity:
///   [X1,X2] = [X1,X2] + R(X1,X2) + H(X1,X2,-)
///   [X1,s2] = nabla_{X1} s2 - (R(X1,-), s2) = -[s2,X1]
///   [s1,s2] = [s1,s2]_E + (nabla_- s1, s2)
///   [X1,eta2] = L_{X1} eta2,  [eta1,X2] = -L_{X2} eta1 + d<eta1,X2>
/// and every bracket with a 1-form against E or T*M vanishes.
template <typename Scalar>
Section<Scalar> courant_bracket(const CourantContext<Scalar>& ctx, const Section<Scalar>& e1, const Section<Scalar>& e2) {
  check_section(ctx, e1, "courant_bracket");
  check_section(ctx, e2, "courant_bracket");
  const auto& x1 = e1.vec;
  const auto& x2 = e2.vec;
  const auto& s1 = e1.mid;
  const auto& s2 = e2.mid;

  Section<Scalar> out = zero_section(ctx);
  out.vec = lie_bracket(x1, x2);

  // E component
  FiberSection<Scalar> mid = curvature_at(ctx, x1, x2);
  mid = fiber_add(mid, nabla(ctx, x1, s2));
  mid = fiber_add(mid, nabla(ctx, x2, s1), Scalar(-1));
  mid = fiber_add(mid, fiber_bracket(ctx, s1, s2));
  out.mid = std::move(mid);

  // T*M component
  PolyForm<Scalar> form(ctx.n, 1);
  if (ctx.n >= 3 && !x1.is_zero() && !x2.is_zero()) form += interior(x2, interior(x1, ctx.h_form));
  if (!x1.is_zero()) form -= fiber_pair(ctx, interior(x1, ctx.curvature), s2);
  if (!x2.is_zero()) form += fiber_pair(ctx, interior(x2, ctx.curvature), s1);
  form += nabla_pairing_form(ctx, s1, s2);
  form += lie_derivative(x1, e2.form);
  form -= lie_derivative(x2, e1.form);
  form += d(pair(e1.form, x2));
  out.form = std::move(form);
  return out;
}

/// d f placed in T*M, so that (del f, e) = anchor(e) f.
template <typename Scalar>
Section<Scalar> del(const CourantContext<Scalar>& ctx, const PolyFn<Scalar>& f) {
  check_same_chart(f.chart_dim(), ctx.n, "del");
  return form_section(ctx, d(f));
}

/// Skew-symmetrization 1/2([e1,e2] - [e2,e1]).
template <typename Scalar>
Section<Scalar> skew_bracket(const CourantContext<Scalar>& ctx, const Section<Scalar>& e1, const Section<Scalar>& e2) {
  return Scalar(1, 2) * (courant_bracket(ctx, e1, e2) - courant_bracket(ctx, e2, e1));
}

/// J = [e1,[e2,e3]] - [[e1,e2],e3] - [e2,[e1,e3]].
template <typename Scalar>
Section<Scalar> jacobiator(const CourantContext<Scalar>& ctx, const Section<Scalar>& e1, const Section<Scalar>& e2,
                           const Section<Scalar>& e3) {
  const Section<Scalar> j = courant_bracket(ctx, e1, courant_bracket(ctx, e2, e3)) -
                            courant_bracket(ctx, courant_bracket(ctx, e1, e2), e3) -
                            courant_bracket(ctx, e2, courant_bracket(ctx, e1, e3));
  return j;
}

/// 4-form with components 1/4 sum_{tau in S4} sgn(tau) (R_{tau1 tau2}, R_{tau3 tau4})_E.
template <typename Scalar>
PolyForm<Scalar> pontrjagin_form(const CourantContext<Scalar>& ctx) {
  const int n = ctx.n;
  PolyForm<Scalar> out(n, 4);
  if (n < 4) return out;
  // R on coordinate pairs
  std::vector<std::vector<FiberSection<Scalar>>> r(static_cast<std::size_t>(n), std::vector<FiberSection<Scalar>>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          curvature_at(ctx, PolyField<Scalar>::coordinate(n, i), PolyField<Scalar>::coordinate(n, j));

  std::array<int, 4> perm{0, 1, 2, 3};
  std::vector<std::pair<std::array<int, 4>, int>> perms;
  do {
    int inversions = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b)
        if (perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)]) ++inversions;
    perms.emplace_back(perm, inversions % 2 ? -1 : 1);
  } while (std::next_permutation(perm.begin(), perm.end()));

  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = i0 + 1; i1 < n; ++i1)
      for (int i2 = i1 + 1; i2 < n; ++i2)
        for (int i3 = i2 + 1; i3 < n; ++i3) {
          const std::array<int, 4> idx{i0, i1, i2, i3};
          PolyFn<Scalar> sum(n);
          for (const auto& [p, sign] : perms) {
            const auto& ra = r[static_cast<std::size_t>(idx[static_cast<std::size_t>(p[0])])][static_cast<std::size_t>(idx[static_cast<std::size_t>(p[1])])];
            const auto& rb = r[static_cast<std::size_t>(idx[static_cast<std::size_t>(p[2])])][static_cast<std::size_t>(idx[static_cast<std::size_t>(p[3])])];
            const PolyFn<Scalar> term = fiber_pair(ctx, ra, rb);
            if (sign > 0) sum += term;
            else sum -= term;
          }
          const FormIndex mask = (FormIndex{1} << i0) | (FormIndex{1} << i1) | (FormIndex{1} << i2) | (FormIndex{1} << i3);
          out.add_term(mask, sum * Scalar(1, 4));
        }
  return out;
}

/// H4 = dH - 1/2 <R ^ R>.
template <typename Scalar>
PolyForm<Scalar> h4_form(const CourantContext<Scalar>& ctx) {
  PolyForm<Scalar> dh = d(ctx.h_form);
  if (dh.degree() != 4) throw StructuralError("dH has the wrong degree");
  return dh - pontrjagin_form(ctx) * Scalar(1, 2);
}

/// 3-form whose differential cancels the Pontrjagin term: primitive of 1/2 <R ^ R>.
template <typename Scalar>
PolyForm<Scalar> untwisting_h_form(const CourantContext<Scalar>& ctx) {
  if (ctx.n < 4) return PolyForm<Scalar>(ctx.n, 3);
  return poincare_primitive(pontrjagin_form(ctx) * Scalar(1, 2));
}

/// Sign relating the Jacobiator to H4: J(e1,e2,e3) = sign * H4(a e1, a e2, a e3, -).
inline constexpr int kJacobiatorTwistSign = 1;

/// H4(X1, X2, X3, -) as a 1-form.
template <typename Scalar>
PolyForm<Scalar> h4_contraction(const PolyForm<Scalar>& h4, const PolyField<Scalar>& x1, const PolyField<Scalar>& x2,
                                const PolyField<Scalar>& x3) {
  if (h4.chart_dim() < 4) return PolyForm<Scalar>(h4.chart_dim(), 1);
  return interior(x3, interior(x2, interior(x1, h4)));
}

// ---------------------------------------------------------------------------
// Isotropic splitting

/// gamma0(X) = (X, g(X), beta(X)) with <beta(X), Y> = -1/2 (g(X), g(Y))_E.
template <typename Scalar>
struct IsotropicSplitting {
  ValuedForm<Scalar> gamma_mid;
  std::vector<std::vector<PolyFn<Scalar>>> beta;  // beta[i][j] = <beta(d_i), d_j>

  Section<Scalar> apply(const CourantContext<Scalar>& ctx, const PolyField<Scalar>& x) const {
    Section<Scalar> e = vector_section(ctx, x);
    for (int a = 0; a < gamma_mid.value_dim(); ++a) e.mid[static_cast<std::size_t>(a)] = pair(gamma_mid[a], x);
    for (int i = 0; i < ctx.n; ++i) {
      if (x[i].is_zero()) continue;
      for (int j = 0; j < ctx.n; ++j)
        e.form.add_term(FormIndex{1} << j, x[i] * beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return e;
  }
};

template <typename Scalar>
IsotropicSplitting<Scalar> isotropize(const CourantContext<Scalar>& ctx, const ValuedForm<Scalar>& gamma_mid) {
  if (gamma_mid.degree() != 1 || gamma_mid.value_dim() != ctx.fiber_dim() || gamma_mid.chart_dim() != ctx.n)
    throw SizeMismatch("gamma_mid must be a g_0-valued 1-form on the context chart");
  IsotropicSplitting<Scalar> out{gamma_mid, {}};
  std::vector<FiberSection<Scalar>> g;
  for (int i = 0; i < ctx.n; ++i) {
    FiberSection<Scalar> gi;
    for (int a = 0; a < ctx.fiber_dim(); ++a) gi.push_back(gamma_mid[a].coefficient(FormIndex{1} << i));
    g.push_back(std::move(gi));
  }
  out.beta.assign(static_cast<std::size_t>(ctx.n), std::vector<PolyFn<Scalar>>(static_cast<std::size_t>(ctx.n), PolyFn<Scalar>(ctx.n)));
  for (int i = 0; i < ctx.n; ++i)
    for (int j = 0; j < ctx.n; ++j)
      out.beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          fiber_pair(ctx, g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]) * Scalar(-1, 2);
  for (int i = 0; i < ctx.n; ++i)
    for (int j = i; j < ctx.n; ++j) {
      const auto xi = PolyField<Scalar>::coordinate(ctx.n, i);
      const auto xj = PolyField<Scalar>::coordinate(ctx.n, j);
      if (!pairing(ctx, out.apply(ctx, xi), out.apply(ctx, xj)).is_zero())
        throw StructuralError("isotropized splitting is not isotropic");
    }
  return out;
}

}  // namespace tractor
