#pragma once

// Exterior calculus with polynomial coefficients on a chart R^n.
//
// Conventions: dx_I always carries strictly increasing indices (stored as a
// bitmask), wedge signs come from sorting transpositions, and the interior
// product contracts the first slot, so w(X1, ..., Xk) = i_{Xk} ... i_{X1} w.

#include "tractor/errors.hpp"
#include "tractor/scalar.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tractor {

inline constexpr int kMaxChartDim = 16;

/// Exponent vector of x_1^a_1 ... x_n^a_n (unused trailing slots are zero).
using Monomial = std::array<std::uint8_t, kMaxChartDim>;

/// Strictly increasing index set of dx_I, bit i set for dx_{i+1}.
using FormIndex = std::uint32_t;

inline int monomial_degree(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

inline void check_chart_dim(int n) {
  if (n < 0 || n > kMaxChartDim)
    throw UnsupportedInput("chart dimension " + std::to_string(n) + " outside [0, " + std::to_string(kMaxChartDim) + "]");
}

inline void check_same_chart(int a, int b, const char* what) {
  if (a != b)
    throw SizeMismatch(std::string(what) + ": chart dimensions " + std::to_string(a) + " and " + std::to_string(b) +
                       " differ");
}

inline std::vector<int> form_indices(FormIndex mask) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (mask & (FormIndex{1} << i)) out.push_back(i);
  return out;
}

/// Sign of dx_I ^ dx_J relative to dx_{I u J}; zero when I and J overlap.
inline int wedge_sign(FormIndex a, FormIndex b) {
  if (a & b) return 0;
  int inversions = 0;
  for (FormIndex rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(a >> (j + 1));
  }
  return (inversions % 2) ? -1 : 1;
}

/// Polynomial in x_1..x_n with exact coefficients, kept in canonical sparse form.
template <typename Scalar>
class PolyFn {
 public:
  using Terms = std::map<Monomial, Scalar>;

  explicit PolyFn(int n = 0) : n_(n) { check_chart_dim(n); }

  static PolyFn constant(int n, const Scalar& c) {
    PolyFn p(n);
    p.add_term(Monomial{}, c);
    return p;
  }

  /// The coordinate function x_{i+1} (0-based i).
  static PolyFn coordinate(int n, int i) {
    if (i < 0 || i >= n) throw SizeMismatch("coordinate index out of range");
    Monomial m{};
    m[static_cast<std::size_t>(i)] = 1;
    PolyFn p(n);
    p.add_term(m, Scalar(1));
    return p;
  }

  static PolyFn monomial(int n, const Monomial& m, const Scalar& c) {
    PolyFn p(n);
    p.add_term(m, c);
    return p;
  }

  int chart_dim() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Total degree; -1 for the zero polynomial.
  int degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, monomial_degree(m));
    return d;
  }

  Scalar coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void add_term(const Monomial& m, const Scalar& c) {
    if (tractor::is_zero(c)) return;
    for (int i = n_; i < kMaxChartDim; ++i)
      if (m[static_cast<std::size_t>(i)] != 0) throw SizeMismatch("monomial uses a variable beyond the chart");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (tractor::is_zero(it->second)) terms_.erase(it);
    }
  }

  PolyFn& operator+=(const PolyFn& o) {
    check_same_chart(n_, o.n_, "polynomial sum");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  PolyFn& operator-=(const PolyFn& o) {
    check_same_chart(n_, o.n_, "polynomial difference");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  PolyFn& operator*=(const Scalar& s) {
    if (tractor::is_zero(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }

  friend PolyFn operator+(PolyFn a, const PolyFn& b) { return a += b; }
  friend PolyFn operator-(PolyFn a, const PolyFn& b) { return a -= b; }
  friend PolyFn operator-(PolyFn a) { return a *= Scalar(-1); }
  friend PolyFn operator*(PolyFn a, const Scalar& s) { return a *= s; }
  friend PolyFn operator*(const Scalar& s, PolyFn a) { return a *= s; }

  friend PolyFn operator*(const PolyFn& a, const PolyFn& b) {
    check_same_chart(a.n_, b.n_, "polynomial product");
    PolyFn out(a.n_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m{};
        for (std::size_t i = 0; i < m.size(); ++i) {
          const int e = ma[i] + mb[i];
          if (e > 255) throw UnsupportedInput("polynomial exponent overflow");
          m[i] = static_cast<std::uint8_t>(e);
        }
        out.add_term(m, ca * cb);
      }
    return out;
  }

  friend bool operator==(const PolyFn& a, const PolyFn& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

  /// Partial derivative with respect to x_{i+1}.
  PolyFn derivative(int i) const {
    if (i < 0 || i >= n_) throw SizeMismatch("derivative index out of range");
    PolyFn out(n_);
    for (const auto& [m, c] : terms_) {
      const auto e = m[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      Monomial dm = m;
      dm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(e - 1);
      out.add_term(dm, c * Scalar(static_cast<int>(e)));
    }
    return out;
  }

 private:
  int n_;
  Terms terms_;
};

/// Vector field sum_i components[i] d/dx_{i+1}.
template <typename Scalar>
class PolyField {
 public:
  explicit PolyField(int n = 0) : components_(static_cast<std::size_t>(n), PolyFn<Scalar>(n)) { check_chart_dim(n); }
  explicit PolyField(std::vector<PolyFn<Scalar>> components) : components_(std::move(components)) {
    for (const auto& c : components_) check_same_chart(c.chart_dim(), chart_dim(), "vector field component");
  }

  /// Coordinate field d/dx_{i+1}.
  static PolyField coordinate(int n, int i) {
    PolyField x(n);
    x.components_.at(static_cast<std::size_t>(i)) = PolyFn<Scalar>::constant(n, Scalar(1));
    return x;
  }

  int chart_dim() const { return static_cast<int>(components_.size()); }
  const std::vector<PolyFn<Scalar>>& components() const { return components_; }
  const PolyFn<Scalar>& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  PolyFn<Scalar>& operator[](int i) { return components_[static_cast<std::size_t>(i)]; }

  bool is_zero() const {
    return std::all_of(components_.begin(), components_.end(), [](const auto& c) { return c.is_zero(); });
  }

  /// X(f) = sum_i X_i df/dx_i.
  PolyFn<Scalar> apply(const PolyFn<Scalar>& f) const {
    check_same_chart(chart_dim(), f.chart_dim(), "vector field action");
    PolyFn<Scalar> out(chart_dim());
    for (int i = 0; i < chart_dim(); ++i)
      if (!components_[static_cast<std::size_t>(i)].is_zero()) out += components_[static_cast<std::size_t>(i)] * f.derivative(i);
    return out;
  }

  PolyField& operator+=(const PolyField& o) {
    check_same_chart(chart_dim(), o.chart_dim(), "vector field sum");
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += o.components_[i];
    return *this;
  }
  PolyField& operator-=(const PolyField& o) {
    check_same_chart(chart_dim(), o.chart_dim(), "vector field difference");
    for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= o.components_[i];
    return *this;
  }
  friend PolyField operator+(PolyField a, const PolyField& b) { return a += b; }
  friend PolyField operator-(PolyField a, const PolyField& b) { return a -= b; }
  friend PolyField operator-(PolyField a) { return a * Scalar(-1); }
  friend PolyField operator*(PolyField a, const Scalar& s) {
    for (auto& c : a.components_) c *= s;
    return a;
  }
  friend PolyField operator*(const PolyFn<Scalar>& f, PolyField a) {
    for (auto& c : a.components_) c = f * c;
    return a;
  }
  friend bool operator==(const PolyField& a, const PolyField& b) { return a.components_ == b.components_; }

 private:
  std::vector<PolyFn<Scalar>> components_;
};

/// Lie bracket of vector fields: [X,Y]_i = X(Y_i) - Y(X_i).
template <typename Scalar>
PolyField<Scalar> lie_bracket(const PolyField<Scalar>& x, const PolyField<Scalar>& y) {
  check_same_chart(x.chart_dim(), y.chart_dim(), "vector field bracket");
  PolyField<Scalar> out(x.chart_dim());
  for (int i = 0; i < x.chart_dim(); ++i) out[i] = x.apply(y[i]) - y.apply(x[i]);
  return out;
}

/// Homogeneous differential form of degree k with polynomial coefficients.
template <typename Scalar>
class PolyForm {
 public:
  using Terms = std::map<FormIndex, PolyFn<Scalar>>;

  explicit PolyForm(int n = 0, int degree = 0) : n_(n), k_(degree) {
    check_chart_dim(n);
    if (degree < 0) throw PreconditionError("form degree must be nonnegative");
  }

  static PolyForm function(const PolyFn<Scalar>& f) {
    PolyForm w(f.chart_dim(), 0);
    w.add_term(0, f);
    return w;
  }

  /// f dx_{i1} ^ ... ^ dx_{ik} for 0-based, not necessarily sorted, indices.
  static PolyForm basis(int n, const std::vector<int>& indices, const PolyFn<Scalar>& f) {
    check_same_chart(n, f.chart_dim(), "form coefficient");
    PolyForm w(n, static_cast<int>(indices.size()));
    FormIndex mask = 0;
    int sign = 1;
    for (int i : indices) {
      if (i < 0 || i >= n) throw SizeMismatch("form index out of range");
      const FormIndex bit = FormIndex{1} << i;
      sign *= wedge_sign(mask, bit);
      if (sign == 0) return w;
      mask |= bit;
    }
    w.add_term(mask, sign > 0 ? f : -f);
    return w;
  }

  /// dx_{i+1}.
  static PolyForm differential(int n, int i) { return basis(n, {i}, PolyFn<Scalar>::constant(n, Scalar(1))); }

  int chart_dim() const { return n_; }
  int degree() const { return k_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  PolyFn<Scalar> coefficient(FormIndex mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? PolyFn<Scalar>(n_) : it->second;
  }

  /// Coefficient of dx_I for 0-based increasing indices.
  PolyFn<Scalar> coefficient(const std::vector<int>& indices) const {
    FormIndex mask = 0;
    for (int i : indices) mask |= FormIndex{1} << i;
    return coefficient(mask);
  }

  /// Coefficient function of a degree-0 form.
  PolyFn<Scalar> as_function() const {
    if (k_ != 0) throw PreconditionError("as_function requires a 0-form");
    return coefficient(FormIndex{0});
  }

  void add_term(FormIndex mask, const PolyFn<Scalar>& f) {
    if (f.is_zero()) return;
    check_same_chart(n_, f.chart_dim(), "form coefficient");
    if (std::popcount(mask) != k_) throw PreconditionError("form term of the wrong degree");
    if (mask >> n_) throw SizeMismatch("form index beyond the chart");
    auto [it, inserted] = terms_.try_emplace(mask, f);
    if (!inserted) {
      it->second += f;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  PolyForm& operator+=(const PolyForm& o) {
    check_same_shape(o, "form sum");
    for (const auto& [m, f] : o.terms_) add_term(m, f);
    return *this;
  }
  PolyForm& operator-=(const PolyForm& o) {
    check_same_shape(o, "form difference");
    for (const auto& [m, f] : o.terms_) add_term(m, -f);
    return *this;
  }
  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator-(PolyForm a) { return a * Scalar(-1); }
  friend PolyForm operator*(PolyForm a, const Scalar& s) {
    if (tractor::is_zero(s)) a.terms_.clear();
    for (auto& [m, f] : a.terms_) f *= s;
    return a;
  }
  friend PolyForm operator*(const Scalar& s, PolyForm a) { return std::move(a) * s; }
  friend PolyForm operator*(const PolyFn<Scalar>& g, const PolyForm& a) {
    check_same_chart(g.chart_dim(), a.n_, "function times form");
    PolyForm out(a.n_, a.k_);
    for (const auto& [m, f] : a.terms_) out.add_term(m, g * f);
    return out;
  }
  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.terms_ == b.terms_;
  }

  void check_same_shape(const PolyForm& o, const char* what) const {
    check_same_chart(n_, o.n_, what);
    if (k_ != o.k_)
      throw SizeMismatch(std::string(what) + ": degrees " + std::to_string(k_) + " and " + std::to_string(o.k_) + " differ");
  }

 private:
  int n_;
  int k_;
  Terms terms_;
};

/// Exterior derivative. A top-degree form maps to the zero form of degree n+1.
template <typename Scalar>
PolyForm<Scalar> d(const PolyForm<Scalar>& w) {
  const int n = w.chart_dim();
  PolyForm<Scalar> out(n, w.degree() + 1);
  if (w.degree() >= n) return out;
  for (const auto& [mask, f] : w.terms())
    for (int i = 0; i < n; ++i) {
      const FormIndex bit = FormIndex{1} << i;
      if (mask & bit) continue;
      const PolyFn<Scalar> df = f.derivative(i);
      if (df.is_zero()) continue;
      out.add_term(mask | bit, wedge_sign(bit, mask) > 0 ? df : -df);
    }
  return out;
}

/// Differential of a function as a 1-form.
template <typename Scalar>
PolyForm<Scalar> d(const PolyFn<Scalar>& f) {
  return d(PolyForm<Scalar>::function(f));
}

template <typename Scalar>
PolyForm<Scalar> wedge(const PolyForm<Scalar>& a, const PolyForm<Scalar>& b) {
  check_same_chart(a.chart_dim(), b.chart_dim(), "wedge");
  PolyForm<Scalar> out(a.chart_dim(), a.degree() + b.degree());
  for (const auto& [ma, fa] : a.terms())
    for (const auto& [mb, fb] : b.terms()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      PolyFn<Scalar> f = fa * fb;
      out.add_term(ma | mb, s > 0 ? f : -f);
    }
  return out;
}

/// Interior product, contracting the first slot.
template <typename Scalar>
PolyForm<Scalar> interior(const PolyField<Scalar>& x, const PolyForm<Scalar>& w) {
  check_same_chart(x.chart_dim(), w.chart_dim(), "interior product");
  if (w.degree() < 1) throw PreconditionError("interior product of a 0-form");
  PolyForm<Scalar> out(w.chart_dim(), w.degree() - 1);
  for (const auto& [mask, f] : w.terms())
    for (FormIndex rest = mask; rest; rest &= rest - 1) {
      const int i = std::countr_zero(rest);
      if (x[i].is_zero()) continue;
      const FormIndex bit = FormIndex{1} << i;
      const PolyFn<Scalar> g = x[i] * f;
      out.add_term(mask & ~bit, wedge_sign(bit, mask & ~bit) > 0 ? g : -g);
    }
  return out;
}

/// Lie derivative via the Cartan formula L_X = d i_X + i_X d.
template <typename Scalar>
PolyForm<Scalar> lie_derivative(const PolyField<Scalar>& x, const PolyForm<Scalar>& w) {
  check_same_chart(x.chart_dim(), w.chart_dim(), "Lie derivative");
  if (w.degree() == 0) return PolyForm<Scalar>::function(x.apply(w.as_function()));
  if (w.degree() > w.chart_dim()) return PolyForm<Scalar>(w.chart_dim(), w.degree());
  return d(interior(x, w)) + interior(x, d(w));
}

/// <eta, X> for a 1-form eta.
template <typename Scalar>
PolyFn<Scalar> pair(const PolyForm<Scalar>& eta, const PolyField<Scalar>& x) {
  if (eta.degree() != 1) throw PreconditionError("pairing requires a 1-form");
  return interior(x, eta).as_function();
}

/// w(X1, ..., Xk) as a function.
template <typename Scalar>
PolyFn<Scalar> evaluate(const PolyForm<Scalar>& w, const std::vector<PolyField<Scalar>>& fields) {
  if (static_cast<int>(fields.size()) != w.degree()) throw PreconditionError("evaluate: wrong number of arguments");
  PolyForm<Scalar> cur = w;
  for (const auto& x : fields) cur = interior(x, cur);
  return cur.as_function();
}

/// The closedness check of `poincare_primitive` failed; carries d(w).
template <typename Scalar>
class ClosednessViolation : public std::domain_error {
 public:
  explicit ClosednessViolation(PolyForm<Scalar> dw)
      : std::domain_error("form is not closed"), residual_(std::move(dw)) {}
  const PolyForm<Scalar>& residual() const { return residual_; }

 private:
  PolyForm<Scalar> residual_;
};

/// Radial homotopy operator centred at the origin applied to a closed form:
/// x^a dx_I maps to x^a / (|a| + k) * sum_j (-1)^j x_{i_j} dx_{I \ i_j}, so that
/// d of the result returns the input.
template <typename Scalar>
PolyForm<Scalar> poincare_primitive(const PolyForm<Scalar>& w) {
  if (w.degree() < 1) throw PreconditionError("poincare_primitive requires degree >= 1");
  const PolyForm<Scalar> dw = d(w);
  if (!dw.is_zero()) throw ClosednessViolation<Scalar>(dw);
  const int n = w.chart_dim();
  const int k = w.degree();
  PolyForm<Scalar> out(n, k - 1);
  for (const auto& [mask, f] : w.terms())
    for (const auto& [mono, c] : f.terms()) {
      const Scalar weight = c / Scalar(monomial_degree(mono) + k);
      for (FormIndex rest = mask; rest; rest &= rest - 1) {
        const int i = std::countr_zero(rest);
        const FormIndex bit = FormIndex{1} << i;
        Monomial m = mono;
        m[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(m[static_cast<std::size_t>(i)] + 1);
        const Scalar s = wedge_sign(bit, mask & ~bit) > 0 ? weight : -weight;
        out.add_term(mask & ~bit, PolyFn<Scalar>::monomial(n, m, s));
      }
    }
  if (!(d(out) == w)) throw StructuralError("homotopy operator output is not a primitive");
  return out;
}

/// Form with values in R^m, stored as one scalar form per value coordinate.
template <typename Scalar>
class ValuedForm {
 public:
  ValuedForm(int n = 0, int degree = 0, int value_dim = 0)
      : n_(n), k_(degree), components_(static_cast<std::size_t>(value_dim), PolyForm<Scalar>(n, degree)) {}

  explicit ValuedForm(std::vector<PolyForm<Scalar>> components, int n, int degree)
      : n_(n), k_(degree), components_(std::move(components)) {
    for (const auto& c : components_) {
      check_same_chart(n_, c.chart_dim(), "valued form component");
      if (c.degree() != k_) throw SizeMismatch("valued form component of the wrong degree");
    }
  }

  int chart_dim() const { return n_; }
  int degree() const { return k_; }
  int value_dim() const { return static_cast<int>(components_.size()); }
  const std::vector<PolyForm<Scalar>>& components() const { return components_; }
  const PolyForm<Scalar>& operator[](int a) const { return components_.at(static_cast<std::size_t>(a)); }
  PolyForm<Scalar>& operator[](int a) { return components_.at(static_cast<std::size_t>(a)); }

  bool is_zero() const {
    return std::all_of(components_.begin(), components_.end(), [](const auto& c) { return c.is_zero(); });
  }

  ValuedForm& operator+=(const ValuedForm& o) {
    if (o.value_dim() != value_dim()) throw SizeMismatch("valued form sum: value dimensions differ");
    for (std::size_t a = 0; a < components_.size(); ++a) components_[a] += o.components_[a];
    return *this;
  }
  ValuedForm& operator-=(const ValuedForm& o) {
    if (o.value_dim() != value_dim()) throw SizeMismatch("valued form difference: value dimensions differ");
    for (std::size_t a = 0; a < components_.size(); ++a) components_[a] -= o.components_[a];
    return *this;
  }
  friend ValuedForm operator+(ValuedForm a, const ValuedForm& b) { return a += b; }
  friend ValuedForm operator-(ValuedForm a, const ValuedForm& b) { return a -= b; }
  friend bool operator==(const ValuedForm& a, const ValuedForm& b) {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.components_ == b.components_;
  }

 private:
  int n_;
  int k_;
  std::vector<PolyForm<Scalar>> components_;
};

template <typename Scalar>
ValuedForm<Scalar> d(const ValuedForm<Scalar>& w) {
  std::vector<PolyForm<Scalar>> out;
  for (const auto& c : w.components()) out.push_back(d(c));
  return ValuedForm<Scalar>(std::move(out), w.chart_dim(), w.degree() + 1);
}

template <typename Scalar>
ValuedForm<Scalar> interior(const PolyField<Scalar>& x, const ValuedForm<Scalar>& w) {
  std::vector<PolyForm<Scalar>> out;
  for (const auto& c : w.components()) out.push_back(interior(x, c));
  return ValuedForm<Scalar>(std::move(out), w.chart_dim(), w.degree() - 1);
}

/// w(X1, ..., Xk) as a vector of functions.
template <typename Scalar>
std::vector<PolyFn<Scalar>> evaluate(const ValuedForm<Scalar>& w, const std::vector<PolyField<Scalar>>& fields) {
  std::vector<PolyFn<Scalar>> out;
  for (const auto& c : w.components()) out.push_back(evaluate(c, fields));
  return out;
}

}  // namespace tractor
