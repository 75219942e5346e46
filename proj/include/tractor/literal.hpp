#pragma once

// Text grammar for polynomials and forms on a chart:
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := power (('*'|'^') power)*        both operators are the wedge product
//   power  := atom ['^' INT]                  exponent only on 0-form atoms
//   atom   := INT ['/' INT] | 'x'INT | 'dx'INT | '(' expr ')'
//
// Variables are x1..xn, differentials dx1..dxn. "x1^2*dx2^dx3" is x1^2 dx2 ^ dx3.
// The canonical serialization is the sorted-term form of the same grammar.

#include "tractor/chartcalc.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace tractor {

namespace detail {

template <typename Scalar>
class LiteralParser {
 public:
  using Mixed = std::map<int, PolyForm<Scalar>>;

  LiteralParser(std::string_view text, int n) : text_(text), n_(n) { check_chart_dim(n); }

  Mixed parse() {
    skip_space();
    if (at_end()) error("empty expression");
    Mixed m = expr();
    skip_space();
    if (!at_end()) error(std::string("unexpected '") + peek() + "'");
    return m;
  }

  [[noreturn]] void error(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  static void add_into(Mixed& into, const Mixed& from, const Scalar& sign) {
    for (const auto& [deg, w] : from) {
      auto it = into.find(deg);
      if (it == into.end()) into.emplace(deg, w * sign);
      else it->second += w * sign;
    }
  }

  Mixed product(const Mixed& a, const Mixed& b) const {
    Mixed out;
    for (const auto& [da, wa] : a)
      for (const auto& [db, wb] : b) {
        PolyForm<Scalar> w = wedge(wa, wb);
        auto it = out.find(da + db);
        if (it == out.end()) out.emplace(da + db, std::move(w));
        else it->second += w;
      }
    return out;
  }

  Mixed expr() {
    skip_space();
    Scalar sign(1);
    if (peek() == '+' || peek() == '-') {
      if (peek() == '-') sign = Scalar(-1);
      ++pos_;
    }
    Mixed acc;
    add_into(acc, term(), sign);
    for (;;) {
      skip_space();
      if (peek() != '+' && peek() != '-') break;
      const Scalar s = peek() == '-' ? Scalar(-1) : Scalar(1);
      ++pos_;
      add_into(acc, term(), s);
    }
    return acc;
  }

  Mixed term() {
    Mixed acc = power();
    for (;;) {
      skip_space();
      if (peek() != '*' && peek() != '^') break;
      ++pos_;
      acc = product(acc, power());
    }
    return acc;
  }

  bool next_is_exponent() {
    std::size_t p = pos_;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    if (p >= text_.size() || text_[p] != '^') return false;
    ++p;
    while (p < text_.size() && std::isspace(static_cast<unsigned char>(text_[p]))) ++p;
    return p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]));
  }

  Mixed power() {
    skip_space();
    const std::size_t start = pos_;
    Mixed base = atom();
    if (!next_is_exponent()) return base;
    skip_space();
    ++pos_;  // '^'
    skip_space();
    const long e = integer();
    for (const auto& [deg, w] : base)
      if (deg != 0 && !w.is_zero()) {
        pos_ = start;
        error("exponent applied to a differential");
      }
    if (e > 64) error("exponent too large");
    Mixed out;
    out.emplace(0, PolyForm<Scalar>::function(PolyFn<Scalar>::constant(n_, Scalar(1))));
    for (long i = 0; i < e; ++i) out = product(out, base);
    return out;
  }

  long integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) error("expected an integer");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1000000000L) error("integer literal too large");
      ++pos_;
    }
    return v;
  }

  int index() {
    const std::size_t start = pos_;
    const long i = integer();
    if (i < 1 || i > n_) {
      pos_ = start;
      error("index " + std::to_string(i) + " out of range 1.." + std::to_string(n_));
    }
    return static_cast<int>(i - 1);
  }

  Mixed atom() {
    skip_space();
    Mixed out;
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Scalar value(integer());
      skip_space();
      if (peek() == '/') {
        ++pos_;
        skip_space();
        const std::size_t at = pos_;
        const long den = integer();
        if (den == 0) {
          pos_ = at;
          error("zero denominator");
        }
        value /= Scalar(den);
      }
      out.emplace(0, PolyForm<Scalar>::function(PolyFn<Scalar>::constant(n_, value)));
      return out;
    }
    if (c == 'x') {
      ++pos_;
      const int i = index();
      out.emplace(0, PolyForm<Scalar>::function(PolyFn<Scalar>::coordinate(n_, i)));
      return out;
    }
    if (c == 'd') {
      ++pos_;
      if (peek() != 'x') error("expected 'dx'");
      ++pos_;
      const int i = index();
      out.emplace(1, PolyForm<Scalar>::differential(n_, i));
      return out;
    }
    if (c == '(') {
      ++pos_;
      Mixed inner = expr();
      skip_space();
      if (peek() != ')') error("expected ')'");
      ++pos_;
      return inner;
    }
    if (at_end()) error("unexpected end of expression");
    error(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a form; the result must be homogeneous. A zero expression is a 0-form
/// unless `degree` is given.
template <typename Scalar = Rational>
PolyForm<Scalar> parse_form(std::string_view text, int n, int degree = -1) {
  detail::LiteralParser<Scalar> parser(text, n);
  auto mixed = parser.parse();
  PolyForm<Scalar> result(n, degree < 0 ? 0 : degree);
  bool found = false;
  for (auto& [deg, w] : mixed) {
    if (w.is_zero()) continue;
    if (found) throw ParseError("expression mixes form degrees", 1, 1);
    if (degree >= 0 && deg != degree)
      throw ParseError("expected a form of degree " + std::to_string(degree) + ", got degree " + std::to_string(deg), 1, 1);
    result = w;
    found = true;
  }
  return result;
}

template <typename Scalar = Rational>
PolyFn<Scalar> parse_poly(std::string_view text, int n) {
  return parse_form<Scalar>(text, n, 0).as_function();
}

namespace detail {

// Graded order: higher total degree first, then lexicographically larger exponents.
inline bool monomial_print_order(const Monomial& a, const Monomial& b) {
  const int da = monomial_degree(a), db = monomial_degree(b);
  if (da != db) return da > db;
  return a > b;
}

inline std::string monomial_string(const Monomial& m) {
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "x" + std::to_string(i + 1);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out;
}

inline std::string differential_string(FormIndex mask) {
  std::string out;
  for (int i : form_indices(mask)) {
    if (!out.empty()) out += "^";
    out += "dx" + std::to_string(i + 1);
  }
  return out;
}

template <typename Scalar>
void append_term(std::string& out, const Scalar& coeff, const std::string& body) {
  const bool negative = coeff < Scalar(0);
  const Scalar mag = negative ? Scalar(-coeff) : coeff;
  if (out.empty()) out += negative ? "-" : "";
  else out += negative ? " - " : " + ";
  if (body.empty()) out += to_string(mag);
  else if (mag == Scalar(1)) out += body;
  else out += to_string(mag) + "*" + body;
}

}  // namespace detail

template <typename Scalar>
std::string to_string(const PolyForm<Scalar>& w) {
  std::vector<std::pair<std::vector<int>, FormIndex>> keys;
  for (const auto& [mask, f] : w.terms()) keys.emplace_back(form_indices(mask), mask);
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (const auto& [idx, mask] : keys) {
    const auto& f = w.terms().at(mask);
    std::vector<Monomial> monos;
    for (const auto& [m, c] : f.terms()) monos.push_back(m);
    std::sort(monos.begin(), monos.end(), detail::monomial_print_order);
    const std::string dx = detail::differential_string(mask);
    for (const auto& m : monos) {
      std::string body = detail::monomial_string(m);
      if (!dx.empty()) body += body.empty() ? dx : "*" + dx;
      detail::append_term(out, f.terms().at(m), body);
    }
  }
  return out.empty() ? "0" : out;
}

template <typename Scalar>
std::string to_string(const PolyFn<Scalar>& f) {
  return to_string(PolyForm<Scalar>::function(f));
}

template <typename Scalar>
std::string to_string(const PolyField<Scalar>& x) {
  std::string out;
  for (int i = 0; i < x.chart_dim(); ++i) {
    if (x[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(x[i]) + ")*d/dx" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

}  // namespace tractor
