#include "tractor/chartcalc.hpp"
#include "tractor/literal.hpp"
#include "tractor/sampling.hpp"

#include <gtest/gtest.h>

using namespace tractor;
using Q = Rational;
using Fn = PolyFn<Q>;
using Field = PolyField<Q>;
using Form = PolyForm<Q>;

namespace {

Form F(const char* text, int n, int degree = -1) { return parse_form<Q>(text, n, degree); }
Fn P(const char* text, int n) { return parse_poly<Q>(text, n); }

SamplingOptions opts(int degree = 3) {
  SamplingOptions o;
  o.max_degree = degree;
  return o;
}

// (L_X eta)_j = sum_i X_i d_i eta_j + eta_i d_j X_i for a 1-form eta.
Form lie_derivative_one_form(const Field& x, const Form& eta) {
  const int n = x.chart_dim();
  Form out(n, 1);
  for (int j = 0; j < n; ++j) {
    Fn c(n);
    for (int i = 0; i < n; ++i) {
      c += x[i] * eta.coefficient(FormIndex{1} << j).derivative(i);
      c += eta.coefficient(FormIndex{1} << i) * x[i].derivative(j);
    }
    out.add_term(FormIndex{1} << j, c);
  }
  return out;
}

}  // namespace

TEST(PolyFn, ArithmeticAndCanonicalForm) {
  const Fn f = P("x1 + x2", 2);
  const Fn g = P("x1 - x2", 2);
  EXPECT_EQ(f * g, P("x1^2 - x2^2", 2));
  EXPECT_TRUE((f - f).is_zero());
  EXPECT_EQ((f * Q(0)).term_count(), 0u);
  EXPECT_EQ(P("x1*x2^2", 2).degree(), 3);
  EXPECT_EQ(P("x1^2*x2", 2).derivative(0), P("2*x1*x2", 2));
  EXPECT_EQ(Fn::constant(2, Q(5)).derivative(1), Fn(2));
}

TEST(PolyField, ApplyAndBracket) {
  const int n = 2;
  Field d1 = Field::coordinate(n, 0);
  Field x1d2(n);
  x1d2[1] = Fn::coordinate(n, 0);
  EXPECT_EQ(d1.apply(P("x1^2*x2", n)), P("2*x1*x2", n));
  EXPECT_EQ(lie_bracket(d1, x1d2), Field::coordinate(n, 1));
  EXPECT_EQ(lie_bracket(x1d2, d1), Field(n) - Field::coordinate(n, 1));
}

TEST(D, Examples) {
  EXPECT_EQ(d(F("x1*dx2", 3)), F("dx1^dx2", 3));
  EXPECT_TRUE(d(Fn::constant(3, Q(7))).is_zero());
  EXPECT_EQ(d(F("x1*x2", 2)), F("x2*dx1 + x1*dx2", 2));
  const Form top = F("x1*dx1^dx2", 2);
  EXPECT_EQ(d(top).degree(), 3);
  EXPECT_TRUE(d(top).is_zero());
}

TEST(D, SquaresToZero) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = sample_rng(1, i);
    const int n = 2 + static_cast<int>(i % 5);
    for (int k = 0; k < n; ++k) {
      const Form w = random_form<Q>(n, k, rng, opts());
      EXPECT_TRUE(d(d(w)).is_zero()) << to_string(w);
    }
  }
}

TEST(Wedge, Examples) {
  const int n = 4;
  EXPECT_EQ(F("dx1^dx2", n), Q(-1) * F("dx2^dx1", n));
  const Form w = F("dx1^dx2 + dx3^dx4", n);
  EXPECT_EQ(wedge(w, w), F("2*dx1^dx2^dx3^dx4", n));
  const Form eta = F("x2*dx1 + x1^2*dx3", n);
  EXPECT_TRUE(wedge(eta, eta).is_zero());
  EXPECT_TRUE(wedge(F("dx1^dx2^dx3", n), F("dx3^dx4", n)).is_zero());
}

TEST(Wedge, GradedCommutativityAndLeibniz) {
  for (std::uint64_t i = 0; i < 15; ++i) {
    auto rng = sample_rng(2, i);
    const int n = 4 + static_cast<int>(i % 3);
    const int ka = static_cast<int>(i % 3), kb = static_cast<int>((i / 3) % 3);
    const Form a = random_form<Q>(n, ka, rng, opts(2));
    const Form b = random_form<Q>(n, kb, rng, opts(2));
    const Q sign = (ka * kb) % 2 ? Q(-1) : Q(1);
    EXPECT_EQ(wedge(a, b), wedge(b, a) * sign);
    const Q s = ka % 2 ? Q(-1) : Q(1);
    EXPECT_EQ(d(wedge(a, b)), wedge(d(a), b) + wedge(a, d(b)) * s);
  }
}

TEST(Interior, Examples) {
  const int n = 3;
  EXPECT_EQ(interior(Field::coordinate(n, 0), F("dx1^dx2", n)), F("dx2", n));
  EXPECT_EQ(interior(Field::coordinate(n, 1), F("dx1^dx2", n)), Q(-1) * F("dx1", n));
  EXPECT_TRUE(interior(Field::coordinate(n, 2), F("dx1^dx2", n)).is_zero());
  EXPECT_THROW(interior(Field::coordinate(n, 0), F("x1", n)), PreconditionError);
}

TEST(Interior, AnticommutesAndIsAntiderivation) {
  for (std::uint64_t i = 0; i < 15; ++i) {
    auto rng = sample_rng(3, i);
    const int n = 3 + static_cast<int>(i % 4);
    const Field x = random_field<Q>(n, rng, opts(2));
    const Field y = random_field<Q>(n, rng, opts(2));
    const Form w = random_form<Q>(n, 2, rng, opts(2));
    const Form v = random_form<Q>(n, 1, rng, opts(2));
    EXPECT_TRUE(interior(x, interior(x, w)).is_zero());
    EXPECT_EQ(interior(x, interior(y, w)), Q(-1) * interior(y, interior(x, w)));
    EXPECT_EQ(interior(x, wedge(w, v)), wedge(interior(x, w), v) + wedge(w, interior(x, v)));
  }
}

TEST(LieDerivative, Examples) {
  const int n = 3;
  EXPECT_EQ(lie_derivative(Field::coordinate(n, 0), F("x1*dx2", n)), F("dx2", n));
  auto rng = sample_rng(4, 0);
  const Field x = random_field<Q>(n, rng, opts());
  for (int i = 0; i < n; ++i) EXPECT_EQ(lie_derivative(x, Form::differential(n, i)), d(x[i]));
  EXPECT_THROW(lie_derivative(Field::coordinate(2, 0), F("dx1", 3)), SizeMismatch);
}

TEST(LieDerivative, CoordinateFormulaAndLeibniz) {
  for (std::uint64_t i = 0; i < 15; ++i) {
    auto rng = sample_rng(5, i);
    const int n = 2 + static_cast<int>(i % 5);
    const Field x = random_field<Q>(n, rng, opts());
    const Fn f = random_poly<Q>(n, rng, opts());
    const Form eta = random_form<Q>(n, 1, rng, opts());
    const Form w = random_form<Q>(n, std::min(2, n), rng, opts(2));
    EXPECT_EQ(lie_derivative(x, eta), lie_derivative_one_form(x, eta));
    EXPECT_EQ(lie_derivative(x, f * w), x.apply(f) * w + f * lie_derivative(x, w));
    EXPECT_EQ(lie_derivative(x, wedge(eta, w)), wedge(lie_derivative(x, eta), w) + wedge(eta, lie_derivative(x, w)));
    EXPECT_EQ(d(lie_derivative(x, w)), lie_derivative(x, d(w)));
  }
}

TEST(LieDerivative, CommutatorIsBracket) {
  auto rng = sample_rng(6, 0);
  const int n = 3;
  const Field x = random_field<Q>(n, rng, opts(2));
  const Field y = random_field<Q>(n, rng, opts(2));
  const Form w = random_form<Q>(n, 1, rng, opts(2));
  EXPECT_EQ(lie_derivative(x, lie_derivative(y, w)) - lie_derivative(y, lie_derivative(x, w)),
            lie_derivative(lie_bracket(x, y), w));
  EXPECT_EQ(interior(lie_bracket(x, y), w),
            lie_derivative(x, interior(y, w)) - interior(y, lie_derivative(x, w)));
}

TEST(Primitive, Examples) {
  EXPECT_EQ(poincare_primitive(F("dx1^dx2", 2)), Q(1, 2) * F("x1*dx2 - x2*dx1", 2));
  EXPECT_TRUE(poincare_primitive(Form(4, 4)).is_zero());
  EXPECT_EQ(poincare_primitive(Form(4, 4)).degree(), 3);
  EXPECT_EQ(poincare_primitive(F("dx1", 1)), F("x1", 1, 0));
}

TEST(Primitive, RejectsNonClosedWithResidual) {
  const Form w = F("x1*dx2", 2);
  try {
    poincare_primitive(w);
    FAIL() << "expected a closedness violation";
  } catch (const ClosednessViolation<Q>& e) {
    EXPECT_EQ(e.residual(), F("dx1^dx2", 2));
  }
  EXPECT_THROW(poincare_primitive(F("x1", 2)), PreconditionError);
}

TEST(Primitive, InvertsDOnExactForms) {
  for (std::uint64_t i = 0; i < 12; ++i) {
    auto rng = sample_rng(7, i);
    const int n = 4 + static_cast<int>(i % 3);
    const int k = 1 + static_cast<int>(i % 4);
    const Form exact = d(random_form<Q>(n, k - 1, rng, opts(3)));
    const Form p = poincare_primitive(exact);
    EXPECT_EQ(d(p), exact);
  }
}

TEST(Evaluate, MatchesInteriorChain) {
  const int n = 4;
  const Form w = F("x1*dx1^dx2 + dx3^dx4", n);
  const Field d1 = Field::coordinate(n, 0), d2 = Field::coordinate(n, 1);
  EXPECT_EQ(evaluate(w, {d1, d2}), P("x1", n));
  EXPECT_EQ(evaluate(w, {d2, d1}), P("-x1", n));
  EXPECT_THROW(evaluate(w, {d1}), PreconditionError);
}

TEST(ValuedForm, ComponentwiseOperations) {
  const int n = 3;
  ValuedForm<Q> a(n, 1, 2);
  a[0] = F("x1*dx2", n);
  a[1] = F("dx3", n);
  const ValuedForm<Q> da = d(a);
  EXPECT_EQ(da.degree(), 2);
  EXPECT_EQ(da[0], F("dx1^dx2", n));
  EXPECT_TRUE(da[1].is_zero());
  const auto values = evaluate(a, {Field::coordinate(n, 1)});
  ASSERT_EQ(values.size(), 2u);
  EXPECT_EQ(values[0], P("x1", n));
  EXPECT_TRUE(values[1].is_zero());
  EXPECT_THROW(ValuedForm<Q>({F("dx1", n), F("dx1^dx2", n)}, n, 1), SizeMismatch);
}

TEST(Literal, RoundTrip) {
  for (const char* text : {"x1*dx2^dx3^dx4", "1/2*x1*dx2 - 1/2*x2*dx1", "-3*x1^2*x2 + x3 - 7", "dx1^dx2 + dx3^dx4", "0"}) {
    const Form w = parse_form<Q>(text, 4);
    EXPECT_EQ(parse_form<Q>(to_string(w), 4, w.degree()), w) << text;
  }
  EXPECT_EQ(to_string(F("x1*dx2^dx3^dx4", 4)), "x1*dx2^dx3^dx4");
  EXPECT_EQ(to_string(F("dx2 * x1", 2)), "x1*dx2");
  EXPECT_EQ(to_string(F("dx2^dx1", 2)), "-dx1^dx2");
  EXPECT_EQ(to_string(P("x2 + x1^2 + 3", 2)), "x1^2 + x2 + 3");
}

TEST(Literal, GrammarDetails) {
  EXPECT_EQ(F("(x1 + x2)^2", 2), F("x1^2 + 2*x1*x2 + x2^2", 2));
  EXPECT_EQ(F("2/4*x1", 2), F("1/2*x1", 2));
  EXPECT_EQ(F("x1 * (dx1 + dx2)", 2), F("x1*dx1 + x1*dx2", 2));
  EXPECT_EQ(F("dx1 ^ x2", 2), F("x2*dx1", 2));
  EXPECT_EQ(F("0", 3, 3).degree(), 3);
}

TEST(Literal, ErrorsCarryPositions) {
  const auto column_of = [](const char* text, int n) -> std::size_t {
    try {
      parse_form<Q>(text, n);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  EXPECT_EQ(column_of("x1**", 2), 4u);
  EXPECT_EQ(column_of("x1 + x3", 2), 7u);
  EXPECT_EQ(column_of("dx1^2", 2), 1u);
  EXPECT_EQ(column_of("1/0", 2), 3u);
  EXPECT_EQ(column_of("(x1", 2), 4u);
  EXPECT_EQ(column_of("", 2), 1u);
  EXPECT_THROW(parse_form<Q>("x1 + dx1", 2), ParseError);
  EXPECT_THROW(parse_form<Q>("dx1", 2, 2), ParseError);
  try {
    parse_form<Q>("x1\n + y", 2);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 4u);
  }
}
