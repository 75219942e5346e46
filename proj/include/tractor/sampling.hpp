#pragma once

// Seeded random polynomial data for the property checks. Each sample index
// draws from its own generator, so a sample is reproducible in isolation.

#include "tractor/courant.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace tractor {

struct SamplingOptions {
  std::uint64_t seed = 1;
  int max_degree = 2;
  int max_terms = 3;  // monomials per coefficient
};

/// Generator for sample `index` under `seed`.
inline std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

/// Small rationals: integers in [-3, 3] or halves.
template <typename Scalar>
Scalar random_coefficient(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 2);
  int p = 0;
  while (p == 0) p = num(rng);
  return Scalar(p) / Scalar(den(rng));
}

/// Polynomial with up to `max_terms` monomials of degree <= max_degree; zero with probability 1/4.
template <typename Scalar>
PolyFn<Scalar> random_poly(int n, std::mt19937_64& rng, const SamplingOptions& opt) {
  PolyFn<Scalar> f(n);
  std::uniform_int_distribution<int> zero(0, 3);
  if (zero(rng) == 0) return f;
  std::uniform_int_distribution<int> terms(1, std::max(1, opt.max_terms));
  std::uniform_int_distribution<int> deg(0, std::max(0, opt.max_degree));
  std::uniform_int_distribution<int> var(0, std::max(0, n - 1));
  const int t = terms(rng);
  for (int i = 0; i < t; ++i) {
    Monomial m{};
    const int k = n > 0 ? deg(rng) : 0;
    for (int j = 0; j < k; ++j) ++m[static_cast<std::size_t>(var(rng))];
    f.add_term(m, random_coefficient<Scalar>(rng));
  }
  return f;
}

template <typename Scalar>
PolyField<Scalar> random_field(int n, std::mt19937_64& rng, const SamplingOptions& opt) {
  PolyField<Scalar> x(n);
  for (int i = 0; i < n; ++i) x[i] = random_poly<Scalar>(n, rng, opt);
  return x;
}

template <typename Scalar>
PolyForm<Scalar> random_form(int n, int degree, std::mt19937_64& rng, const SamplingOptions& opt) {
  PolyForm<Scalar> w(n, degree);
  if (degree > n) return w;
  std::vector<int> idx(static_cast<std::size_t>(degree));
  // every increasing index tuple
  const auto visit = [&](auto&& self, int pos, int from) -> void {
    if (pos == degree) {
      FormIndex mask = 0;
      for (int i : idx) mask |= FormIndex{1} << i;
      w.add_term(mask, random_poly<Scalar>(n, rng, opt));
      return;
    }
    for (int i = from; i < n; ++i) {
      idx[static_cast<std::size_t>(pos)] = i;
      self(self, pos + 1, i + 1);
    }
  };
  visit(visit, 0, 0);
  return w;
}

template <typename Scalar>
ValuedForm<Scalar> random_valued_form(int n, int degree, int value_dim, std::mt19937_64& rng, const SamplingOptions& opt) {
  ValuedForm<Scalar> w(n, degree, value_dim);
  for (int a = 0; a < value_dim; ++a) w[a] = random_form<Scalar>(n, degree, rng, opt);
  return w;
}

template <typename Scalar>
FiberSection<Scalar> random_fiber(const CourantContext<Scalar>& ctx, std::mt19937_64& rng, const SamplingOptions& opt) {
  FiberSection<Scalar> s;
  for (int a = 0; a < ctx.fiber_dim(); ++a) s.push_back(random_poly<Scalar>(ctx.n, rng, opt));
  return s;
}

template <typename Scalar>
Section<Scalar> random_section(const CourantContext<Scalar>& ctx, std::mt19937_64& rng, const SamplingOptions& opt) {
  Section<Scalar> e;
  e.vec = random_field<Scalar>(ctx.n, rng, opt);
  e.mid = random_fiber(ctx, rng, opt);
  e.form = random_form<Scalar>(ctx.n, 1, rng, opt);
  return e;
}

/// Three sections and a function, the inputs of one axiom check.
template <typename Scalar>
struct AxiomSample {
  Section<Scalar> e1, e2, e3;
  PolyFn<Scalar> f;
};

template <typename Scalar>
std::vector<AxiomSample<Scalar>> axiom_samples(const CourantContext<Scalar>& ctx, std::size_t count,
                                               const SamplingOptions& opt) {
  std::vector<AxiomSample<Scalar>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = sample_rng(opt.seed, i);
    AxiomSample<Scalar> s;
    s.e1 = random_section(ctx, rng, opt);
    s.e2 = random_section(ctx, rng, opt);
    s.e3 = random_section(ctx, rng, opt);
    s.f = random_poly<Scalar>(ctx.n, rng, opt);
    out.push_back(std::move(s));
  }
  return out;
}

/// Three vector fields, three fiber sections and a function.
template <typename Scalar>
struct CompatibilitySample {
  PolyField<Scalar> x1, x2, x3;
  FiberSection<Scalar> s1, s2, s3;
  PolyFn<Scalar> f;
};

template <typename Scalar>
std::vector<CompatibilitySample<Scalar>> compatibility_samples(const CourantContext<Scalar>& ctx, std::size_t count,
                                                               const SamplingOptions& opt) {
  std::vector<CompatibilitySample<Scalar>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto rng = sample_rng(opt.seed, i);
    CompatibilitySample<Scalar> s;
    s.x1 = random_field<Scalar>(ctx.n, rng, opt);
    s.x2 = random_field<Scalar>(ctx.n, rng, opt);
    s.x3 = random_field<Scalar>(ctx.n, rng, opt);
    s.s1 = random_fiber(ctx, rng, opt);
    s.s2 = random_fiber(ctx, rng, opt);
    s.s3 = random_fiber(ctx, rng, opt);
    s.f = random_poly<Scalar>(ctx.n, rng, opt);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace tractor
