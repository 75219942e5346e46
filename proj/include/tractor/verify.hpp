#pragma once

// Exact property checks for the pre-Courant structure of a context.

#include "tractor/coisotropy.hpp"
#include "tractor/courant.hpp"
#include "tractor/linalg.hpp"
#include "tractor/report.hpp"
#include "tractor/sampling.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tractor {

template <typename Scalar>
using SectionMetric = std::function<PolyFn<Scalar>(const Section<Scalar>&, const Section<Scalar>&)>;

namespace detail {

inline std::string sample_tag(std::size_t i) { return "sample " + std::to_string(i) + ": "; }

template <typename Scalar>
void expect_zero(CheckResult& c, const CourantContext<Scalar>& ctx, const Section<Scalar>& residual, const std::string& tag) {
  ++c.evaluated;
  if (!is_zero(residual)) c.fail(tag + "residual " + to_string(ctx, residual));
}

template <typename Scalar>
void expect_zero(CheckResult& c, const PolyFn<Scalar>& residual, const std::string& tag) {
  ++c.evaluated;
  if (!residual.is_zero()) c.fail(tag + "residual " + to_string(residual));
}

template <typename Scalar>
void expect_zero(CheckResult& c, const PolyForm<Scalar>& residual, const std::string& tag) {
  ++c.evaluated;
  if (!residual.is_zero()) c.fail(tag + "residual " + to_string(residual));
}

template <typename Scalar>
void expect_zero(CheckResult& c, const PolyField<Scalar>& residual, const std::string& tag) {
  ++c.evaluated;
  if (!residual.is_zero()) c.fail(tag + "residual " + to_string(residual));
}

template <typename Scalar>
void expect_zero(CheckResult& c, const FiberSection<Scalar>& residual, const std::string& tag) {
  ++c.evaluated;
  for (std::size_t a = 0; a < residual.size(); ++a)
    if (!residual[a].is_zero()) {
      c.fail(tag + "component " + std::to_string(a) + " residual " + to_string(residual[a]));
      return;
    }
}

/// Constant sections spanning the fiber, ordered TM, E, T*M.
template <typename Scalar>
std::vector<Section<Scalar>> fiber_frame(const CourantContext<Scalar>& ctx) {
  std::vector<Section<Scalar>> frame;
  for (int i = 0; i < ctx.n; ++i) frame.push_back(vector_section(ctx, PolyField<Scalar>::coordinate(ctx.n, i)));
  for (int a = 0; a < ctx.fiber_dim(); ++a) {
    VectorX<Scalar> v = VectorX<Scalar>::Zero(ctx.fiber_dim());
    v(a) = Scalar(1);
    frame.push_back(fiber_section(ctx, constant_fiber(ctx, v)));
  }
  for (int i = 0; i < ctx.n; ++i) frame.push_back(form_section(ctx, PolyForm<Scalar>::differential(ctx.n, i)));
  return frame;
}

/// Value at the origin of a section, in frame coordinates.
template <typename Scalar>
VectorX<Scalar> fiber_value(const CourantContext<Scalar>& ctx, const Section<Scalar>& e) {
  const Monomial origin{};
  VectorX<Scalar> v(2 * ctx.n + ctx.fiber_dim());
  for (int i = 0; i < ctx.n; ++i) v(i) = e.vec[i].coefficient(origin);
  for (int a = 0; a < ctx.fiber_dim(); ++a) v(ctx.n + a) = e.mid[static_cast<std::size_t>(a)].coefficient(origin);
  for (int i = 0; i < ctx.n; ++i) v(ctx.n + ctx.fiber_dim() + i) = e.form.coefficient(FormIndex{1} << i).coefficient(origin);
  return v;
}

}  // namespace detail

/// The metric of the context, as a callable.
template <typename Scalar>
SectionMetric<Scalar> context_metric(const CourantContext<Scalar>& ctx) {
  return [&ctx](const Section<Scalar>& a, const Section<Scalar>& b) { return pairing(ctx, a, b); };
}

/// Fiber-level statements at the origin: im del is isotropic and lies in ker anchor,
/// and its orthogonal complement is exactly ker anchor.
template <typename Scalar>
void check_fiber_coisotropy(const CourantContext<Scalar>& ctx, const SectionMetric<Scalar>& metric, Report& rep) {
  const auto frame = detail::fiber_frame(ctx);
  const auto size = static_cast<Eigen::Index>(frame.size());
  MatrixX<Scalar> gram(size, size);
  const Monomial origin{};
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j)
      gram(i, j) = metric(frame[static_cast<std::size_t>(i)], frame[static_cast<std::size_t>(j)]).coefficient(origin);

  MatrixX<Scalar> image(ctx.n, size);
  for (int i = 0; i < ctx.n; ++i)
    image.row(i) = detail::fiber_value(ctx, del(ctx, PolyFn<Scalar>::coordinate(ctx.n, i))).transpose();
  // ker anchor: rows for the E and T*M frame vectors
  MatrixX<Scalar> kernel = MatrixX<Scalar>::Zero(size - ctx.n, size);
  for (Eigen::Index r = 0; r < kernel.rows(); ++r) kernel(r, ctx.n + r) = Scalar(1);

  auto& iso = rep.add("fiber_del_isotropic");
  ++iso.evaluated;
  if (!is_zero_matrix(MatrixX<Scalar>(image * gram * image.transpose()))) iso.fail("(del f, del g) != 0 at the origin");

  auto& inside = rep.add("fiber_del_in_kernel");
  ++inside.evaluated;
  if (!rows_in_span<Scalar>(image, kernel)) inside.fail("im del not contained in ker anchor");

  auto& cois = rep.add("fiber_kernel_coisotropic");
  ++cois.evaluated;
  const MatrixX<Scalar> perp = row_space<Scalar>(MatrixX<Scalar>(null_space<Scalar>(MatrixX<Scalar>(image * gram)).transpose()));
  if (perp != row_space<Scalar>(kernel))
    cois.fail("(im del)^perp has dimension " + std::to_string(perp.rows()) + ", ker anchor has dimension " +
              std::to_string(kernel.rows()));
}

/// Axioms and derived identities on each sample. `metric` defaults to the context
/// metric; passing another one checks the bracket against it.
template <typename Scalar>
Report check_axioms(const CourantContext<Scalar>& ctx, const std::vector<AxiomSample<Scalar>>& samples,
                    SectionMetric<Scalar> metric = {}) {
  if (!metric) metric = context_metric(ctx);
  Report rep;
  rep.title = "axioms";
  rep.vacuous = samples.empty();
  auto& nss = rep.add("non_skew_symmetry");
  auto& mp = rep.add("metric_preservation");
  auto& l2 = rep.add("leibniz_second_argument");
  auto& anc = rep.add("anchor_commutation");
  auto& l1 = rep.add("leibniz_first_argument");
  auto& sym = rep.add("symmetrization");
  auto& skew = rep.add("skew_defect");
  auto& dp = rep.add("del_pairing");
  auto& da = rep.add("del_anchor");
  auto& bd = rep.add("bracket_with_del");
  auto& db = rep.add("del_bracket");
  auto& jac = rep.add("jacobiator_one_form");
  auto& emb = rep.add("embedding_isotropic");

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [e1, e2, e3, f] = samples[i];
    const std::string tag = detail::sample_tag(i);
    const auto b12 = courant_bracket(ctx, e1, e2);
    const auto b21 = courant_bracket(ctx, e2, e1);
    const auto b13 = courant_bracket(ctx, e1, e3);
    const auto b23 = courant_bracket(ctx, e2, e3);
    const auto b32 = courant_bracket(ctx, e3, e2);

    const PolyFn<Scalar> lhs = e1.vec.apply(metric(e2, e3));
    detail::expect_zero(nss, lhs - metric(e1, b23) - metric(e1, b32), tag);
    detail::expect_zero(mp, lhs - metric(b12, e3) - metric(e2, b13), tag);

    const auto fe1 = f * e1;
    const auto fe2 = f * e2;
    detail::expect_zero(l2, ctx, courant_bracket(ctx, e1, fe2) - f * b12 - e1.vec.apply(f) * e2, tag);
    detail::expect_zero(anc, b12.vec - lie_bracket(e1.vec, e2.vec), tag);
    const Section<Scalar> rhs1 = f * b12 - e2.vec.apply(f) * e1 + metric(e1, e2) * del(ctx, f);
    detail::expect_zero(l1, ctx, courant_bracket(ctx, fe1, e2) - rhs1, tag);

    const PolyFn<Scalar> p12 = metric(e1, e2);
    detail::expect_zero(sym, ctx, b12 + b21 - del(ctx, p12), tag);
    detail::expect_zero(skew, ctx, b12 - skew_bracket(ctx, e1, e2) - Scalar(1, 2) * del(ctx, p12), tag);

    const auto df = del(ctx, f);
    detail::expect_zero(dp, metric(df, e1) - e1.vec.apply(f), tag);
    detail::expect_zero(da, df.vec, tag);
    detail::expect_zero(bd, ctx, courant_bracket(ctx, e1, df) - del(ctx, e1.vec.apply(f)), tag);
    detail::expect_zero(db, ctx, courant_bracket(ctx, df, e1), tag);

    const auto j = jacobiator(ctx, e1, e2, e3);
    detail::expect_zero(jac, ctx, Section<Scalar>{j.vec, j.mid, PolyForm<Scalar>(ctx.n, 1)}, tag);

    detail::expect_zero(emb, metric(vector_section(ctx, e1.vec), vector_section(ctx, e2.vec)), tag);
  }
  check_fiber_coisotropy(ctx, metric, rep);
  return rep;
}

template <typename Scalar>
Report check_axioms(const CourantContext<Scalar>& ctx, std::size_t count, const SamplingOptions& opt) {
  return check_axioms(ctx, axiom_samples(ctx, count, opt));
}

/// The compatibility equations of nabla with the fiber bracket and the curvature,
/// the Bianchi identity, and the two Koszul identities.
template <typename Scalar>
Report check_compatibility(const CourantContext<Scalar>& ctx, const std::vector<CompatibilitySample<Scalar>>& samples) {
  Report rep;
  rep.title = "compatibility";
  rep.vacuous = samples.empty();
  auto& der = rep.add("nabla_derivation");
  auto& curv = rep.add("curvature_identity");
  auto& bianchi = rep.add("bianchi");
  auto& lin = rep.add("nabla_function_linear");
  auto& leib = rep.add("nabla_leibniz");
  auto& route = rep.add("curvature_structure_equation");

  ++route.evaluated;
  const ValuedForm<Scalar> alt = curvature_from_structure_equation(ctx);
  for (int a = 0; a < ctx.fiber_dim(); ++a)
    if (!(alt[a] == ctx.curvature[a])) {
      route.fail("component " + std::to_string(a) + ": " + to_string(ctx.curvature[a]) + " vs " + to_string(alt[a]));
      break;
    }

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const std::string tag = detail::sample_tag(i);

    const auto lhs = nabla(ctx, s.x1, fiber_bracket(ctx, s.s2, s.s3));
    auto rhs = fiber_add(fiber_bracket(ctx, nabla(ctx, s.x1, s.s2), s.s3), fiber_bracket(ctx, s.s2, nabla(ctx, s.x1, s.s3)));
    detail::expect_zero(der, fiber_add(lhs, rhs, Scalar(-1)), tag);

    auto cc = nabla(ctx, s.x1, nabla(ctx, s.x2, s.s1));
    cc = fiber_add(cc, nabla(ctx, s.x2, nabla(ctx, s.x1, s.s1)), Scalar(-1));
    cc = fiber_add(cc, nabla(ctx, lie_bracket(s.x1, s.x2), s.s1), Scalar(-1));
    cc = fiber_add(cc, fiber_bracket(ctx, curvature_at(ctx, s.x1, s.x2), s.s1), Scalar(-1));
    detail::expect_zero(curv, cc, tag);

    // sum over cyclic permutations of nabla_X (R(Y,Z)) - R([X,Y],Z)
    const std::array<const PolyField<Scalar>*, 3> xs{&s.x1, &s.x2, &s.x3};
    FiberSection<Scalar> cyc = zero_fiber(ctx);
    for (int c = 0; c < 3; ++c) {
      const auto& x = *xs[static_cast<std::size_t>(c)];
      const auto& y = *xs[static_cast<std::size_t>((c + 1) % 3)];
      const auto& z = *xs[static_cast<std::size_t>((c + 2) % 3)];
      cyc = fiber_add(cyc, nabla(ctx, x, curvature_at(ctx, y, z)));
      cyc = fiber_add(cyc, curvature_at(ctx, lie_bracket(x, y), z), Scalar(-1));
    }
    detail::expect_zero(bianchi, cyc, tag);

    detail::expect_zero(lin, fiber_add(nabla(ctx, s.f * s.x1, s.s1), fiber_scale(s.f, nabla(ctx, s.x1, s.s1)), Scalar(-1)), tag);
    auto lb = nabla(ctx, s.x1, fiber_scale(s.f, s.s1));
    lb = fiber_add(lb, fiber_scale(s.f, nabla(ctx, s.x1, s.s1)), Scalar(-1));
    lb = fiber_add(lb, fiber_scale(s.x1.apply(s.f), s.s1), Scalar(-1));
    detail::expect_zero(leib, lb, tag);
  }
  return rep;
}

template <typename Scalar>
Report check_compatibility(const CourantContext<Scalar>& ctx, std::size_t count, const SamplingOptions& opt) {
  return check_compatibility(ctx, compatibility_samples(ctx, count, opt));
}

struct TwistSummary {
  Report report;
  bool h4_zero = true;
  bool jacobiator_vanishes = true;  // on every evaluated triple
  std::string h4;
};

/// Jacobiator against the 4-form H4 = dH - 1/2 <R ^ R>, on every coordinate
/// triple and on the given sample triples.
template <typename Scalar>
TwistSummary check_twist(const CourantContext<Scalar>& ctx, const std::vector<AxiomSample<Scalar>>& samples) {
  TwistSummary out;
  auto& rep = out.report;
  rep.title = "twist";
  auto& closed = rep.add("pontrjagin_closed");
  auto& pure = rep.add("jacobiator_one_form");
  auto& match = rep.add("jacobiator_matches_h4");
  auto& detect = rep.add("coordinate_triple_detects_twist");

  const PolyForm<Scalar> p = pontrjagin_form(ctx);
  detail::expect_zero(closed, d(p), "");
  const PolyForm<Scalar> h4 = h4_form(ctx);
  out.h4_zero = h4.is_zero();
  out.h4 = to_string(h4);

  const auto run = [&](const Section<Scalar>& e1, const Section<Scalar>& e2, const Section<Scalar>& e3,
                       const std::string& tag) {
    const auto j = jacobiator(ctx, e1, e2, e3);
    detail::expect_zero(pure, ctx, Section<Scalar>{j.vec, j.mid, PolyForm<Scalar>(ctx.n, 1)}, tag);
    const PolyForm<Scalar> expected = h4_contraction(h4, e1.vec, e2.vec, e3.vec) * Scalar(kJacobiatorTwistSign);
    detail::expect_zero(match, j.form - expected, tag);
    if (!is_zero(j)) out.jacobiator_vanishes = false;
    return !is_zero(j);
  };

  bool seen_nonzero = false;
  for (int a = 0; a < ctx.n; ++a)
    for (int b = a + 1; b < ctx.n; ++b)
      for (int c = b + 1; c < ctx.n; ++c) {
        const std::string tag = "coordinates (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "," +
                                std::to_string(c + 1) + "): ";
        seen_nonzero |= run(vector_section(ctx, PolyField<Scalar>::coordinate(ctx.n, a)),
                            vector_section(ctx, PolyField<Scalar>::coordinate(ctx.n, b)),
                            vector_section(ctx, PolyField<Scalar>::coordinate(ctx.n, c)), tag);
      }
  for (std::size_t i = 0; i < samples.size(); ++i) run(samples[i].e1, samples[i].e2, samples[i].e3, detail::sample_tag(i));

  ++detect.evaluated;
  if (!out.h4_zero && !seen_nonzero) detect.fail("H4 = " + out.h4 + " but every coordinate triple has zero jacobiator");
  if (out.h4_zero && seen_nonzero) detect.fail("H4 = 0 but a coordinate triple has nonzero jacobiator");
  return out;
}

}  // namespace tractor
