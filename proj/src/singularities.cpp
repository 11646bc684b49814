#include "camsad/singularities.hpp"

#include <algorithm>

#include "camsad/parse.hpp"
#include "camsad/polygcd.hpp"

namespace camsad {

namespace {

struct RawPoint {
  ProjectivePoint p;
  Chart chart;
  Cplx cx, cy;
  int multiplicity;
  double radius;
};

ProjectivePoint embed(Chart chart, Cplx x, Cplx y) {
  switch (chart) {
    case Chart::Z: return normalize_point({x, y, Cplx(1)});
    case Chart::X: return normalize_point({Cplx(1), x, y});
    default: return normalize_point({x, Cplx(1), y});
  }
}

// |cos| of the complex angle between two direction vectors.
double dir_cosine(const std::array<Cplx, 2>& u, const std::array<Cplx, 2>& v) {
  const Cplx dot = u[0] * std::conj(v[0]) + u[1] * std::conj(v[1]);
  const double nu = std::sqrt(std::norm(u[0]) + std::norm(u[1]));
  const double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  if (nu == 0 || nv == 0) return 0;
  return std::abs(dot) / (nu * nv);
}

std::vector<Singularity> find_impl(const HomOneForm<GaussRat>& form, const ToleranceProfile& tol) {
  // reject forms without projective content
  {
    auto cross = form.radial_cross();
    if (cross[0].is_zero() && cross[1].is_zero() && cross[2].is_zero())
      throw NonIsolatedError("radial form: every point is singular");
  }

  std::vector<RawPoint> raw;
  for (Chart chart : {Chart::Z, Chart::X, Chart::Y}) {
    VectorField<GaussRat> field = restrict_to_chart(form, chart);
    if (field.is_zero()) throw NonIsolatedError("chart field vanishes identically");
    RatAffine g = gcd_exact(field.P, field.Q);
    if (!g.is_constant()) throw NonIsolatedError(print_poly(g));
    auto sol = solve_bivariate(field.P, field.Q, tol);
    if (sol.infinite) throw NonIsolatedError(sol.common_factor);
    for (const auto& s : sol.points)
      raw.push_back({embed(chart, s.x, s.y), chart, s.x, s.y, s.multiplicity, s.radius});
  }

  // projective dedup; keep the best-conditioned chart representative
  std::vector<Singularity> out;
  std::vector<bool> used(raw.size(), false);
  std::sort(raw.begin(), raw.end(), [](const RawPoint& a, const RawPoint& b) { return point_less(a.p, b.p); });
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    std::vector<std::size_t> members{i};
    used[i] = true;
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t j = 0; j < raw.size(); ++j) {
        if (used[j]) continue;
        if (proj_distance(raw[members[a]].p, raw[j].p) <= 10 * tol.eps_cluster) {
          used[j] = true;
          members.push_back(j);
        }
      }
    const Chart best = curve_detail::best_chart(raw[members[0]].p);
    const RawPoint* rep = nullptr;
    for (auto k : members)
      if (raw[k].chart == best) rep = &raw[k];
    Singularity s;
    s.chart = best;
    if (rep) {
      s.point = rep->p;
      s.chart_x = rep->cx;
      s.chart_y = rep->cy;
      s.multiplicity = rep->multiplicity;
      s.radius = rep->radius;
    } else {
      const RawPoint& any = raw[members[0]];
      s.point = any.p;
      auto [cx, cy] = curve_detail::chart_coords(any.p, best);
      s.chart_x = cx;
      s.chart_y = cy;
      s.multiplicity = any.multiplicity;
      s.radius = any.radius;
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const Singularity& a, const Singularity& b) { return point_less(a.point, b.point); });
  return out;
}

} // namespace

std::vector<Singularity> find_singularities(const HomOneForm<GaussRat>& form, const ToleranceProfile& tol) {
  return find_impl(form, tol);
}

std::vector<Singularity> find_singularities(const HomOneForm<Cplx>& form, const ToleranceProfile& tol) {
  return find_impl(HomOneForm<GaussRat>::unchecked(lift_exact(form.P()), lift_exact(form.Q()),
                                                   lift_exact(form.R())),
                   tol);
}

void classify_singularity(const HomOneForm<Cplx>& form, Singularity& s, const ToleranceProfile& tol) {
  VectorField<Cplx> field = restrict_to_chart(form, s.chart);
  s.eigen = jacobian_eigen(field, s.chart_x, s.chart_y, tol);

  const double jscale = std::max({1.0, std::abs(s.eigen.lambda1), std::abs(s.eigen.lambda2)});
  s.degeneracy_margin = std::abs(s.eigen.lambda1 * s.eigen.lambda2) / (jscale * jscale);
  if (s.degeneracy_margin <= tol.eps_eq) {
    s.cls = SingClass::Degenerate;
    s.quotient = Cplx(0, 0);
    return;
  }
  s.quotient = s.eigen.lambda2 / s.eigen.lambda1;
  s.qclass = classify_quotient(s.quotient, tol);
  switch (s.qclass.kind) {
    case QuotientKind::NotPositiveReal: s.cls = SingClass::Poincare; break;
    case QuotientKind::PositiveRealIrrational: s.cls = SingClass::Simple; break;
    default: s.cls = SingClass::NonDegenerate; break;
  }
}

namespace {

std::vector<Singularity> analyze_impl(const HomOneForm<GaussRat>& exact_form,
                                      const HomOneForm<Cplx>& float_form, const ToleranceProfile& tol) {
  auto sings = find_impl(exact_form, tol);
  for (auto& s : sings) classify_singularity(float_form, s, tol);
  // record complex-conjugate pairings (real foliations)
  for (std::size_t i = 0; i < sings.size(); ++i) {
    if (sings[i].conjugate_of >= 0) continue;
    const ProjectivePoint cp = conjugate(sings[i].point);
    for (std::size_t j = i + 1; j < sings.size(); ++j) {
      if (sings[j].conjugate_of < 0 && proj_distance(cp, sings[j].point) <= 10 * tol.eps_cluster) {
        sings[i].conjugate_of = static_cast<int>(j);
        sings[j].conjugate_of = static_cast<int>(i);
        break;
      }
    }
  }
  return sings;
}

HomOneForm<Cplx> to_float_form(const HomOneForm<GaussRat>& f) {
  return HomOneForm<Cplx>::unchecked(to_float(f.P()), to_float(f.Q()), to_float(f.R()));
}

} // namespace

std::vector<Singularity> analyze_singularities(const HomOneForm<GaussRat>& form, const ToleranceProfile& tol) {
  return analyze_impl(form, to_float_form(form), tol);
}
std::vector<Singularity> analyze_singularities(const HomOneForm<Cplx>& form, const ToleranceProfile& tol) {
  return analyze_impl(lift_exact(form), form, tol);
}

Cplx quotient_in_chart(const HomOneForm<Cplx>& form, const ProjectivePoint& p, Chart chart,
                       const ToleranceProfile& tol) {
  VectorField<Cplx> field = restrict_to_chart(form, chart);
  auto [cx, cy] = curve_detail::chart_coords(p, chart);
  EigenData e = jacobian_eigen(field, cx, cy, tol);
  return e.lambda2 / e.lambda1;
}

namespace {

// Tangency assignment between eigendirections and curve branches.
// threshold: |cos| must exceed 1 - sqrt(eps_eq) for a match.
void match_tangents(Singularity& s, const ToleranceProfile& tol) {
  const double thresh = 1.0 - std::sqrt(tol.eps_eq);
  const std::array<std::array<Cplx, 2>, 2> slots{s.eigen.v1, s.eigen.v2};
  std::vector<int> owner(2, -1); // slot -> branch
  for (std::size_t b = 0; b < s.branches.size(); ++b) {
    double c0 = dir_cosine(s.branches[b].dir, slots[0]);
    double c1 = dir_cosine(s.branches[b].dir, slots[1]);
    const int pick = c0 >= c1 ? 0 : 1;
    const double best = std::max(c0, c1);
    const double other = std::min(c0, c1);
    s.branches[b].matched_slot = pick;
    s.branches[b].cosine = best;
    if (best <= thresh) s.ambiguous_tangency = true;   // no eigendirection matches
    if (other > thresh) s.ambiguous_tangency = true;   // both match the same branch
    if (owner[pick] >= 0) s.ambiguous_tangency = true; // two branches claim one slot
    owner[pick] = static_cast<int>(b);
  }
  if (s.eigen.defective && !s.branches.empty()) s.ambiguous_tangency = true;
}

template <class K>
SingularityCensus census_impl(const HomOneForm<GaussRat>& exact_form, const HomOneForm<Cplx>& float_form,
                              const AlgebraicCurve<K>* curve, const ToleranceProfile& tol) {
  SingularityCensus c;
  c.n = exact_form.foliation_degree();
  c.expected_count = c.n * c.n + c.n + 1;
  c.sings = analyze_impl(exact_form, float_form, tol);
  for (const auto& s : c.sings) c.total_multiplicity += s.multiplicity;

  if (!curve) {
    for (auto& s : c.sings) {
      s.type = SingType::III;
      ++c.n_type_iii;
      c.any_degenerate = c.any_degenerate || s.cls == SingClass::Degenerate;
    }
    return c;
  }

  c.n_type_ii.assign(curve->components.size(), 0);

  // invariance and nodality preconditions
  CHom curve_f = [&] {
    if constexpr (CoeffOps<K>::exact) return to_float(curve->F);
    else return curve->F;
  }();
  {
    auto witness = check_curve_invariant(float_form, curve_f, tol.eps_eq);
    if (!witness) {
      c.curve_invariant = false;
      c.diagnostics = "curve is not invariant for the foliation";
    }
    NodalReport nodal = is_nodal(curve_f, tol);
    if (!nodal.nodal) {
      c.curve_nodal = false;
      c.diagnostics += c.diagnostics.empty() ? "" : "; ";
      c.diagnostics += "curve is not nodal: " + nodal.reason;
    }
  }

  std::vector<ProjectivePoint> curve_sing;
  try {
    curve_sing = curve_singular_points(curve_f, tol);
  } catch (const std::exception&) {
    curve_sing.clear(); // non-nodal verdict already recorded
  }

  std::vector<CHom> comps;
  std::vector<CAffine> comp_charts[3];
  for (const auto& g : curve->components) {
    CHom gf = [&] {
      if constexpr (CoeffOps<K>::exact) return to_float(g);
      else return g;
    }();
    comps.push_back(gf);
  }
  for (int ch = 0; ch < 3; ++ch)
    for (const auto& g : comps) comp_charts[ch].push_back(dehomogenize(g, static_cast<Chart>(ch)));

  for (auto& s : c.sings) {
    c.any_degenerate = c.any_degenerate || s.cls == SingClass::Degenerate;
    // components passing through the point
    std::vector<int> through;
    for (std::size_t i = 0; i < comps.size(); ++i)
      if (curve_detail::relative_value(comps[i], s.point) <= std::sqrt(tol.eps_eq)) through.push_back(static_cast<int>(i));

    bool on_curve_sing = false;
    for (const auto& q : curve_sing)
      if (proj_distance(s.point, q) <= 100 * tol.eps_cluster) {
        on_curve_sing = true;
        break;
      }

    if (through.empty()) {
      s.type = SingType::III;
      ++c.n_type_iii;
      continue;
    }

    const int ci = static_cast<int>(s.chart);
    if (on_curve_sing || through.size() >= 2) {
      s.type = SingType::I;
      ++c.n_type_i;
      if (through.size() >= 2) {
        // a crossing of two components: each contributes its tangent line
        for (int idx : through) {
          const CAffine& g = comp_charts[ci][idx];
          BranchTangent bt;
          bt.component = idx;
          bt.dir = {-g.derivative(1).eval_c(s.chart_x, s.chart_y),
                    g.derivative(0).eval_c(s.chart_x, s.chart_y)};
          s.branches.push_back(bt);
        }
      } else {
        // self-node of a single component: tangents from the quadratic jet
        std::array<std::array<Cplx, 2>, 2> tg;
        double rd = 0;
        if (curve_detail::node_tangents(comp_charts[ci][through[0]], s.chart_x, s.chart_y, tol, tg, rd)) {
          for (const auto& d : tg) {
            BranchTangent bt;
            bt.component = through[0];
            bt.dir = d;
            s.branches.push_back(bt);
          }
        } else {
          s.ambiguous_tangency = true;
        }
      }
    } else {
      s.type = SingType::II;
      s.component = through[0];
      ++c.n_type_ii[through[0]];
      const CAffine& g = comp_charts[ci][through[0]];
      BranchTangent bt;
      bt.component = through[0];
      bt.dir = {-g.derivative(1).eval_c(s.chart_x, s.chart_y),
                g.derivative(0).eval_c(s.chart_x, s.chart_y)};
      s.branches.push_back(bt);
    }
    match_tangents(s, tol);
    c.any_ambiguous = c.any_ambiguous || s.ambiguous_tangency;
  }
  return c;
}

} // namespace

SingularityCensus census(const HomOneForm<GaussRat>& form, const AlgebraicCurve<GaussRat>& curve,
                         const ToleranceProfile& tol) {
  return census_impl<GaussRat>(form, to_float_form(form), &curve, tol);
}
SingularityCensus census(const HomOneForm<Cplx>& form, const AlgebraicCurve<Cplx>& curve,
                         const ToleranceProfile& tol) {
  return census_impl<Cplx>(lift_exact(form), form, &curve, tol);
}
SingularityCensus census_plain(const HomOneForm<GaussRat>& form, const ToleranceProfile& tol) {
  return census_impl<GaussRat>(form, to_float_form(form), nullptr, tol);
}
SingularityCensus census_plain(const HomOneForm<Cplx>& form, const ToleranceProfile& tol) {
  return census_impl<Cplx>(lift_exact(form), form, nullptr, tol);
}

} // namespace camsad
