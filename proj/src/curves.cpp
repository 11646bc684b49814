#include "camsad/curves.hpp"

#include <algorithm>

#include "camsad/parse.hpp"
#include "camsad/polygcd.hpp"

namespace camsad {

namespace {

// Dedup a batch of candidate projective points.
std::vector<ProjectivePoint> dedup_points(std::vector<ProjectivePoint> pts, double radius) {
  std::vector<ProjectivePoint> out;
  std::sort(pts.begin(), pts.end(), point_less);
  for (const auto& p : pts) {
    bool seen = false;
    for (const auto& q : out)
      if (proj_distance(p, q) <= radius) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(p);
  }
  return out;
}

std::vector<ProjectivePoint> singular_points_impl(const RatHom& f, const ToleranceProfile& tol) {
  if (f.is_zero() || f.declared_degree() == 0)
    throw std::invalid_argument("singular points require a nonconstant curve");
  if (!is_reduced(f)) throw NonIsolatedError("curve has a repeated factor");

  const CHom ff = to_float(f);
  const double fnorm = std::max(1.0, ff.norm1());

  std::vector<ProjectivePoint> pts;
  for (Chart chart : {Chart::Z, Chart::X, Chart::Y}) {
    RatAffine fc = dehomogenize(f, chart);
    if (fc.is_constant()) continue; // the curve misses this chart entirely
    RatAffine px = fc.derivative(0);
    RatAffine py = fc.derivative(1);

    // Candidate systems, each with finitely many solutions for reduced f:
    // a common factor d of the partials is split off (its zeros on the curve
    // come from the pair (d, f); they satisfy px = py = 0 automatically).
    std::vector<std::pair<RatAffine, RatAffine>> systems;
    if (px.is_zero()) {
      systems.emplace_back(fc, py);
    } else if (py.is_zero()) {
      systems.emplace_back(fc, px);
    } else {
      RatAffine d = gcd_exact(px, py);
      if (d.is_constant()) {
        systems.emplace_back(px, py);
      } else {
        systems.emplace_back(divide_exact(px, d).quotient, divide_exact(py, d).quotient);
        systems.emplace_back(d, fc);
      }
    }

    const CAffine pxf = to_float(px), pyf = to_float(py);
    for (const auto& [sa, sb] : systems) {
      auto sol = solve_bivariate(sa, sb, tol);
      if (sol.infinite) throw NonIsolatedError(sol.common_factor);
      for (const auto& s : sol.points) {
        std::array<Cplx, 3> v;
        switch (chart) {
          case Chart::Z: v = {s.x, s.y, Cplx(1)}; break;
          case Chart::X: v = {Cplx(1), s.x, s.y}; break;
          default: v = {s.x, Cplx(1), s.y}; break;
        }
        ProjectivePoint p = normalize_point(v);
        const double pscale =
            fnorm * std::pow(std::max({1.0, std::abs(s.x), std::abs(s.y)}), std::max(1, fc.degree()));
        if (std::abs(ff.eval_c(p.c[0], p.c[1], p.c[2])) <= std::sqrt(tol.eps_eq) * fnorm &&
            std::abs(pxf.eval_c(s.x, s.y)) <= std::sqrt(tol.eps_eq) * pscale &&
            std::abs(pyf.eval_c(s.x, s.y)) <= std::sqrt(tol.eps_eq) * pscale)
          pts.push_back(p);
      }
    }
  }
  return dedup_points(std::move(pts), 10 * tol.eps_cluster);
}

} // namespace

std::vector<ProjectivePoint> curve_singular_points(const RatHom& f, const ToleranceProfile& tol) {
  return singular_points_impl(f, tol);
}
std::vector<ProjectivePoint> curve_singular_points(const CHom& f, const ToleranceProfile& tol) {
  return singular_points_impl(lift_exact(f), tol);
}

namespace curve_detail {

bool node_tangents(const CAffine& f, Cplx cx, Cplx cy, const ToleranceProfile& tol,
                   std::array<std::array<Cplx, 2>, 2>& tangents, double& rel_disc) {
  // quadratic jet a u^2 + 2b uv + c v^2 at the point
  const Cplx a = f.derivative(0).derivative(0).eval_c(cx, cy); // f_xx
  const Cplx b = f.derivative(0).derivative(1).eval_c(cx, cy); // f_xy
  const Cplx c = f.derivative(1).derivative(1).eval_c(cx, cy); // f_yy
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  const double fscale = std::max(1.0, f.norm1()) *
                        std::pow(std::max({1.0, std::abs(cx), std::abs(cy)}), std::max(0, f.degree() - 2));
  rel_disc = 0;
  if (scale <= tol.eps_eq * fscale) return false; // jet vanishes: worse than a node
  const Cplx disc = b * b - a * c;
  rel_disc = std::abs(disc) / (scale * scale);
  if (rel_disc <= tol.eps_eq) return false; // repeated tangent line
  // Viete split keeps both tangent directions stable when a or c is small:
  // with u = b + sqrt(disc) of maximal modulus, the roots of a t^2 + 2bt + c
  // are -u/a and -c/u, giving direction vectors (u, -a) and (c, -u).
  Cplx sq = std::sqrt(disc);
  Cplx u = b + sq;
  if (std::abs(b - sq) > std::abs(u)) u = b - sq;
  tangents[0] = {u, -a};
  tangents[1] = {c, -u};
  for (auto& t : tangents) {
    const double n = std::sqrt(std::norm(t[0]) + std::norm(t[1]));
    t[0] /= n;
    t[1] /= n;
  }
  return true;
}

} // namespace curve_detail

namespace {

NodalReport nodal_impl(const RatHom& f, const ToleranceProfile& tol) {
  NodalReport rep;
  if (f.is_zero() || f.declared_degree() == 0)
    throw std::invalid_argument("nodality requires a nonconstant curve");
  rep.reduced = is_reduced(f);
  if (!rep.reduced) {
    rep.nodal = false;
    rep.reason = "curve is not reduced";
    return rep;
  }
  std::vector<ProjectivePoint> sing;
  try {
    sing = curve_singular_points(f, tol);
  } catch (const NonIsolatedError& e) {
    rep.nodal = false;
    rep.reason = e.what();
    return rep;
  }
  rep.nodal = true;
  const CHom ff = to_float(f);
  for (const auto& p : sing) {
    NodalPoint np;
    np.point = p;
    np.chart = curve_detail::best_chart(p);
    auto [cx, cy] = curve_detail::chart_coords(p, np.chart);
    CAffine fa = dehomogenize(ff, np.chart);
    np.node = curve_detail::node_tangents(fa, cx, cy, tol, np.tangents, np.jet_discriminant);
    if (!np.node) {
      rep.nodal = false;
      if (rep.reason.empty()) rep.reason = "degenerate quadratic jet at a singular point";
    }
    rep.points.push_back(np);
  }
  return rep;
}

} // namespace

NodalReport is_nodal(const RatHom& f, const ToleranceProfile& tol) { return nodal_impl(f, tol); }
NodalReport is_nodal(const CHom& f, const ToleranceProfile& tol) { return nodal_impl(lift_exact(f), tol); }

NodalReport is_nodal_with_infinity(const RatHom& f, const ToleranceProfile& tol) {
  RatHom z = RatHom::monomial({0, 0, 1}, GaussRat(1));
  return nodal_impl(f * z, tol);
}
NodalReport is_nodal_with_infinity(const CHom& f, const ToleranceProfile& tol) {
  RatHom z = RatHom::monomial({0, 0, 1}, GaussRat(1));
  return nodal_impl(lift_exact(f) * z, tol);
}

namespace {

template <class K>
CurveTopology topology_impl(const AlgebraicCurve<K>& curve, const ToleranceProfile& tol) {
  const RatHom f = [&] {
    if constexpr (CoeffOps<K>::exact) return curve.F;
    else return lift_exact(curve.F);
  }();
  NodalReport rep = nodal_impl(f, tol);
  if (!rep.nodal) throw std::invalid_argument("topology requires a nodal curve: " + rep.reason);

  const std::size_t k = curve.components.size();
  CurveTopology topo;
  topo.delta = static_cast<int>(rep.points.size());
  topo.own_nodes.assign(k, 0);
  topo.genus.assign(k, 0);

  for (const auto& np : rep.points) {
    // which components pass through the node
    std::vector<std::size_t> through;
    for (std::size_t i = 0; i < k; ++i) {
      const CHom ci = to_float(curve.components[i]);
      if (curve_detail::relative_value(ci, np.point) <= std::sqrt(tol.eps_eq)) through.push_back(i);
    }
    if (through.size() == 1) topo.own_nodes[through[0]] += 1;
    // crossings of two distinct components contribute to delta only
  }

  int chi = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const int m = curve.components[i].declared_degree();
    topo.genus[i] = (m - 1) * (m - 2) / 2 - topo.own_nodes[i];
    chi += 2 - 2 * topo.genus[i];
  }
  topo.chi = chi - topo.delta;
  topo.milnor_sum = topo.delta; // one per node
  topo.expected_cs = 3L * curve.degree() - topo.chi + topo.milnor_sum;
  return topo;
}

} // namespace

CurveTopology topology_of_nodal(const AlgebraicCurve<GaussRat>& curve, const ToleranceProfile& tol) {
  return topology_impl(curve, tol);
}
CurveTopology topology_of_nodal(const AlgebraicCurve<Cplx>& curve, const ToleranceProfile& tol) {
  return topology_impl(curve, tol);
}

} // namespace camsad
