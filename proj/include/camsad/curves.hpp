#pragma once

#include <optional>
#include <string>
#include <vector>

#include "camsad/numkernel.hpp"
#include "camsad/projective.hpp"

namespace camsad {

// A plane algebraic curve with a user-supplied factorization into components.
// The tool never factors polynomials itself; single-component curves are the
// degenerate case of the list.
template <class K>
struct AlgebraicCurve {
  Hom<K> F;
  std::vector<Hom<K>> components;

  int degree() const { return F.declared_degree(); }
};

template <class K>
AlgebraicCurve<K> make_curve(std::vector<Hom<K>> components) {
  if (components.empty()) throw std::invalid_argument("a curve needs at least one component");
  Hom<K> f = components[0];
  for (std::size_t i = 1; i < components.size(); ++i) f = f * components[i];
  if (f.is_zero() || f.declared_degree() == 0)
    throw std::invalid_argument("curve components must be nonconstant");
  return AlgebraicCurve<K>{std::move(f), std::move(components)};
}

// Cofactor of an invariant polynomial: P G_x + Q G_y = K G. Present exactly
// when the division leaves no remainder; deg K <= degree_bound - 1 then.
template <class K>
std::optional<Affine<K>> cofactor(const VectorField<K>& v, const Affine<K>& g, double eps = 1e-8) {
  if (g.degree() <= 0) throw std::invalid_argument("cofactor requires a nonconstant polynomial");
  Affine<K> d = v.P * g.derivative(0) + v.Q * g.derivative(1);
  auto dr = divide_exact(d, g);
  if constexpr (CoeffOps<K>::exact) {
    if (!dr.remainder.is_zero()) return std::nullopt;
  } else {
    const double scale = std::max({1.0, d.max_abs(), g.max_abs() * v.max_abs()});
    if (dr.remainder.max_abs() > eps * scale) return std::nullopt;
  }
  return dr.quotient;
}

// Singular points of the curve: common zeros of the partial derivatives that
// also lie on the curve (Euler's relation makes the third partial redundant
// away from the removed line, so each chart solves two partials and filters
// by the curve value). Throws NonIsolatedError for non-reduced input.
std::vector<ProjectivePoint> curve_singular_points(const RatHom& f, const ToleranceProfile& tol);
std::vector<ProjectivePoint> curve_singular_points(const CHom& f, const ToleranceProfile& tol);

struct NodalPoint {
  ProjectivePoint point;
  Chart chart;                      // chart of the local computation
  bool node = false;
  std::array<std::array<Cplx, 2>, 2> tangents{}; // chart directions of the two branches
  double jet_discriminant = 0;      // relative size; zero jet means worse than a node
};

struct NodalReport {
  bool nodal = false;    // true iff reduced and every singular point is a node
  bool reduced = false;
  std::vector<NodalPoint> points;
  std::string reason;
};

NodalReport is_nodal(const RatHom& f, const ToleranceProfile& tol);
NodalReport is_nodal(const CHom& f, const ToleranceProfile& tol);

// Same test applied to F*Z, the curve together with the line at infinity.
NodalReport is_nodal_with_infinity(const RatHom& f, const ToleranceProfile& tol);
NodalReport is_nodal_with_infinity(const CHom& f, const ToleranceProfile& tol);

// Topology of a nodal curve: node counts, per-component genus, Euler
// characteristic, and the value 3 deg - chi + sum of Milnor numbers, which
// equals deg^2 with the one-per-node Milnor convention.
struct CurveTopology {
  int delta = 0;                 // total node count
  std::vector<int> own_nodes;    // nodes internal to one component
  std::vector<int> genus;        // per component
  int chi = 0;
  int milnor_sum = 0;
  long expected_cs = 0;
};

CurveTopology topology_of_nodal(const AlgebraicCurve<GaussRat>& curve, const ToleranceProfile& tol);
CurveTopology topology_of_nodal(const AlgebraicCurve<Cplx>& curve, const ToleranceProfile& tol);

// Local data shared with the singularity census.
namespace curve_detail {

// Evaluation at a normalized projective point, relative to the coefficient norm.
template <class K>
double relative_value(const Hom<K>& f, const ProjectivePoint& p) {
  const double n1 = f.norm1();
  if (n1 == 0) return 0;
  return std::abs(f.eval_c(p.c[0], p.c[1], p.c[2])) / n1;
}

// Chart whose removed line is farthest from the point.
inline Chart best_chart(const ProjectivePoint& p) {
  double bx = std::abs(p.c[0]), by = std::abs(p.c[1]), bz = std::abs(p.c[2]);
  if (bz >= bx && bz >= by) return Chart::Z;
  if (bx >= by) return Chart::X;
  return Chart::Y;
}

inline std::pair<Cplx, Cplx> chart_coords(const ProjectivePoint& p, Chart chart) {
  switch (chart) {
    case Chart::Z: return {p.c[0] / p.c[2], p.c[1] / p.c[2]};
    case Chart::X: return {p.c[1] / p.c[0], p.c[2] / p.c[0]};
    default: return {p.c[0] / p.c[1], p.c[2] / p.c[1]};
  }
}

// Tangent directions of the two branches of a nodal singular point of f,
// from the quadratic jet in the given chart. Returns false for a degenerate
// jet (not a node).
bool node_tangents(const CAffine& f, Cplx cx, Cplx cy, const ToleranceProfile& tol,
                   std::array<std::array<Cplx, 2>, 2>& tangents, double& rel_disc);

} // namespace curve_detail

} // namespace camsad
