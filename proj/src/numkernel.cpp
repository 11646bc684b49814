#include "camsad/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "camsad/parse.hpp"
#include "camsad/polygcd.hpp"

namespace camsad {

namespace {

double poly_norm1(std::span<const Cplx> c) {
  double s = 0;
  for (const Cplx& v : c) s += std::abs(v);
  return s;
}

std::vector<Cplx> derivative(std::span<const Cplx> c) {
  std::vector<Cplx> d;
  for (std::size_t i = 1; i < c.size(); ++i) d.push_back(double(i) * c[i]);
  return d;
}

// Fujiwara-style inclusion radius for all roots.
double root_bound(std::span<const Cplx> c) {
  const std::size_t d = c.size() - 1;
  const double lead = std::abs(c[d]);
  double b = 0;
  for (std::size_t i = 0; i < d; ++i) {
    const double m = std::abs(c[i]) / lead;
    if (m > 0) b = std::max(b, 2.0 * std::pow(m, 1.0 / double(d - i)));
  }
  return std::max(b, 1e-3);
}

std::vector<RootCluster> cluster_values(std::vector<Cplx> roots, double radius) {
  std::vector<RootCluster> out;
  std::sort(roots.begin(), roots.end(), [](Cplx a, Cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<bool> used(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    // grow the cluster transitively
    std::vector<std::size_t> members{i};
    used[i] = true;
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (used[j]) continue;
        const double scale = std::max(1.0, std::abs(roots[members[a]]));
        if (std::abs(roots[j] - roots[members[a]]) <= radius * scale) {
          used[j] = true;
          members.push_back(j);
        }
      }
    }
    Cplx mean = 0;
    for (auto k : members) mean += roots[k];
    mean /= double(members.size());
    double rad = 0;
    for (auto k : members) rad = std::max(rad, std::abs(roots[k] - mean));
    out.push_back({mean, static_cast<int>(members.size()), rad});
  }
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });
  return out;
}

} // namespace

std::vector<RootCluster> univariate_roots(std::span<const Cplx> coeffs_in, const ToleranceProfile& tol) {
  std::vector<Cplx> c(coeffs_in.begin(), coeffs_in.end());
  if (c.empty()) throw std::invalid_argument("zero polynomial has no well-defined roots");
  const double scale = poly_norm1(c);
  if (scale == 0.0) throw std::invalid_argument("zero polynomial has no well-defined roots");
  // strip negligible leading coefficients
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  if (c.size() == 1) return {};

  // exact zero roots split off first
  int zero_mult = 0;
  while (c.size() > 1 && std::abs(c.front()) <= 1e-300) {
    c.erase(c.begin());
    ++zero_mult;
  }

  std::vector<Cplx> roots;
  if (c.size() > 1) {
    const std::size_t d = c.size() - 1;
    std::vector<Cplx> z(d);
    const Cplx center = -c[d - 1] / (double(d) * c[d]);
    const double r = root_bound(c);
    for (std::size_t j = 0; j < d; ++j) {
      const double a = 2.0 * M_PI * (double(j) + 0.35) / double(d) + 0.4;
      z[j] = center + r * Cplx(std::cos(a), std::sin(a));
    }
    auto dc = derivative(c);
    // Aberth-Ehrlich simultaneous iteration
    for (int it = 0; it < 300; ++it) {
      double moved = 0;
      for (std::size_t j = 0; j < d; ++j) {
        const Cplx pv = horner(c, z[j]);
        if (std::abs(pv) == 0.0) continue;
        const Cplx dv = horner(dc, z[j]);
        Cplx ratio = dv == Cplx(0) ? Cplx(0) : pv / dv;
        Cplx sum = 0;
        for (std::size_t k = 0; k < d; ++k)
          if (k != j) sum += 1.0 / (z[j] - z[k]);
        const Cplx denom = 1.0 - ratio * sum;
        Cplx step = denom == Cplx(0) ? ratio : ratio / denom;
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
          step = Cplx(1e-3, 1e-3); // nudge coincident guesses apart
        z[j] -= step;
        moved = std::max(moved, std::abs(step) / std::max(1.0, std::abs(z[j])));
      }
      if (moved < 1e-15) break;
    }
    // Newton polish against the original polynomial
    for (std::size_t j = 0; j < d; ++j) {
      for (int it = 0; it < 64; ++it) {
        const Cplx pv = horner(c, z[j]);
        const Cplx dv = horner(dc, z[j]);
        if (std::abs(dv) == 0.0) break;
        const Cplx step = pv / dv;
        z[j] -= step;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z[j]))) break;
      }
    }
    roots = std::move(z);
  }

  for (int k = 0; k < zero_mult; ++k) roots.push_back(Cplx(0, 0));
  return cluster_values(std::move(roots), tol.eps_cluster);
}

std::vector<Cplx> to_float(const RatUPoly& p) {
  std::vector<Cplx> out;
  out.reserve(p.size());
  for (const auto& c : p) out.push_back(c.to_complex());
  return out;
}

namespace {

// p as dense y-coefficient layers, each layer univariate in x.
std::vector<RatAffine> y_layers(const RatAffine& p) {
  std::vector<RatAffine> out;
  for (const auto& [e, c] : p.terms()) {
    if (out.size() <= static_cast<std::size_t>(e.ey)) out.resize(e.ey + 1);
    out[e.ey].add_term({e.ex, 0}, c);
  }
  while (!out.empty() && out.back().is_zero()) out.pop_back();
  return out;
}

RatAffine bareiss_determinant(std::vector<std::vector<RatAffine>> m) {
  const std::size_t n = m.size();
  if (n == 0) return RatAffine::constant(GaussRat(1));
  RatAffine prev = RatAffine::constant(GaussRat(1));
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
      if (swap_row == n) return RatAffine(); // singular
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        RatAffine num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto dr = divide_exact(num, prev);
        m[i][j] = std::move(dr.quotient); // Bareiss division is exact
      }
      m[i][k] = RatAffine();
    }
    prev = m[k][k];
  }
  RatAffine det = m[n - 1][n - 1];
  return sign < 0 ? -det : det;
}

RatUPoly to_dense_x(const RatAffine& p) {
  RatUPoly out;
  for (const auto& [e, c] : p.terms()) {
    if (out.size() <= static_cast<std::size_t>(e.ex)) out.resize(e.ex + 1, GaussRat());
    out[e.ex] = c;
  }
  if (out.empty()) out.push_back(GaussRat());
  return out;
}

RatUPoly upoly_pow(const RatAffine& base, int e) {
  RatAffine acc = RatAffine::constant(GaussRat(1));
  for (int k = 0; k < e; ++k) acc = acc * base;
  return to_dense_x(acc);
}

} // namespace

RatUPoly resultant_y(const RatAffine& p, const RatAffine& q) {
  auto lp = y_layers(p);
  auto lq = y_layers(q);
  const int dp = static_cast<int>(lp.size()) - 1;
  const int dq = static_cast<int>(lq.size()) - 1;
  if (dp < 0 || dq < 0) return {GaussRat()}; // resultant with the zero polynomial
  if (dp == 0 && dq == 0) return {GaussRat(1)};
  if (dp == 0) return upoly_pow(lp[0], dq);
  if (dq == 0) return upoly_pow(lq[0], dp);

  const int n = dp + dq;
  std::vector<std::vector<RatAffine>> m(n, std::vector<RatAffine>(n));
  for (int r = 0; r < dq; ++r)
    for (int j = 0; j <= dp; ++j) m[r][r + j] = lp[dp - j];
  for (int r = 0; r < dp; ++r)
    for (int j = 0; j <= dq; ++j) m[dq + r][r + j] = lq[dq - j];
  return to_dense_x(bareiss_determinant(std::move(m)));
}

namespace {

// One Newton step on the pair (p, q); returns false at a singular Jacobian.
bool newton2d_step(const CAffine& p, const CAffine& q, const CAffine& px, const CAffine& py,
                   const CAffine& qx, const CAffine& qy, Cplx& x, Cplx& y) {
  const Cplx f1 = p.eval_c(x, y), f2 = q.eval_c(x, y);
  const Cplx a = px.eval_c(x, y), b = py.eval_c(x, y);
  const Cplx c = qx.eval_c(x, y), d = qy.eval_c(x, y);
  const Cplx det = a * d - b * c;
  if (std::abs(det) < 1e-300) return false;
  const Cplx dx = (f1 * d - f2 * b) / det;
  const Cplx dy = (a * f2 - c * f1) / det;
  x -= dx;
  y -= dy;
  return std::isfinite(x.real()) && std::isfinite(x.imag()) && std::isfinite(y.real()) && std::isfinite(y.imag());
}

BivariateSolveResult solve_bivariate_exact(const RatAffine& p, const RatAffine& q, const ToleranceProfile& tol) {
  BivariateSolveResult out;
  if (p.is_zero() && q.is_zero()) {
    out.infinite = true;
    out.common_factor = "0";
    return out;
  }
  if (p.is_zero() || q.is_zero()) {
    const RatAffine& nz = p.is_zero() ? q : p;
    if (!nz.is_constant()) {
      out.infinite = true;
      out.common_factor = "zero component";
    }
    return out;
  }
  RatAffine g = gcd_exact(p, q);
  if (!g.is_constant()) {
    out.infinite = true;
    out.common_factor = print_poly(g);
    return out;
  }
  if (p.is_constant() || q.is_constant()) return out;

  RatUPoly res = resultant_y(p, q);

  const CAffine pf = to_float(p), qf = to_float(q);
  const CAffine px = pf.derivative(0), py = pf.derivative(1);
  const CAffine qx = qf.derivative(0), qy = qf.derivative(1);
  const double scale = std::max(1.0, std::max(pf.norm1(), qf.norm1()));

  std::vector<Cplx> resf = to_float(res);
  // normalize to avoid overflow in the float root finder
  double mx = 0;
  for (const Cplx& c : resf) mx = std::max(mx, std::abs(c));
  if (mx > 0)
    for (Cplx& c : resf) c /= mx;
  if (resf.size() <= 1) return out; // no affine solutions

  auto xroots = univariate_roots(resf, tol);

  for (const auto& xr : xroots) {
    const double xscale = std::pow(std::max(1.0, std::abs(xr.value)),
                                   std::max(1, std::max(pf.degree(), qf.degree())));
    // fiber polynomial in y at x0: prefer the lower-degree nonzero one
    auto fiber_of = [&](const CAffine& f) {
      std::vector<Cplx> fib;
      for (const auto& [e, c] : f.terms()) {
        if (fib.size() <= static_cast<std::size_t>(e.ey)) fib.resize(e.ey + 1, Cplx(0));
        Cplx m = c;
        for (int k = 0; k < e.ex; ++k) m *= xr.value;
        fib[e.ey] += m;
      }
      while (!fib.empty() && std::abs(fib.back()) <= 1e-12 * scale * xscale) fib.pop_back();
      return fib;
    };
    std::vector<Cplx> f1 = fiber_of(pf), f2 = fiber_of(qf);
    // A constant fiber carries no y-information (its value only reflects the
    // error in x0); candidates come from a fiber of positive degree and the
    // final residual on the pair decides acceptance.
    std::vector<Cplx>* fib = nullptr;
    const CAffine* other = nullptr;
    bool other_constant_fiber = false;
    const bool usable1 = f1.size() >= 2, usable2 = f2.size() >= 2;
    if (!usable1 && !usable2) continue;
    if (usable1 && (!usable2 || f1.size() <= f2.size())) {
      fib = &f1;
      other = &qf;
      other_constant_fiber = !usable2;
    } else {
      fib = &f2;
      other = &pf;
      other_constant_fiber = !usable1;
    }

    auto yroots = univariate_roots(*fib, tol);
    int remaining = xr.multiplicity;
    std::vector<PointSolution> fiber_pts;
    for (const auto& yr : yroots) {
      const double ptscale = std::pow(std::max({1.0, std::abs(xr.value), std::abs(yr.value)}),
                                      std::max(other->degree(), 1));
      if (!other_constant_fiber &&
          std::abs(other->eval_c(xr.value, yr.value)) > std::sqrt(tol.eps_eq) * scale * ptscale)
        continue;
      Cplx x = xr.value, y = yr.value;
      for (int it = 0; it < 40; ++it) {
        const double r = std::abs(pf.eval_c(x, y)) + std::abs(qf.eval_c(x, y));
        if (r <= 1e-16 * scale * ptscale) break;
        if (!newton2d_step(pf, qf, px, py, qx, qy, x, y)) break;
      }
      const double resid = std::abs(pf.eval_c(x, y)) + std::abs(qf.eval_c(x, y));
      if (resid > tol.eps_root * scale * ptscale) continue;
      // the polish must stay on this fiber, not drift to a remote solution
      if (std::abs(x - xr.value) > 1e-4 * (1.0 + std::abs(xr.value))) continue;
      fiber_pts.push_back({x, y, yr.multiplicity, std::max(xr.radius, yr.radius)});
    }
    std::sort(fiber_pts.begin(), fiber_pts.end(), [](const PointSolution& a, const PointSolution& b) {
      if (a.y.real() != b.y.real()) return a.y.real() < b.y.real();
      return a.y.imag() < b.y.imag();
    });
    for (auto& pt : fiber_pts) {
      if (remaining <= 0) break;
      pt.multiplicity = std::min(pt.multiplicity, remaining);
      remaining -= pt.multiplicity;
      out.points.push_back(pt);
    }
  }

  // merge points that coincide within the cluster radius
  std::vector<PointSolution> merged;
  for (const auto& pt : out.points) {
    bool absorbed = false;
    for (auto& m : merged) {
      const double s = std::max({1.0, std::abs(m.x), std::abs(m.y)});
      if (std::abs(m.x - pt.x) <= tol.eps_cluster * s && std::abs(m.y - pt.y) <= tol.eps_cluster * s) {
        m.multiplicity += pt.multiplicity;
        m.radius = std::max({m.radius, pt.radius, std::abs(m.x - pt.x), std::abs(m.y - pt.y)});
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back(pt);
  }
  std::sort(merged.begin(), merged.end(), [](const PointSolution& a, const PointSolution& b) {
    if (a.x.real() != b.x.real()) return a.x.real() < b.x.real();
    if (a.x.imag() != b.x.imag()) return a.x.imag() < b.x.imag();
    if (a.y.real() != b.y.real()) return a.y.real() < b.y.real();
    return a.y.imag() < b.y.imag();
  });
  out.points = std::move(merged);
  return out;
}

} // namespace

BivariateSolveResult solve_bivariate(const RatAffine& p, const RatAffine& q, const ToleranceProfile& tol) {
  return solve_bivariate_exact(p, q, tol);
}

BivariateSolveResult solve_bivariate(const CAffine& p, const CAffine& q, const ToleranceProfile& tol) {
  return solve_bivariate_exact(lift_exact(p), lift_exact(q), tol);
}

EigenData eigen_2x2(Cplx a, Cplx b, Cplx c, Cplx d, const ToleranceProfile& tol) {
  EigenData out;
  const Cplx tr = a + d;
  const Cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
  Cplx l1 = (tr + disc) / 2.0;
  Cplx l2 = (tr - disc) / 2.0;
  if (l2.real() < l1.real() || (l2.real() == l1.real() && l2.imag() < l1.imag())) std::swap(l1, l2);
  out.lambda1 = l1;
  out.lambda2 = l2;

  const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  auto direction = [&](Cplx l) -> std::array<Cplx, 2> {
    // kernel of (J - l I); pick the better-conditioned row
    const Cplx r1x = a - l, r2y = d - l;
    std::array<Cplx, 2> v1{b, -r1x};  // orthogonal to (a-l, b)
    std::array<Cplx, 2> v2{-r2y, c};  // orthogonal to (c, d-l)
    const double n1 = std::abs(v1[0]) + std::abs(v1[1]);
    const double n2 = std::abs(v2[0]) + std::abs(v2[1]);
    std::array<Cplx, 2> v = n1 >= n2 ? v1 : v2;
    const double n = std::max(n1, n2);
    if (n <= tol.eps_eq * scale) return {Cplx(1), Cplx(0)}; // scalar matrix: any direction
    const double norm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    return {v[0] / norm, v[1] / norm};
  };
  out.v1 = direction(l1);
  out.v2 = direction(l2);
  if (std::abs(l1 - l2) <= tol.eps_eq * scale) {
    const bool scalar = std::abs(b) <= tol.eps_eq * scale && std::abs(c) <= tol.eps_eq * scale &&
                        std::abs(a - d) <= tol.eps_eq * scale;
    if (scalar) {
      out.v1 = {Cplx(1), Cplx(0)};
      out.v2 = {Cplx(0), Cplx(1)};
    } else {
      out.defective = true;
    }
  }
  return out;
}

EigenData jacobian_eigen(const VectorField<Cplx>& v, Cplx x, Cplx y, const ToleranceProfile& tol) {
  return eigen_2x2(v.P.derivative(0).eval_c(x, y), v.P.derivative(1).eval_c(x, y),
                   v.Q.derivative(0).eval_c(x, y), v.Q.derivative(1).eval_c(x, y), tol);
}

QuotientClass classify_quotient(Cplx lambda, const ToleranceProfile& tol) {
  QuotientClass out;
  const double off_axis = dist_to_positive_reals(lambda);
  if (off_axis > tol.eps_eq) {
    out.kind = QuotientKind::NotPositiveReal;
    out.margin = off_axis;
    return out;
  }
  // scan every p/q with 1 <= p, q <= q_max
  double best = std::numeric_limits<double>::infinity();
  long bp = 0, bq = 0;
  for (long q = 1; q <= tol.q_max; ++q) {
    // nearest numerator for this denominator, clamped to the scan box
    long p0 = std::lround(lambda.real() * double(q));
    for (long p = std::max(1L, p0 - 1); p <= std::min(static_cast<long>(tol.q_max), p0 + 1); ++p) {
      const double d = std::hypot(lambda.real() - double(p) / double(q), lambda.imag());
      if (d < best) {
        best = d;
        bp = p;
        bq = q;
      }
    }
  }
  if (best <= tol.eps_eq && bp > 0) {
    const long g = std::gcd(bp, bq);
    out.kind = QuotientKind::PositiveRational;
    out.p = bp / g;
    out.q = bq / g;
    out.margin = best;
  } else {
    out.kind = QuotientKind::PositiveRealIrrational;
    out.margin = best;
  }
  return out;
}

} // namespace camsad
