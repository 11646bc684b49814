#pragma once

#include <vector>

#include "camsad/poly.hpp"

namespace camsad {

// Exact gcd over the Gaussian rationals. Bivariate gcd runs a primitive
// pseudo-remainder sequence in x with univariate content gcds in y.
// Results are normalized monic in the graded-lex leading term.

namespace detail {

// p as a dense vector of y-only polynomials indexed by the x-exponent.
inline std::vector<RatAffine> x_layers(const RatAffine& p) {
  std::vector<RatAffine> out;
  for (const auto& [e, c] : p.terms()) {
    if (out.size() <= static_cast<std::size_t>(e.ex)) out.resize(e.ex + 1);
    out[e.ex].add_term({0, e.ey}, c);
  }
  while (!out.empty() && out.back().is_zero()) out.pop_back();
  return out;
}

inline RatAffine from_x_layers(const std::vector<RatAffine>& layers) {
  RatAffine out;
  for (std::size_t i = 0; i < layers.size(); ++i)
    for (const auto& [e, c] : layers[i].terms()) out.add_term({static_cast<int>(i), e.ey}, c);
  return out;
}

inline bool is_univariate_in(const RatAffine& p, int var) {
  for (const auto& [e, c] : p.terms())
    if ((var == 0 ? e.ey : e.ex) != 0) return false;
  return true;
}

// Euclid over the field of Gaussian rationals; input must be univariate in var.
inline RatAffine gcd_univariate(RatAffine a, RatAffine b, int var) {
  auto monic = [](RatAffine p) {
    if (p.is_zero()) return p;
    return p.scaled(p.leading().second.inverse());
  };
  a = monic(a);
  b = monic(b);
  while (!b.is_zero()) {
    RatAffine r = divide_exact(a, b).remainder;
    a = b;
    b = monic(r);
  }
  (void)var;
  return a;
}

} // namespace detail

// gcd of bivariate polynomials over exact coefficients, monic-normalized.
// gcd(p, 0) = normalized p; gcd(0, 0) = 0.
inline RatAffine gcd_exact(const RatAffine& p, const RatAffine& q) {
  auto monic = [](const RatAffine& r) {
    if (r.is_zero()) return r;
    return r.scaled(r.leading().second.inverse());
  };
  if (p.is_zero()) return monic(q);
  if (q.is_zero()) return monic(p);
  if (p.is_constant() || q.is_constant()) return RatAffine::constant(GaussRat(1));

  if (detail::is_univariate_in(p, 0) && detail::is_univariate_in(q, 0))
    return detail::gcd_univariate(p, q, 0);
  if (detail::is_univariate_in(p, 1) && detail::is_univariate_in(q, 1))
    return detail::gcd_univariate(p, q, 1);

  // Treat both as polynomials in x over Q(i)[y].
  auto la = detail::x_layers(p);
  auto lb = detail::x_layers(q);

  auto content = [](const std::vector<RatAffine>& layers) {
    RatAffine c;
    for (const auto& l : layers) c = gcd_exact(c, l);
    return c;
  };
  auto divide_layers = [](std::vector<RatAffine> layers, const RatAffine& d) {
    for (auto& l : layers) {
      auto dr = divide_exact(l, d);
      l = dr.quotient;
    }
    return layers;
  };

  RatAffine ca = content(la);
  RatAffine cb = content(lb);
  la = divide_layers(la, ca);
  lb = divide_layers(lb, cb);

  // pseudo-remainder of a by b in x
  auto prem = [](std::vector<RatAffine> a, const std::vector<RatAffine>& b) {
    const RatAffine& lcb = b.back();
    const int db = static_cast<int>(b.size()) - 1;
    while (!a.empty() && static_cast<int>(a.size()) - 1 >= db) {
      RatAffine lca = a.back();
      for (auto& l : a) l = l * lcb;
      const int da = static_cast<int>(a.size()) - 1;
      for (int j = 0; j <= db; ++j) a[da - db + j] -= lca * b[j];
      a.pop_back();
      while (!a.empty() && a.back().is_zero()) a.pop_back();
    }
    return a;
  };

  if (la.size() < lb.size()) std::swap(la, lb);
  while (!lb.empty()) {
    auto r = prem(la, lb);
    la = std::move(lb);
    if (r.empty()) {
      lb.clear();
    } else {
      RatAffine cr = content(r);
      lb = divide_layers(r, cr);
    }
  }
  RatAffine pp = detail::from_x_layers(la);
  RatAffine result = gcd_exact(ca, cb) * pp;
  return monic(result);
}

// gcd over the components of a list; convenience for saturation checks.
inline RatAffine gcd_exact(const std::vector<RatAffine>& ps) {
  RatAffine g;
  for (const auto& p : ps) g = gcd_exact(g, p);
  return g;
}

// A homogeneous polynomial is reduced (squarefree) iff it shares no factor
// with its partial derivatives. Z-powers are peeled off before the affine gcd.
inline bool is_reduced(const RatHom& f) {
  if (f.is_zero()) return false;
  int zmin = f.declared_degree();
  for (const auto& [e, c] : f.terms()) zmin = std::min(zmin, e.ez);
  if (zmin >= 2) return false;
  RatAffine a = dehomogenize(f, Chart::Z);
  RatAffine g = gcd_exact(a, a.derivative(0));
  g = gcd_exact(g, a.derivative(1));
  if (!g.is_constant()) return false;
  if (zmin == 1) {
    // F = Z * G: also need Z not to divide G, which the zmin scan settled,
    // and G itself reduced, which the affine gcd covered.
    return true;
  }
  return true;
}

} // namespace camsad
