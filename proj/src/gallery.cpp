#include "camsad/gallery.hpp"

#include <cmath>

namespace camsad {

namespace {

CHom kolmogorov_component(int n, Cplx cx, Cplx cy, Cplx cz, int skip) {
  // m * (cx x^{n-1} + cy y^{n-1} + cz z^{n-1}) where m is the product of the
  // two coordinates other than `skip`
  Exp3 me{1, 1, 1};
  (skip == 0 ? me.ex : skip == 1 ? me.ey : me.ez) = 0;
  CHom out(n + 1);
  auto put = [&](Cplx c, int var) {
    if (c == Cplx(0)) return;
    Exp3 e = me;
    (var == 0 ? e.ex : var == 1 ? e.ey : e.ez) += n - 1;
    out.add_term(e, c);
  };
  put(cx, 0);
  put(cy, 1);
  put(cz, 2);
  return out;
}

} // namespace

KolmogorovFoliation kolmogorov(const KolmogorovParams& params) {
  const int n = params.n;
  if (n < 2) throw std::invalid_argument("the family needs degree n >= 2");
  const Cplx a0 = params.a0, b = params.b;
  const Cplx one(1, 0);
  if (std::abs(a0 - one) < 1e-12 || std::abs(a0) < 1e-12)
    throw std::invalid_argument("a0 must keep 1, a0, 1/a0 distinct");

  KolmogorovFoliation out;
  out.params = params;
  // P = yz (b x^{n-1} - y^{n-1} + z^{n-1})
  // Q = xz (x^{n-1} - b y^{n-1} - a0 z^{n-1})
  // R = xy (-(b+1) x^{n-1} + (b+1) y^{n-1} + (a0-1) z^{n-1})
  CHom p = kolmogorov_component(n, b, Cplx(-1), Cplx(1), 0);
  CHom q = kolmogorov_component(n, Cplx(1), -b, -a0, 1);
  CHom r = kolmogorov_component(n, -(b + one), b + one, a0 - one, 2);
  out.form = HomOneForm<Cplx>::make(std::move(p), std::move(q), std::move(r));

  Fixture& fx = out.fixture;
  fx.corners.push_back({"corner [0:0:1]", normalize_point({0, 0, 1}), {a0, one / a0}, -1});
  fx.corners.push_back({"corner [0:1:0]", normalize_point({0, 1, 0}), {one + b, one / (one + b)}, -1});
  fx.corners.push_back({"corner [1:0:0]", normalize_point({1, 0, 0}), {one + b, one / (one + b)}, -1});

  const double nm1 = double(n - 1);
  const Cplx xi = std::exp(Cplx(0, 2.0 * M_PI / nm1));
  const Cplx a0_root = std::pow(a0, 1.0 / nm1); // principal branch
  const Cplx along_x = -(a0 + b) / nm1;
  const Cplx along_y = -(one + a0 * b) / (nm1 * a0);
  const Cplx along_z = -(one - b) / (nm1 * (one + b));
  for (int i = 1; i <= n - 1; ++i) {
    const Cplx xi_i = std::pow(xi, double(i));
    fx.type_ii.push_back({"on x=0", normalize_point({0, xi, xi_i}), {along_x, one / along_x}, 0});
    fx.type_ii.push_back({"on y=0", normalize_point({xi * a0_root, 0, xi_i}), {along_y, one / along_y}, 1});
    fx.type_ii.push_back({"on z=0", normalize_point({xi, xi_i, 0}), {along_z, one / along_z}, 2});
  }
  if (std::abs(b) == 0.0) {
    for (int i = 1; i <= n - 1; ++i)
      for (int j = 1; j <= n - 1; ++j) {
        const Cplx x = std::pow(xi, double(i)) * a0_root;
        const Cplx y = std::pow(xi, double(j));
        fx.type_iii.push_back({"affine, off the axes", normalize_point({x, y, 1}), {a0, one / a0}, -1});
      }
  }
  return out;
}

HomOneForm<GaussRat> jouanolou(int n) {
  if (n < 2) throw std::invalid_argument("degree must be at least 2");
  RatAffine P, Q;
  P.add_term({0, n}, GaussRat(1));      // y^n
  P.add_term({n + 1, 0}, GaussRat(-1)); // -x^{n+1}
  Q.add_term({0, 0}, GaussRat(1));      // 1
  Q.add_term({n, 1}, GaussRat(-1));     // -x^n y
  VectorField<GaussRat> v(std::move(P), std::move(Q), n + 1);
  HomOneForm<GaussRat> big = projectivize(v);
  RatHom z = RatHom::monomial({0, 0, 1}, GaussRat(1));
  auto dp = divide_exact(big.P(), z);
  auto dq = divide_exact(big.Q(), z);
  auto dr = divide_exact(big.R(), z);
  if (!dp.remainder.is_zero() || !dq.remainder.is_zero() || !dr.remainder.is_zero())
    throw std::logic_error("expected the projective extension to be divisible by Z");
  return HomOneForm<GaussRat>::make(dp.quotient, dq.quotient, dr.quotient);
}

} // namespace camsad
