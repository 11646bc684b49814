#pragma once

#include <optional>

#include "camsad/poly.hpp"

namespace camsad {

// Planar polynomial vector field (P, Q) living in the space of fields of
// degree at most degree_bound. The bound matters: the projective extension
// depends on it, not on max(deg P, deg Q).
template <class K>
struct VectorField {
  Affine<K> P, Q;
  int degree_bound;

  VectorField() : degree_bound(0) {}
  VectorField(Affine<K> p, Affine<K> q, int n) : P(std::move(p)), Q(std::move(q)), degree_bound(n) {
    if (n < 0 || P.degree() > n || Q.degree() > n)
      throw std::invalid_argument("degree bound below the field's degree");
  }

  bool is_zero() const { return P.is_zero() && Q.is_zero(); }
  double max_abs() const { return std::max(P.max_abs(), Q.max_abs()); }
};

// omega = dx_coeff dx + dy_coeff dy with dy_coeff = P, dx_coeff = -Q,
// so that omega(X) = 0 for the paired field.
template <class K>
struct AffineOneForm {
  Affine<K> dx_coeff, dy_coeff;

  static AffineOneForm from_field(const VectorField<K>& v) { return {-v.Q, v.P}; }
  VectorField<K> to_field(int degree_bound) const { return {dy_coeff, -dx_coeff, degree_bound}; }
};

// Homogeneous 1-form P dX + Q dY + R dZ with coefficients of a common degree
// satisfying X*P + Y*Q + Z*R = 0. Equality up to a nonzero scalar represents
// the same foliation.
template <class K>
class HomOneForm {
 public:
  HomOneForm() : p_(1), q_(1), r_(1) {}

  // Checked constructor; eps bounds the allowed relative violation of the
  // projective condition for float coefficients (exact mode requires zero).
  static HomOneForm make(Hom<K> p, Hom<K> q, Hom<K> r, double eps = 1e-9) {
    HomOneForm f = unchecked(std::move(p), std::move(q), std::move(r));
    Hom<K> g = f.euler_contraction();
    if constexpr (CoeffOps<K>::exact) {
      if (!g.is_zero()) throw ProjectiveConditionError();
    } else {
      if (g.max_abs() > eps * std::max(1.0, f.max_abs())) throw ProjectiveConditionError();
    }
    return f;
  }

  static HomOneForm unchecked(Hom<K> p, Hom<K> q, Hom<K> r) {
    if (p.declared_degree() != q.declared_degree() || p.declared_degree() != r.declared_degree())
      throw std::invalid_argument("form coefficients must share one degree");
    HomOneForm f;
    f.p_ = std::move(p);
    f.q_ = std::move(q);
    f.r_ = std::move(r);
    return f;
  }

  const Hom<K>& P() const { return p_; }
  const Hom<K>& Q() const { return q_; }
  const Hom<K>& R() const { return r_; }

  int coeff_degree() const { return p_.declared_degree(); }
  int foliation_degree() const { return coeff_degree() - 1; }
  bool is_zero() const { return p_.is_zero() && q_.is_zero() && r_.is_zero(); }
  double max_abs() const { return std::max({p_.max_abs(), q_.max_abs(), r_.max_abs()}); }

  // X*P + Y*Q + Z*R
  Hom<K> euler_contraction() const {
    Hom<K> x = Hom<K>::monomial({1, 0, 0}, CoeffOps<K>::one());
    Hom<K> y = Hom<K>::monomial({0, 1, 0}, CoeffOps<K>::one());
    Hom<K> z = Hom<K>::monomial({0, 0, 1}, CoeffOps<K>::one());
    return x * p_ + y * q_ + z * r_;
  }

  // (P,Q,R) x (X,Y,Z); identically zero exactly when the form is a scalar
  // multiple of the radial form and carries no projective content.
  std::array<Hom<K>, 3> radial_cross() const {
    Hom<K> x = Hom<K>::monomial({1, 0, 0}, CoeffOps<K>::one());
    Hom<K> y = Hom<K>::monomial({0, 1, 0}, CoeffOps<K>::one());
    Hom<K> z = Hom<K>::monomial({0, 0, 1}, CoeffOps<K>::one());
    return {q_ * z - r_ * y, r_ * x - p_ * z, p_ * y - q_ * x};
  }

  HomOneForm scaled(const K& s) const { return unchecked(p_.scaled(s), q_.scaled(s), r_.scaled(s)); }

  friend bool operator==(const HomOneForm& a, const HomOneForm& b) {
    return a.p_ == b.p_ && a.q_ == b.q_ && a.r_ == b.r_;
  }

 private:
  Hom<K> p_, q_, r_;
};

// L, M, N of degree n with P = Y*N - Z*M, Q = Z*L - X*N, R = X*M - Y*L.
template <class K>
struct LmnRep {
  Hom<K> L, M, N;
};

// Exact lift of a float form. Rounded coefficients satisfy the projective
// condition only up to machine precision; subtracting d(g)/(deg+1) for the
// contraction g restores it exactly (Euler's identity), moving every
// coefficient by at most the prior violation.
inline HomOneForm<GaussRat> lift_exact(const HomOneForm<Cplx>& f) {
  RatHom p = lift_exact(f.P()), q = lift_exact(f.Q()), r = lift_exact(f.R());
  HomOneForm<GaussRat> lifted = HomOneForm<GaussRat>::unchecked(p, q, r);
  RatHom g = lifted.euler_contraction();
  if (!g.is_zero()) {
    const GaussRat inv = GaussRat(1) / GaussRat(g.declared_degree());
    p -= g.derivative(0).scaled(inv);
    q -= g.derivative(1).scaled(inv);
    r -= g.derivative(2).scaled(inv);
    lifted = HomOneForm<GaussRat>::unchecked(std::move(p), std::move(q), std::move(r));
  }
  return lifted;
}

// Extension of a planar field to the projective plane: with L, M the
// degree-bound homogenizations of P, Q the form is
//   -Z*M dX + Z*L dY + (X*M - Y*L) dZ.
// The line Z = 0 is invariant by construction.
template <class K>
HomOneForm<K> projectivize(const VectorField<K>& v) {
  const int n = v.degree_bound;
  Hom<K> l = homogenize(v.P, n);
  Hom<K> m = homogenize(v.Q, n);
  Hom<K> x = Hom<K>::monomial({1, 0, 0}, CoeffOps<K>::one());
  Hom<K> y = Hom<K>::monomial({0, 1, 0}, CoeffOps<K>::one());
  Hom<K> z = Hom<K>::monomial({0, 0, 1}, CoeffOps<K>::one());
  return HomOneForm<K>::unchecked(-(z * m), z * l, x * m - y * l);
}

namespace detail {

// y^n * P(1/y, x/y): the chart-X transport of a degree <= n polynomial.
template <class K>
Affine<K> chart_x_transport(const Affine<K>& p, int n) {
  Affine<K> out;
  for (const auto& [e, c] : p.terms()) out.add_term({e.ey, n - e.ex - e.ey}, c);
  return out;
}

// y^n * P(x/y, 1/y)
template <class K>
Affine<K> chart_y_transport(const Affine<K>& p, int n) {
  Affine<K> out;
  for (const auto& [e, c] : p.terms()) out.add_term({e.ex, n - e.ex - e.ey}, c);
  return out;
}

} // namespace detail

// The two 1-forms presenting the extended foliation on the charts X = 1 and
// Y = 1:
//   omega_X = (M1 - x*L1) dy + y*L1 dx,   omega_Y = (x*M2 - L2) dy - y*M2 dx.
template <class K>
std::pair<AffineOneForm<K>, AffineOneForm<K>> chart_forms(const VectorField<K>& v) {
  const int n = v.degree_bound;
  Affine<K> x = Affine<K>::var_x();
  Affine<K> y = Affine<K>::var_y();

  Affine<K> l1 = detail::chart_x_transport(v.P, n);
  Affine<K> m1 = detail::chart_x_transport(v.Q, n);
  AffineOneForm<K> wx{y * l1, m1 - x * l1};

  Affine<K> l2 = detail::chart_y_transport(v.P, n);
  Affine<K> m2 = detail::chart_y_transport(v.Q, n);
  AffineOneForm<K> wy{-(y * m2), x * m2 - l2};
  return {wx, wy};
}

template <class K>
bool is_line_at_infinity_invariant(const HomOneForm<K>& form, double eps = 1e-9) {
  // Z = 0 invariant iff P and Q vanish identically on it.
  Affine<K> p0, q0;
  for (const auto& [e, c] : form.P().terms())
    if (e.ez == 0) p0.add_term({e.ex, e.ey}, c);
  for (const auto& [e, c] : form.Q().terms())
    if (e.ez == 0) q0.add_term({e.ex, e.ey}, c);
  if constexpr (CoeffOps<K>::exact) {
    return p0.is_zero() && q0.is_zero();
  } else {
    const double scale = std::max(1.0, form.max_abs());
    return p0.max_abs() <= eps * scale && q0.max_abs() <= eps * scale;
  }
}

template <class K>
bool is_line_at_infinity_invariant(const VectorField<K>& v, double eps = 1e-9) {
  return is_line_at_infinity_invariant(projectivize(v), eps);
}

template <class K>
Hom<K> swap_xz(const Hom<K>& f) {
  Hom<K> out(f.declared_degree());
  for (const auto& [e, c] : f.terms()) out.add_term({e.ez, e.ey, e.ex}, c);
  return out;
}
template <class K>
Hom<K> swap_yz(const Hom<K>& f) {
  Hom<K> out(f.declared_degree());
  for (const auto& [e, c] : f.terms()) out.add_term({e.ex, e.ez, e.ey}, c);
  return out;
}

// Restriction of the foliation to an affine chart. For chart Z the field is
// (Q(x,y,1), -P(x,y,1)); its degree bound drops to the foliation degree when
// the chart's removed line is invariant. A radial multiple (kernel everywhere)
// restricts to the zero field; any other violation of the projective
// condition is an error.
template <class K>
VectorField<K> restrict_to_chart(const HomOneForm<K>& form, Chart chart, double eps = 1e-9) {
  const double scale = std::max(1.0, form.max_abs());
  Hom<K> g = form.euler_contraction();
  const bool projective = CoeffOps<K>::exact ? g.is_zero() : g.max_abs() <= eps * scale;
  if (!projective) {
    auto cross = form.radial_cross();
    bool radial = true;
    for (const auto& c : cross) {
      if constexpr (CoeffOps<K>::exact) {
        radial = radial && c.is_zero();
      } else {
        radial = radial && c.max_abs() <= eps * scale;
      }
    }
    if (radial) return VectorField<K>(Affine<K>(), Affine<K>(), form.foliation_degree() > 0 ? form.foliation_degree() : 0);
    throw ProjectiveConditionError();
  }

  Affine<K> a, b; // field components before the degree-bound decision
  switch (chart) {
    case Chart::Z:
      a = dehomogenize(form.Q(), Chart::Z);
      b = -dehomogenize(form.P(), Chart::Z);
      break;
    case Chart::X:
      a = dehomogenize(form.R(), Chart::X);
      b = -dehomogenize(form.Q(), Chart::X);
      break;
    case Chart::Y:
      a = dehomogenize(form.R(), Chart::Y);
      b = -dehomogenize(form.P(), Chart::Y);
      break;
  }
  const int n = form.foliation_degree();

  // detect invariance of the removed line to tighten the bound to n
  HomOneForm<K> permuted = form;
  if (chart == Chart::X) {
    // swap roles so the removed line becomes Z = 0 of the permuted form
    permuted = HomOneForm<K>::unchecked(swap_xz(form.R()), swap_xz(form.Q()), swap_xz(form.P()));
  } else if (chart == Chart::Y) {
    permuted = HomOneForm<K>::unchecked(swap_yz(form.P()), swap_yz(form.R()), swap_yz(form.Q()));
  }
  const bool line_invariant = is_line_at_infinity_invariant(permuted, eps);
  const int bound = line_invariant ? std::max(n, std::max(a.degree(), b.degree()))
                                   : std::max(n + 1, std::max(a.degree(), b.degree()));
  return VectorField<K>(std::move(a), std::move(b), std::max(bound, 0));
}

// Recovers (L, M, N) from the form. The curl of the form divided by the
// coefficient degree + 1 is one solution; the remaining gauge freedom
// (L,M,N) -> (L+XH, M+YH, N+ZH) is fixed by removing every monomial of N
// divisible by Z, which is also the minimum-norm choice for N.
template <class K>
LmnRep<K> lmn_from_form(const HomOneForm<K>& form, double eps = 1e-9) {
  const int d = form.coeff_degree();
  const K inv = CoeffOps<K>::one() / CoeffOps<K>::from_long(d + 1);

  Hom<K> l = (form.Q().derivative(2) - form.R().derivative(1)).scaled(inv);
  Hom<K> m = (form.R().derivative(0) - form.P().derivative(2)).scaled(inv);
  Hom<K> n = (form.P().derivative(1) - form.Q().derivative(0)).scaled(inv);

  // gauge: N := N(X,Y,0), compensating inside L and M
  Hom<K> n_flat(n.declared_degree());
  Hom<K> h(n.declared_degree() > 0 ? n.declared_degree() - 1 : 0);
  for (const auto& [e, c] : n.terms()) {
    if (e.ez == 0) {
      n_flat.add_term(e, c);
    } else {
      h.add_term({e.ex, e.ey, e.ez - 1}, -c); // H picks up -(Z-divisible part)/Z
    }
  }
  Hom<K> x = Hom<K>::monomial({1, 0, 0}, CoeffOps<K>::one());
  Hom<K> y = Hom<K>::monomial({0, 1, 0}, CoeffOps<K>::one());
  Hom<K> z = Hom<K>::monomial({0, 0, 1}, CoeffOps<K>::one());
  LmnRep<K> rep{l + x * h, m + y * h, n_flat};

  // reconstruction must reproduce the form, else the input was not projective
  Hom<K> rp = y * rep.N - z * rep.M;
  Hom<K> rq = z * rep.L - x * rep.N;
  Hom<K> rr = x * rep.M - y * rep.L;
  const double scale = std::max(1.0, form.max_abs());
  auto matches = [&](const Hom<K>& u, const Hom<K>& v) {
    if constexpr (CoeffOps<K>::exact) return u == v;
    else return (u - v).max_abs() <= eps * scale;
  };
  if (!matches(rp, form.P()) || !matches(rq, form.Q()) || !matches(rr, form.R()))
    throw ProjectiveConditionError();
  return rep;
}

// The three components of dF ^ Omega in the basis (dY^dZ, dZ^dX, dX^dY).
template <class K>
struct TwoForm {
  Hom<K> yz, zx, xy;
};

// Invariance of an algebraic curve: dF ^ Omega = F * alpha for a 2-form
// witness alpha. Returns the witness when F divides all three components,
// absence otherwise.
template <class K>
std::optional<TwoForm<K>> check_curve_invariant(const HomOneForm<K>& form, const Hom<K>& f, double eps = 1e-8) {
  if (f.declared_degree() <= 0 || f.is_zero())
    throw std::invalid_argument("invariance requires a nonconstant curve");
  Hom<K> fx = f.derivative(0), fy = f.derivative(1), fz = f.derivative(2);
  Hom<K> cyz = fy * form.R() - fz * form.Q();
  Hom<K> czx = fz * form.P() - fx * form.R();
  Hom<K> cxy = fx * form.Q() - fy * form.P();

  const double scale = std::max({1.0, cyz.max_abs(), czx.max_abs(), cxy.max_abs()});
  auto try_div = [&](const Hom<K>& num) -> std::optional<Hom<K>> {
    auto dr = divide_exact(num, f);
    if constexpr (CoeffOps<K>::exact) {
      if (!dr.remainder.is_zero()) return std::nullopt;
    } else {
      if (dr.remainder.max_abs() > eps * scale) return std::nullopt;
    }
    return dr.quotient;
  };
  auto a = try_div(cyz);
  if (!a) return std::nullopt;
  auto b = try_div(czx);
  if (!b) return std::nullopt;
  auto c = try_div(cxy);
  if (!c) return std::nullopt;
  return TwoForm<K>{std::move(*a), std::move(*b), std::move(*c)};
}

// Equality of forms up to a nonzero scalar.
template <class K>
bool scalar_equivalent(const HomOneForm<K>& a, const HomOneForm<K>& b, double eps = 1e-9) {
  if (a.coeff_degree() != b.coeff_degree()) return false;
  if constexpr (CoeffOps<K>::exact) {
    // locate the graded-lex-first nonzero coefficient across (P, Q, R)
    auto first_nonzero = [](const HomOneForm<K>& f) -> std::pair<int, Exp3> {
      for (int comp = 0; comp < 3; ++comp) {
        const Hom<K>& h = comp == 0 ? f.P() : comp == 1 ? f.Q() : f.R();
        if (!h.is_zero()) return {comp, h.terms().begin()->first};
      }
      return {-1, {}};
    };
    auto [ca, ea] = first_nonzero(a);
    auto [cb, eb] = first_nonzero(b);
    if (ca < 0 || cb < 0) return ca == cb;
    if (ca != cb || !(ea == eb)) return false;
    const Hom<K>& ha = ca == 0 ? a.P() : ca == 1 ? a.Q() : a.R();
    const Hom<K>& hb = cb == 0 ? b.P() : cb == 1 ? b.Q() : b.R();
    K r = ha.coeff(ea) / hb.coeff(eb);
    return a.P() == b.P().scaled(r) && a.Q() == b.Q().scaled(r) && a.R() == b.R().scaled(r);
  } else {
    // align on the largest coefficient of a
    double best = -1;
    int comp = -1;
    Exp3 be;
    for (int c = 0; c < 3; ++c) {
      const Hom<K>& h = c == 0 ? a.P() : c == 1 ? a.Q() : a.R();
      for (const auto& [e, v] : h.terms()) {
        double m = CoeffOps<K>::abs_approx(v);
        if (m > best) { best = m; comp = c; be = e; }
      }
    }
    if (comp < 0) return b.is_zero();
    const Hom<K>& ha = comp == 0 ? a.P() : comp == 1 ? a.Q() : a.R();
    const Hom<K>& hb = comp == 0 ? b.P() : comp == 1 ? b.Q() : b.R();
    K cb = hb.coeff(be);
    if (CoeffOps<K>::abs_approx(cb) == 0.0) return false;
    K r = ha.coeff(be) / cb;
    const double scale = std::max(1.0, a.max_abs());
    auto close = [&](const Hom<K>& u, const Hom<K>& v) { return (u - v.scaled(r)).max_abs() <= eps * scale; };
    return close(a.P(), b.P()) && close(a.Q(), b.Q()) && close(a.R(), b.R());
  }
}

// Equality of planar fields up to a nonzero scalar.
template <class K>
bool scalar_equivalent(const VectorField<K>& a, const VectorField<K>& b, double eps = 1e-9) {
  if constexpr (CoeffOps<K>::exact) {
    auto first_nonzero = [](const VectorField<K>& v) -> std::pair<int, Exp2> {
      if (!v.P.is_zero()) return {0, v.P.terms().begin()->first};
      if (!v.Q.is_zero()) return {1, v.Q.terms().begin()->first};
      return {-1, {}};
    };
    auto [ca, ea] = first_nonzero(a);
    auto [cb, eb] = first_nonzero(b);
    if (ca < 0 || cb < 0) return ca == cb;
    if (ca != cb || !(ea == eb)) return false;
    const Affine<K>& pa = ca == 0 ? a.P : a.Q;
    const Affine<K>& pb = cb == 0 ? b.P : b.Q;
    K r = pa.coeff(ea) / pb.coeff(eb);
    return a.P == b.P.scaled(r) && a.Q == b.Q.scaled(r);
  } else {
    double best = -1;
    int comp = -1;
    Exp2 be;
    for (int c = 0; c < 2; ++c) {
      const Affine<K>& h = c == 0 ? a.P : a.Q;
      for (const auto& [e, v] : h.terms()) {
        double m = CoeffOps<K>::abs_approx(v);
        if (m > best) { best = m; comp = c; be = e; }
      }
    }
    if (comp < 0) return b.is_zero();
    const Affine<K>& pa = comp == 0 ? a.P : a.Q;
    const Affine<K>& pb = comp == 0 ? b.P : b.Q;
    K cb = pb.coeff(be);
    if (CoeffOps<K>::abs_approx(cb) == 0.0) return false;
    K r = pa.coeff(be) / cb;
    const double scale = std::max(1.0, a.max_abs());
    return (a.P - b.P.scaled(r)).max_abs() <= eps * scale && (a.Q - b.Q.scaled(r)).max_abs() <= eps * scale;
  }
}

} // namespace camsad
