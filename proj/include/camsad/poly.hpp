#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "camsad/rational.hpp"

namespace camsad {

// Monomial exponents. The global term order is graded lexicographic with
// x > y (> z); maps are kept ascending so the leading term is rbegin().
struct Exp2 {
  int ex = 0, ey = 0;
  int total() const { return ex + ey; }
  friend bool operator==(Exp2 a, Exp2 b) { return a.ex == b.ex && a.ey == b.ey; }
};

struct GrlexLess2 {
  bool operator()(Exp2 a, Exp2 b) const {
    if (a.total() != b.total()) return a.total() < b.total();
    return a.ex < b.ex;
  }
};

struct Exp3 {
  int ex = 0, ey = 0, ez = 0;
  int total() const { return ex + ey + ez; }
  friend bool operator==(Exp3 a, Exp3 b) { return a.ex == b.ex && a.ey == b.ey && a.ez == b.ez; }
};

struct GrlexLess3 {
  bool operator()(Exp3 a, Exp3 b) const {
    if (a.total() != b.total()) return a.total() < b.total();
    if (a.ex != b.ex) return a.ex < b.ex;
    return a.ey < b.ey;
  }
};

inline bool divides(Exp2 a, Exp2 b) { return a.ex <= b.ex && a.ey <= b.ey; }
inline bool divides(Exp3 a, Exp3 b) { return a.ex <= b.ex && a.ey <= b.ey && a.ez <= b.ez; }
inline Exp2 operator+(Exp2 a, Exp2 b) { return {a.ex + b.ex, a.ey + b.ey}; }
inline Exp2 operator-(Exp2 a, Exp2 b) { return {a.ex - b.ex, a.ey - b.ey}; }
inline Exp3 operator+(Exp3 a, Exp3 b) { return {a.ex + b.ex, a.ey + b.ey, a.ez + b.ez}; }
inline Exp3 operator-(Exp3 a, Exp3 b) { return {a.ex - b.ex, a.ey - b.ey, a.ez - b.ez}; }

// Bivariate polynomial in x, y. No zero coefficients are ever stored;
// degree() of the zero polynomial is the sentinel -1.
template <class K>
class Affine {
 public:
  using Ops = CoeffOps<K>;
  using TermMap = std::map<Exp2, K, GrlexLess2>;

  Affine() = default;
  static Affine constant(K c) {
    Affine p;
    p.add_term({0, 0}, std::move(c));
    return p;
  }
  static Affine var_x() { return monomial({1, 0}, Ops::one()); }
  static Affine var_y() { return monomial({0, 1}, Ops::one()); }
  static Affine monomial(Exp2 e, K c) {
    Affine p;
    p.add_term(e, std::move(c));
    return p;
  }

  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int degree() const { return t_.empty() ? -1 : t_.rbegin()->first.total(); }
  std::size_t term_count() const { return t_.size(); }

  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.total() == 0); }
  K constant_value() const {
    auto it = t_.find({0, 0});
    return it == t_.end() ? Ops::zero() : it->second;
  }

  K coeff(Exp2 e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Ops::zero() : it->second;
  }

  void add_term(Exp2 e, K c) {
    if (Ops::is_zero(c)) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
      t_.emplace(e, std::move(c));
    } else {
      it->second += c;
      if (Ops::is_zero(it->second)) t_.erase(it);
    }
  }

  std::pair<Exp2, K> leading() const {
    if (t_.empty()) throw std::logic_error("leading term of zero polynomial");
    return *t_.rbegin();
  }

  Affine operator-() const {
    Affine out;
    for (const auto& [e, c] : t_) out.t_.emplace(e, -c);
    return out;
  }
  Affine& operator+=(const Affine& o) {
    for (const auto& [e, c] : o.t_) add_term(e, c);
    return *this;
  }
  Affine& operator-=(const Affine& o) {
    for (const auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
  }
  friend Affine operator+(Affine a, const Affine& b) { a += b; return a; }
  friend Affine operator-(Affine a, const Affine& b) { a -= b; return a; }
  friend Affine operator*(const Affine& a, const Affine& b) {
    Affine out;
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) out.add_term(ea + eb, ca * cb);
    return out;
  }
  Affine scaled(const K& s) const {
    Affine out;
    if (Ops::is_zero(s)) return out;
    for (const auto& [e, c] : t_) out.add_term(e, c * s);
    return out;
  }
  friend bool operator==(const Affine& a, const Affine& b) { return a.t_ == b.t_; }
  friend bool operator!=(const Affine& a, const Affine& b) { return !(a.t_ == b.t_); }

  // var: 0 = x, 1 = y
  Affine derivative(int var) const {
    Affine out;
    for (const auto& [e, c] : t_) {
      const int k = var == 0 ? e.ex : e.ey;
      if (k == 0) continue;
      Exp2 de = var == 0 ? Exp2{e.ex - 1, e.ey} : Exp2{e.ex, e.ey - 1};
      out.add_term(de, c * Ops::from_long(k));
    }
    return out;
  }

  template <class V>
  V eval(const V& x, const V& y) const {
    // powers cached up to the degree actually used
    const int d = degree();
    if (d < 0) return V{};
    std::vector<V> px(static_cast<std::size_t>(d) + 1), py(px.size());
    px[0] = V{1}; py[0] = V{1};
    for (std::size_t k = 1; k < px.size(); ++k) { px[k] = px[k - 1] * x; py[k] = py[k - 1] * y; }
    V acc{};
    for (const auto& [e, c] : t_) acc += V(c) * px[e.ex] * py[e.ey];
    return acc;
  }
  Cplx eval_c(Cplx x, Cplx y) const {
    Cplx acc = 0;
    for (const auto& [e, c] : t_) {
      Cplx m = Ops::to_complex(c);
      for (int k = 0; k < e.ex; ++k) m *= x;
      for (int k = 0; k < e.ey; ++k) m *= y;
      acc += m;
    }
    return acc;
  }

  // p(sx, sy): full polynomial composition.
  Affine substituted(const Affine& sx, const Affine& sy) const {
    const int d = degree();
    if (d < 0) return Affine();
    std::vector<Affine> px(static_cast<std::size_t>(d) + 1), py(px.size());
    px[0] = constant(Ops::one()); py[0] = px[0];
    for (std::size_t k = 1; k < px.size(); ++k) { px[k] = px[k - 1] * sx; py[k] = py[k - 1] * sy; }
    Affine acc;
    for (const auto& [e, c] : t_) acc += (px[e.ex] * py[e.ey]).scaled(c);
    return acc;
  }

  // Homogeneous layers [P_0, ..., P_d] with sum equal to the polynomial.
  std::vector<Affine> decompose_homogeneous() const {
    const int d = degree();
    std::vector<Affine> out(static_cast<std::size_t>(d < 0 ? 0 : d + 1));
    for (const auto& [e, c] : t_) out[e.total()].add_term(e, c);
    return out;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& [e, c] : t_) m = std::max(m, Ops::abs_approx(c));
    return m;
  }
  double norm1() const {
    double s = 0;
    for (const auto& [e, c] : t_) s += Ops::abs_approx(c);
    return s;
  }

  // Drops terms below eps (absolute). Float hygiene; exact mode never needs it.
  Affine pruned(double eps) const {
    Affine out;
    for (const auto& [e, c] : t_)
      if (Ops::abs_approx(c) > eps) out.add_term(e, c);
    return out;
  }

 private:
  TermMap t_;
};

// Trivariate homogeneous polynomial of a declared degree. The declared degree
// is part of the identity: the zero polynomial of degree 3 differs from the
// zero polynomial of degree 2.
template <class K>
class Hom {
 public:
  using Ops = CoeffOps<K>;
  using TermMap = std::map<Exp3, K, GrlexLess3>;

  Hom() : deg_(0) {}
  explicit Hom(int declared_degree) : deg_(declared_degree) {
    if (declared_degree < 0) throw std::invalid_argument("negative declared degree");
  }
  static Hom monomial(Exp3 e, K c) {
    Hom p(e.total());
    p.add_term(e, std::move(c));
    return p;
  }

  int declared_degree() const { return deg_; }
  const TermMap& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  std::size_t term_count() const { return t_.size(); }

  K coeff(Exp3 e) const {
    auto it = t_.find(e);
    return it == t_.end() ? Ops::zero() : it->second;
  }

  void add_term(Exp3 e, K c) {
    if (Ops::is_zero(c)) return;
    if (e.total() != deg_) throw std::invalid_argument("term degree does not match declared degree");
    auto it = t_.find(e);
    if (it == t_.end()) {
      t_.emplace(e, std::move(c));
    } else {
      it->second += c;
      if (Ops::is_zero(it->second)) t_.erase(it);
    }
  }

  std::pair<Exp3, K> leading() const {
    if (t_.empty()) throw std::logic_error("leading term of zero polynomial");
    return *t_.rbegin();
  }

  Hom operator-() const {
    Hom out(deg_);
    for (const auto& [e, c] : t_) out.t_.emplace(e, -c);
    return out;
  }
  Hom& operator+=(const Hom& o) {
    require_same_degree(o);
    for (const auto& [e, c] : o.t_) add_term(e, c);
    return *this;
  }
  Hom& operator-=(const Hom& o) {
    require_same_degree(o);
    for (const auto& [e, c] : o.t_) add_term(e, -c);
    return *this;
  }
  friend Hom operator+(Hom a, const Hom& b) { a += b; return a; }
  friend Hom operator-(Hom a, const Hom& b) { a -= b; return a; }
  friend Hom operator*(const Hom& a, const Hom& b) {
    Hom out(a.deg_ + b.deg_);
    for (const auto& [ea, ca] : a.t_)
      for (const auto& [eb, cb] : b.t_) out.add_term(ea + eb, ca * cb);
    return out;
  }
  Hom scaled(const K& s) const {
    Hom out(deg_);
    if (Ops::is_zero(s)) return out;
    for (const auto& [e, c] : t_) out.add_term(e, c * s);
    return out;
  }
  friend bool operator==(const Hom& a, const Hom& b) { return a.deg_ == b.deg_ && a.t_ == b.t_; }
  friend bool operator!=(const Hom& a, const Hom& b) { return !(a == b); }

  // var: 0 = X, 1 = Y, 2 = Z
  Hom derivative(int var) const {
    Hom out(deg_ > 0 ? deg_ - 1 : 0);
    for (const auto& [e, c] : t_) {
      const int k = var == 0 ? e.ex : var == 1 ? e.ey : e.ez;
      if (k == 0) continue;
      Exp3 de = e;
      (var == 0 ? de.ex : var == 1 ? de.ey : de.ez) -= 1;
      out.add_term(de, c * Ops::from_long(k));
    }
    return out;
  }

  template <class V>
  V eval(const V& x, const V& y, const V& z) const {
    V acc{};
    for (const auto& [e, c] : t_) {
      V m = V(c);
      for (int k = 0; k < e.ex; ++k) m = m * x;
      for (int k = 0; k < e.ey; ++k) m = m * y;
      for (int k = 0; k < e.ez; ++k) m = m * z;
      acc += m;
    }
    return acc;
  }
  Cplx eval_c(Cplx x, Cplx y, Cplx z) const {
    Cplx acc = 0;
    for (const auto& [e, c] : t_) {
      Cplx m = Ops::to_complex(c);
      for (int k = 0; k < e.ex; ++k) m *= x;
      for (int k = 0; k < e.ey; ++k) m *= y;
      for (int k = 0; k < e.ez; ++k) m *= z;
      acc += m;
    }
    return acc;
  }

  // F(A*(X,Y,Z)): linear change of projective coordinates.
  Hom substituted_linear(const std::array<std::array<K, 3>, 3>& a) const {
    std::array<Hom, 3> lin;
    for (int r = 0; r < 3; ++r) {
      Hom l(1);
      l.add_term({1, 0, 0}, a[r][0]);
      l.add_term({0, 1, 0}, a[r][1]);
      l.add_term({0, 0, 1}, a[r][2]);
      lin[r] = l;
    }
    Hom acc(deg_);
    for (const auto& [e, c] : t_) {
      Hom m(0);
      m.add_term({0, 0, 0}, Ops::one());
      for (int k = 0; k < e.ex; ++k) m = m * lin[0];
      for (int k = 0; k < e.ey; ++k) m = m * lin[1];
      for (int k = 0; k < e.ez; ++k) m = m * lin[2];
      acc += m.scaled(c);
    }
    return acc;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& [e, c] : t_) m = std::max(m, Ops::abs_approx(c));
    return m;
  }
  double norm1() const {
    double s = 0;
    for (const auto& [e, c] : t_) s += Ops::abs_approx(c);
    return s;
  }
  Hom pruned(double eps) const {
    Hom out(deg_);
    for (const auto& [e, c] : t_)
      if (Ops::abs_approx(c) > eps) out.add_term(e, c);
    return out;
  }

 private:
  void require_same_degree(const Hom& o) const {
    if (deg_ != o.deg_) throw std::invalid_argument("declared degrees differ");
  }

  int deg_;
  TermMap t_;
};

// F(X,Y,Z) = Z^m * p(X/Z, Y/Z). Requires m >= deg p.
template <class K>
Hom<K> homogenize(const Affine<K>& p, int m) {
  if (m < p.degree()) throw std::invalid_argument("homogenization degree below polynomial degree");
  Hom<K> out(m < 0 ? 0 : m);
  for (const auto& [e, c] : p.terms()) out.add_term({e.ex, e.ey, m - e.total()}, c);
  return out;
}

enum class Chart { X = 0, Y = 1, Z = 2 };

// Sets the chart variable to 1 and renames the remaining two to (x, y),
// keeping their X > Y > Z order: chart Z -> (X,Y), chart X -> (Y,Z),
// chart Y -> (X,Z).
template <class K>
Affine<K> dehomogenize(const Hom<K>& f, Chart chart) {
  Affine<K> out;
  for (const auto& [e, c] : f.terms()) {
    Exp2 a;
    switch (chart) {
      case Chart::Z: a = {e.ex, e.ey}; break;
      case Chart::X: a = {e.ey, e.ez}; break;
      case Chart::Y: a = {e.ex, e.ez}; break;
    }
    out.add_term(a, c);
  }
  return out;
}

template <class P>
struct DivisionResult {
  P quotient, remainder;
};

// Monomial division with respect to the global graded-lex order.
// num = quotient*den + remainder holds exactly in exact mode.
template <class K>
DivisionResult<Affine<K>> divide_exact(const Affine<K>& num, const Affine<K>& den) {
  if (den.is_zero()) throw std::domain_error("division by zero polynomial");
  Affine<K> q, r, work = num;
  const auto [lde, ldc] = den.leading();
  while (!work.is_zero()) {
    const auto [le, lc] = work.leading();
    if (divides(lde, le)) {
      K f = lc / ldc;
      Exp2 e = le - lde;
      q.add_term(e, f);
      work -= den * Affine<K>::monomial(e, f);
    } else {
      r.add_term(le, lc);
      work.add_term(le, -lc);
    }
  }
  return {q, r};
}

template <class K>
DivisionResult<Hom<K>> divide_exact(const Hom<K>& num, const Hom<K>& den) {
  if (den.is_zero()) throw std::domain_error("division by zero polynomial");
  const int qdeg = num.declared_degree() - den.declared_degree();
  Hom<K> q(qdeg < 0 ? 0 : qdeg), r(num.declared_degree()), work = num;
  const auto [lde, ldc] = den.leading();
  while (!work.is_zero()) {
    const auto [le, lc] = work.leading();
    if (qdeg >= 0 && divides(lde, le)) {
      K f = lc / ldc;
      Exp3 e = le - lde;
      q.add_term(e, f);
      work -= den * Hom<K>::monomial(e, f);
    } else {
      r.add_term(le, lc);
      work.add_term(le, -lc);
    }
  }
  return {q, r};
}

template <class K>
Affine<Cplx> to_float(const Affine<K>& p) {
  Affine<Cplx> out;
  for (const auto& [e, c] : p.terms()) out.add_term(e, CoeffOps<K>::to_complex(c));
  return out;
}
template <class K>
Hom<Cplx> to_float(const Hom<K>& p) {
  Hom<Cplx> out(p.declared_degree());
  for (const auto& [e, c] : p.terms()) out.add_term(e, CoeffOps<K>::to_complex(c));
  return out;
}

inline Affine<GaussRat> lift_exact(const Affine<Cplx>& p) {
  Affine<GaussRat> out;
  for (const auto& [e, c] : p.terms()) out.add_term(e, GaussRat::from_complex(c));
  return out;
}
inline Hom<GaussRat> lift_exact(const Hom<Cplx>& p) {
  Hom<GaussRat> out(p.declared_degree());
  for (const auto& [e, c] : p.terms()) out.add_term(e, GaussRat::from_complex(c));
  return out;
}

using RatAffine = Affine<GaussRat>;
using RatHom = Hom<GaussRat>;
using CAffine = Affine<Cplx>;
using CHom = Hom<Cplx>;

} // namespace camsad
