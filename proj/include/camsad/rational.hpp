#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>

#include "camsad/util.hpp"

namespace camsad {

using Rat = mpq_class;

inline std::string rat_str(const Rat& r) { return r.get_str(); }

// Gaussian rational a + b*i with arbitrary-precision rational parts.
// Closed under +, -, *, / ; the exact coefficient backend.
struct GaussRat {
  Rat re, im;

  GaussRat() : re(0), im(0) {}
  GaussRat(long v) : re(v), im(0) {}          // NOLINT: implicit by design
  GaussRat(Rat r) : re(std::move(r)), im(0) {}// NOLINT
  GaussRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
  // Exact binary expansion of the double; no rounding involved.
  static GaussRat from_double(double v) { return GaussRat(Rat(v)); }
  static GaussRat from_complex(Cplx z) { return GaussRat(Rat(z.real()), Rat(z.imag())); }
  static GaussRat i() { return GaussRat(Rat(0), Rat(1)); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  GaussRat conj() const { return GaussRat(re, -im); }
  Rat norm_sq() const { return re * re + im * im; }

  Cplx to_complex() const { return Cplx(re.get_d(), im.get_d()); }
  double abs_approx() const { return std::abs(to_complex()); }

  GaussRat operator-() const { return GaussRat(-re, -im); }
  GaussRat& operator+=(const GaussRat& o) { re += o.re; im += o.im; return *this; }
  GaussRat& operator-=(const GaussRat& o) { re -= o.re; im -= o.im; return *this; }
  GaussRat& operator*=(const GaussRat& o) {
    Rat r = re * o.re - im * o.im;
    Rat i = re * o.im + im * o.re;
    re = std::move(r); im = std::move(i);
    return *this;
  }
  GaussRat& operator/=(const GaussRat& o) {
    Rat n = o.norm_sq();
    if (sgn(n) == 0) throw std::domain_error("division by zero coefficient");
    Rat r = (re * o.re + im * o.im) / n;
    Rat i = (im * o.re - re * o.im) / n;
    re = std::move(r); im = std::move(i);
    return *this;
  }

  friend GaussRat operator+(GaussRat a, const GaussRat& b) { a += b; return a; }
  friend GaussRat operator-(GaussRat a, const GaussRat& b) { a -= b; return a; }
  friend GaussRat operator*(GaussRat a, const GaussRat& b) { a *= b; return a; }
  friend GaussRat operator/(GaussRat a, const GaussRat& b) { a /= b; return a; }
  friend bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) { return !(a == b); }

  GaussRat inverse() const { GaussRat one(1); one /= *this; return one; }

  std::string str() const {
    if (is_real()) return rat_str(re);
    std::string s = "(" + rat_str(re);
    if (sgn(im) >= 0) s += "+";
    s += rat_str(im) + "i)";
    return s;
  }
};

inline GaussRat pow(GaussRat base, unsigned long e) {
  GaussRat out(1);
  while (e) {
    if (e & 1) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

// Per-backend coefficient hooks used by the polynomial templates.
template <class K>
struct CoeffOps;

template <>
struct CoeffOps<GaussRat> {
  static constexpr bool exact = true;
  static GaussRat zero() { return GaussRat(); }
  static GaussRat one() { return GaussRat(1); }
  static bool is_zero(const GaussRat& v) { return v.is_zero(); }
  static Cplx to_complex(const GaussRat& v) { return v.to_complex(); }
  static double abs_approx(const GaussRat& v) { return v.abs_approx(); }
  static std::string str(const GaussRat& v) { return v.str(); }
  static bool is_real_nonneg(const GaussRat& v) { return v.is_real() && sgn(v.re) >= 0; }
  static GaussRat from_long(long v) { return GaussRat(v); }
};

template <>
struct CoeffOps<Cplx> {
  static constexpr bool exact = false;
  static Cplx zero() { return Cplx(0, 0); }
  static Cplx one() { return Cplx(1, 0); }
  static bool is_zero(const Cplx& v) { return v.real() == 0.0 && v.imag() == 0.0; }
  static Cplx to_complex(const Cplx& v) { return v; }
  static double abs_approx(const Cplx& v) { return std::abs(v); }
  static std::string str(const Cplx& v) { return ctos(v); }
  static bool is_real_nonneg(const Cplx& v) { return v.imag() == 0.0 && v.real() >= 0.0; }
  static Cplx from_long(long v) { return Cplx(static_cast<double>(v), 0); }
};

} // namespace camsad
