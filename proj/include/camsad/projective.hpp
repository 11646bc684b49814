#pragma once

#include <array>
#include <cmath>

#include "camsad/util.hpp"

namespace camsad {

// Point [X:Y:Z], normalized so the first coordinate of maximal modulus is 1;
// dividing by it also fixes the phase.
struct ProjectivePoint {
  std::array<Cplx, 3> c{Cplx(0), Cplx(0), Cplx(1)};

  Cplx x() const { return c[0]; }
  Cplx y() const { return c[1]; }
  Cplx z() const { return c[2]; }
};

inline ProjectivePoint normalize_point(std::array<Cplx, 3> v) {
  double best = -1;
  int pivot = 0;
  for (int i = 0; i < 3; ++i) {
    const double m = std::abs(v[i]);
    if (m > best * (1.0 + 1e-12)) {
      best = m;
      pivot = i;
    }
  }
  if (best <= 0) throw std::invalid_argument("projective point must have a nonzero coordinate");
  const Cplx d = v[pivot];
  ProjectivePoint out;
  for (int i = 0; i < 3; ++i) out.c[i] = v[i] / d;
  out.c[pivot] = Cplx(1, 0); // exact after division
  return out;
}

inline double proj_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  double d = 0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a.c[i] - b.c[i]));
  return d;
}

inline ProjectivePoint conjugate(const ProjectivePoint& p) {
  return normalize_point({std::conj(p.c[0]), std::conj(p.c[1]), std::conj(p.c[2])});
}

// Lexicographic order on normalized coordinates; fixes enumeration order.
inline bool point_less(const ProjectivePoint& a, const ProjectivePoint& b) {
  for (int i = 0; i < 3; ++i) {
    if (a.c[i].real() != b.c[i].real()) return a.c[i].real() < b.c[i].real();
    if (a.c[i].imag() != b.c[i].imag()) return a.c[i].imag() < b.c[i].imag();
  }
  return false;
}

} // namespace camsad
