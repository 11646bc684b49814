#pragma once

#include <optional>
#include <span>
#include <vector>

#include "camsad/foliation.hpp"
#include "camsad/poly.hpp"

namespace camsad {

struct ToleranceProfile {
  double eps_root = 1e-10;        // root residual
  double eps_eq = 1e-8;           // polynomial-identity / float equality
  double eps_cluster = 1e-7;      // root merge radius
  double eps_obstruction = 1e-6;  // margin threshold for certificates
  int q_max = 50;                 // max numerator/denominator for rationality tests

  void validate() const {
    if (eps_root <= 0 || eps_eq <= 0 || eps_cluster <= 0 || eps_obstruction <= 0 || q_max < 1)
      throw std::invalid_argument("tolerances must be strictly positive");
    if (eps_cluster < eps_root)
      throw std::invalid_argument("eps_cluster must be at least eps_root");
  }
};

struct RootCluster {
  Cplx value;
  int multiplicity = 1;
  double radius = 0;
};

// All roots of a complex univariate polynomial (coefficients ascending by
// degree), found by simultaneous Aberth iteration, polished by Newton steps,
// and merged into clusters of radius eps_cluster. Multiplicities sum to the
// degree. Degree-zero input yields no roots; the zero polynomial is an error.
std::vector<RootCluster> univariate_roots(std::span<const Cplx> coeffs, const ToleranceProfile& tol);

inline Cplx horner(std::span<const Cplx> coeffs, Cplx z) {
  Cplx acc = 0;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

// Exact univariate polynomials as dense coefficient vectors (ascending).
using RatUPoly = std::vector<GaussRat>;

// Sylvester resultant eliminating y; the result is univariate in x.
// Entries stay exact throughout (fraction-free Bareiss elimination).
RatUPoly resultant_y(const RatAffine& p, const RatAffine& q);

std::vector<Cplx> to_float(const RatUPoly& p);

struct PointSolution {
  Cplx x, y;
  int multiplicity = 1;
  double radius = 0;
};

struct BivariateSolveResult {
  std::vector<PointSolution> points;
  bool infinite = false;       // positive-dimensional solution set
  std::string common_factor;   // the witness factor when infinite
};

// Common zeros of two bivariate polynomials by resultant elimination,
// back-substitution, Newton refinement on the pair, and clustering.
// Arithmetic up to the resultant is exact (float inputs are lifted to their
// exact binary rationals), so the computed candidates are deterministic.
BivariateSolveResult solve_bivariate(const RatAffine& p, const RatAffine& q, const ToleranceProfile& tol);
BivariateSolveResult solve_bivariate(const CAffine& p, const CAffine& q, const ToleranceProfile& tol);

struct EigenData {
  Cplx lambda1, lambda2;                  // sorted by (Re, Im)
  std::array<Cplx, 2> v1{Cplx(1), Cplx(0)}, v2{Cplx(0), Cplx(1)};
  bool defective = false;
};

// Eigenvalues and unit eigendirections of the Jacobian of (P, Q) at a point;
// closed-form 2x2 solve with deterministic ordering.
EigenData jacobian_eigen(const VectorField<Cplx>& v, Cplx x, Cplx y, const ToleranceProfile& tol);
EigenData eigen_2x2(Cplx a, Cplx b, Cplx c, Cplx d, const ToleranceProfile& tol);

enum class QuotientKind { PositiveRational, PositiveRealIrrational, NotPositiveReal };

struct QuotientClass {
  QuotientKind kind = QuotientKind::NotPositiveReal;
  long p = 0, q = 0;   // the matched fraction for PositiveRational
  double margin = 0;   // distance to the rejected decision boundary
};

// Decides the position of an eigenvalue quotient relative to the positive
// reals and the positive rationals p/q with p, q <= q_max. Rationality in
// floating point is necessarily a proxy; the scan bound q_max is part of
// every certificate.
QuotientClass classify_quotient(Cplx lambda, const ToleranceProfile& tol);

inline double dist_to_positive_reals(Cplx z) {
  return z.real() > 0 ? std::abs(z.imag()) : std::abs(z);
}

// Distance to the nearest integer >= 1.
inline double dist_to_positive_integer(Cplx z) {
  double nearest = std::max(1.0, std::round(z.real()));
  return std::hypot(z.real() - nearest, z.imag());
}

} // namespace camsad
