#pragma once

#include <cstdint>

#include "camsad/obstruction.hpp"

namespace camsad {

enum class SearchMethod { ExactLines, BilinearNumeric };

struct CurveSearchSpec {
  int max_degree = 2;
  SearchMethod method = SearchMethod::BilinearNumeric;
  std::vector<CAffine> excluded; // known invariant factors to ignore
  int starts = 16;
  std::uint64_t seed = 1;
};

struct FoundCurve {
  CAffine g;
  CAffine cof;       // the verified cofactor
  double residual = 0;
  bool line_at_infinity = false;
};

struct LineSearchResult {
  std::vector<FoundCurve> curves;
  bool exhaustive = true;  // false only in the pencil case
  bool pencil = false;
  std::string pencil_description;
};

// Every invariant affine line. The direction of such a line meets the line
// at infinity in a singularity, so candidate slopes are roots of R(1,a,0);
// intercepts solve the coefficient system of Q(x, ax+b) - a P(x, ax+b) = 0.
// Vertical lines x = c come from P(c, .) = 0. Fields with infinitely many
// invariant lines are reported as a pencil.
LineSearchResult find_invariant_lines(const VectorField<Cplx>& v, const ToleranceProfile& tol);

struct CurveSearchResult {
  std::vector<FoundCurve> curves;
  bool exhaustive = false; // the bilinear method is a heuristic
  bool extactic_vanishes = false;
};

// Heuristic search for invariant curves up to spec.max_degree: alternating
// linear solves on the bilinear cofactor system with multiple deterministic
// pseudo-random starts, Gauss-Newton polish, an extactic divisibility filter,
// and cofactor re-verification of every candidate.
CurveSearchResult find_invariant_curves(const VectorField<Cplx>& v, const CurveSearchSpec& spec,
                                        const ToleranceProfile& tol);

// Determinant of the iterated derivatives of the degree <= d monomial basis
// along the field; any invariant curve of degree <= d divides it when it is
// not identically zero.
RatAffine extactic_determinant(const VectorField<GaussRat>& v, int d);

enum class SampleDist { UniformBox, IntegerLattice };

struct SampleSpec {
  int n = 2;
  SampleDist dist = SampleDist::UniformBox;
  int count = 100;
  std::uint64_t seed = 0;
  bool check_lines = true;
  bool check_curves = false;
  int curve_degree = 2;
  bool check_certificate = true;
};

struct SampleRecord {
  int index = 0;
  std::uint64_t seed = 0;
  std::string p_text, q_text;
  int lines_found = -1;
  bool pencil = false;
  int curves_found = -1;
  Verdict verdict = Verdict::Inconclusive;
  double delta_min = 0;
  std::string reason;
  bool consistent = true; // never Certified while holding a verified curve
};

struct ExperimentReport {
  SampleSpec spec;
  ToleranceProfile tol;
  std::vector<SampleRecord> records;
  int certified = 0, obstructed = 0, inconclusive = 0;
  int with_lines = 0, with_curves = 0, inconsistent = 0;
  std::array<int, 14> margin_histogram{}; // log10 bins, delta in [1e-13, 10)
};

// Random fields of the given degree, each run through the selected checks.
// The certificate check certifies against the line at infinity, so any
// verified affine curve on a certified field is an inconsistency.
// Fully reproducible from the seed.
ExperimentReport sample_experiment(const SampleSpec& spec, const ToleranceProfile& tol, int threads = 1);

VectorField<Cplx> random_field(int n, SampleDist dist, std::uint64_t seed);

} // namespace camsad
