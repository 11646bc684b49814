#pragma once

#include <vector>

#include "camsad/curves.hpp"

namespace camsad {

enum class SingClass { Degenerate, NonDegenerate, Simple, Poincare };
enum class SingType { None, I, II, III };

inline const char* to_string(SingClass c) {
  switch (c) {
    case SingClass::Degenerate: return "degenerate";
    case SingClass::NonDegenerate: return "nondegenerate";
    case SingClass::Simple: return "simple";
    default: return "poincare";
  }
}
inline const char* to_string(SingType t) {
  switch (t) {
    case SingType::I: return "I";
    case SingType::II: return "II";
    case SingType::III: return "III";
    default: return "-";
  }
}

struct BranchTangent {
  int component = -1;            // component of the curve owning the branch
  std::array<Cplx, 2> dir{};     // tangent direction in the singularity's chart
  int matched_slot = -1;         // 0: eigendirection v1, 1: v2
  double cosine = 0;
};

struct Singularity {
  ProjectivePoint point;
  Chart chart = Chart::Z;   // chart used for local data
  Cplx chart_x, chart_y;    // coordinates there
  int multiplicity = 1;
  double radius = 0;

  EigenData eigen;
  Cplx quotient;            // lambda2 / lambda1
  SingClass cls = SingClass::Degenerate;
  double degeneracy_margin = 0; // |l1 l2| / scale^2
  QuotientClass qclass;

  SingType type = SingType::None;
  int component = -1;       // for type II
  std::vector<BranchTangent> branches;
  bool ambiguous_tangency = false;
  int conjugate_of = -1;
};

// Locates every singularity of the foliation: zeros of the chart fields in
// all three charts, deduplicated projectively, each assigned to the chart
// whose removed line is farthest. Eigen data and classification are filled
// by classify_singularity. Throws NonIsolatedError when the singular set is
// not isolated.
std::vector<Singularity> find_singularities(const HomOneForm<GaussRat>& form, const ToleranceProfile& tol);
std::vector<Singularity> find_singularities(const HomOneForm<Cplx>& form, const ToleranceProfile& tol);

// Eigen data of the chart field at the singularity plus the quotient
// classification: degenerate / nondegenerate / simple / Poincare.
void classify_singularity(const HomOneForm<Cplx>& form, Singularity& s, const ToleranceProfile& tol);

// Convenience: locate and classify.
std::vector<Singularity> analyze_singularities(const HomOneForm<GaussRat>& form, const ToleranceProfile& tol);
std::vector<Singularity> analyze_singularities(const HomOneForm<Cplx>& form, const ToleranceProfile& tol);

struct SingularityCensus {
  std::vector<Singularity> sings;
  int n = 0;                  // foliation degree
  int expected_count = 0;     // n^2 + n + 1
  int total_multiplicity = 0;
  int n_type_i = 0;
  std::vector<int> n_type_ii; // per curve component
  int n_type_iii = 0;
  bool any_ambiguous = false;
  bool any_degenerate = false;
  bool curve_invariant = true;
  bool curve_nodal = true;
  std::string diagnostics;
};

// Classifies every singularity relative to an invariant curve: type I at
// singular points of the curve, type II on a single smooth component, type
// III off the curve. Eigendirections are matched against branch tangents;
// an unresolvable match flags the singularity as ambiguous (downstream
// certificates then refuse to certify).
SingularityCensus census(const HomOneForm<GaussRat>& form, const AlgebraicCurve<GaussRat>& curve,
                         const ToleranceProfile& tol);
SingularityCensus census(const HomOneForm<Cplx>& form, const AlgebraicCurve<Cplx>& curve,
                         const ToleranceProfile& tol);

// Census with no distinguished curve: every singularity is type III.
SingularityCensus census_plain(const HomOneForm<GaussRat>& form, const ToleranceProfile& tol);
SingularityCensus census_plain(const HomOneForm<Cplx>& form, const ToleranceProfile& tol);

// Eigenvalue quotient computed in a specific chart (used to confirm chart
// independence).
Cplx quotient_in_chart(const HomOneForm<Cplx>& form, const ProjectivePoint& p, Chart chart,
                       const ToleranceProfile& tol);

} // namespace camsad
