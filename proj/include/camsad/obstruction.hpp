#pragma once

#include <functional>
#include <optional>

#include "camsad/singularities.hpp"

namespace camsad {

// One separatrix slot: the separatrix through singularity `sing` tangent to
// eigendirection v1 (which = 0) or v2 (which = 1). Its index is the opposite
// eigenvalue ratio: slot 0 carries lambda2/lambda1, slot 1 carries
// lambda1/lambda2, so the product of the two slots of a singularity is 1.
struct Slot {
  int sing = -1;
  int which = 0;
  Cplx index;
  SingType type = SingType::None;
  int component = -1;     // component of the curve, for type II
  bool along_curve = false; // the separatrix is a local branch of the curve
  bool valid = true;      // false at degenerate singularities
};

struct SingSummary {
  SingClass cls = SingClass::Degenerate;
  SingType type = SingType::None;
  Cplx quotient;
  double class_margin = 0; // the classification decision's margin
  int component = -1;
  int multiplicity = 1;
  bool ambiguous = false;
};

struct IndexTable {
  std::vector<Slot> slots;        // 2 per singularity, ordered (sing, which)
  std::vector<SingSummary> sings; // parallel to the census order
  int n_sings = 0;
  bool any_degenerate = false;
  bool any_ambiguous = false;
};

IndexTable index_table(const SingularityCensus& cen);

struct Configuration {
  std::vector<int> slots;          // indices into IndexTable::slots, sorted
  int k = 0;                       // #A_II^i / deg F_i, common over components
  int beta = 0;                    // type-III singularities with both slots
  int alpha = 0;                   // type-III singularities with exactly one
  std::vector<int> per_component;  // #A_II^i
};

Cplx sigma(const Configuration& a, const IndexTable& table);

// Recomputes k, beta, alpha, per-component counts from the slot set.
Configuration annotate_configuration(std::vector<int> slots, const IndexTable& table,
                                     const std::vector<int>& component_degrees);

enum class Verdict { Certified, Obstructed, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Obstructed: return "Obstructed";
    default: return "Inconclusive";
  }
}

struct EnumStats {
  long long examined = 0;   // partial sums compared
  long long budget = 0;
  std::string strategy;     // "exhaustive" or "meet_in_middle"
  bool budget_exceeded = false;
};

struct ObstructionCertificate {
  std::string mode;   // "theorem_d" | "nodal_refined"
  Verdict verdict = Verdict::Inconclusive;
  double delta_min = 0;
  std::optional<Configuration> witness;
  std::string reason; // for Inconclusive
  ToleranceProfile tol;
  EnumStats stats;
  std::string backend = "float";
};

inline constexpr long long kDefaultBudget = 200'000'000;

// No proper subset of separatrix slots may sum to a positive integer within
// eps_obstruction; intended for foliations with no distinguished curve.
// Non-simple or degenerate singularities make the verdict Inconclusive.
ObstructionCertificate theorem_d_check(const IndexTable& table, const ToleranceProfile& tol,
                                       long long budget = kDefaultBudget, int threads = 1);

// Streams the admissible configurations for the curve: per component exactly
// k * deg(F_i) transverse type-II slots with one k common to all components,
// free choices at type-III singularities, excluding the empty and the full
// selection. Grouped by ascending (k, beta), lexicographic within a group.
// The visitor returns false to stop. Returns false when stopped early.
bool for_each_admissible(const IndexTable& table, const std::vector<int>& component_degrees,
                         const std::function<bool(const Configuration&)>& visit);

// The refined test for a prescribed nodal curve: no admissible configuration
// may satisfy sigma_A = k(A)^2 - beta(A) within eps_obstruction.
ObstructionCertificate nodal_obstruction_check(const IndexTable& table, const SingularityCensus& cen,
                                               const std::vector<int>& component_degrees,
                                               const ToleranceProfile& tol,
                                               long long budget = kDefaultBudget, int threads = 1);

// Internal search machinery, exposed for the equivalence tests: minimum over
// all selections (one option per group, optionally skipping one designated
// selection) of the distance |sum - target|, or of the distance to the
// nearest positive integer when target is absent.
struct OptionGroup {
  std::vector<Cplx> values;             // one entry per option
  std::vector<std::vector<int>> slots;  // table slots selected by each option
  std::vector<int> beta_inc;            // beta contribution per option
};

struct SubsetSearchOutcome {
  double delta = 0;
  std::vector<int> choice; // option index per group
  bool budget_exceeded = false;
  long long examined = 0;
};

SubsetSearchOutcome subset_search_exhaustive(const std::vector<OptionGroup>& groups,
                                             std::optional<double> target,
                                             const std::vector<int>* skip_choice, long long budget);

SubsetSearchOutcome subset_search_mitm(const std::vector<OptionGroup>& groups,
                                       std::optional<double> target,
                                       const std::vector<int>* skip_choice, long long budget);

} // namespace camsad
