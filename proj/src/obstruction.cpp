#include "camsad/obstruction.hpp"

#include <algorithm>
#include <cmath>

namespace camsad {

IndexTable index_table(const SingularityCensus& cen) {
  IndexTable t;
  t.n_sings = static_cast<int>(cen.sings.size());
  for (int j = 0; j < t.n_sings; ++j) {
    const Singularity& s = cen.sings[j];
    const bool degenerate = s.cls == SingClass::Degenerate || s.multiplicity > 1;
    t.any_degenerate = t.any_degenerate || degenerate;
    t.any_ambiguous = t.any_ambiguous || s.ambiguous_tangency;
    SingSummary sum;
    sum.cls = degenerate ? SingClass::Degenerate : s.cls;
    sum.type = s.type;
    sum.quotient = s.quotient;
    sum.class_margin = s.qclass.margin;
    sum.component = s.component;
    sum.multiplicity = s.multiplicity;
    sum.ambiguous = s.ambiguous_tangency;
    t.sings.push_back(sum);

    // which slot is the branch of each passing component
    std::array<bool, 2> along{false, false};
    std::array<int, 2> comp{-1, -1};
    for (const auto& b : s.branches)
      if (b.matched_slot >= 0) {
        along[b.matched_slot] = true;
        comp[b.matched_slot] = b.component;
      }
    for (int w = 0; w < 2; ++w) {
      Slot slot;
      slot.sing = j;
      slot.which = w;
      slot.valid = !degenerate;
      slot.type = s.type;
      slot.along_curve = along[w];
      slot.component = s.type == SingType::II ? s.component : comp[w];
      if (!degenerate)
        slot.index = w == 0 ? s.eigen.lambda2 / s.eigen.lambda1 : s.eigen.lambda1 / s.eigen.lambda2;
      t.slots.push_back(slot);
    }
  }
  return t;
}

Cplx sigma(const Configuration& a, const IndexTable& table) {
  Cplx acc = 0;
  for (int i : a.slots) acc += table.slots[i].index;
  return acc;
}

Configuration annotate_configuration(std::vector<int> slots, const IndexTable& table,
                                     const std::vector<int>& component_degrees) {
  std::sort(slots.begin(), slots.end());
  Configuration a;
  a.per_component.assign(component_degrees.size(), 0);
  std::map<int, int> iii_count;
  for (int i : slots) {
    const Slot& s = table.slots[i];
    if (s.type == SingType::II && !s.along_curve && s.component >= 0 &&
        s.component < static_cast<int>(component_degrees.size()))
      a.per_component[s.component] += 1;
    if (s.type == SingType::III || s.type == SingType::None) iii_count[s.sing] += 1;
  }
  for (const auto& [sing, cnt] : iii_count) {
    if (cnt == 2) a.beta += 1;
    if (cnt == 1) a.alpha += 1;
  }
  a.k = 0;
  for (std::size_t i = 0; i < component_degrees.size(); ++i) {
    const int d = std::max(1, component_degrees[i]);
    const int k_i = a.per_component[i] / d;
    if (k_i * d != a.per_component[i] || (i > 0 && k_i != a.k)) {
      a.k = -1; // not admissible as stated
      break;
    }
    a.k = k_i;
  }
  a.slots = std::move(slots);
  return a;
}

namespace {

struct SumEntry {
  Cplx sum;
  std::uint64_t code = 0;
};

double eval_delta(Cplx s, const std::optional<double>& target) {
  if (target) return std::abs(s - Cplx(*target, 0));
  return dist_to_positive_integer(s);
}

// Product expansion of half the groups; codes pack the option digits in
// mixed radix. Group sizes are bounded upstream so codes fit 64 bits.
std::vector<SumEntry> enumerate_half(const std::vector<OptionGroup>& groups, std::size_t from,
                                     std::size_t to) {
  std::vector<SumEntry> out{{Cplx(0), 0}};
  std::uint64_t stride = 1;
  for (std::size_t g = from; g < to; ++g) {
    const auto& opts = groups[g].values;
    std::vector<SumEntry> next;
    next.reserve(out.size() * opts.size());
    for (const auto& e : out)
      for (std::size_t o = 0; o < opts.size(); ++o)
        next.push_back({e.sum + opts[o], e.code + stride * o});
    out = std::move(next);
    stride *= opts.size();
  }
  return out;
}

std::vector<int> decode(const std::vector<OptionGroup>& groups, std::size_t from, std::size_t to,
                        std::uint64_t code) {
  std::vector<int> digits;
  for (std::size_t g = from; g < to; ++g) {
    const std::uint64_t sz = groups[g].values.size();
    digits.push_back(static_cast<int>(code % sz));
    code /= sz;
  }
  return digits;
}

std::uint64_t encode(const std::vector<OptionGroup>& groups, std::size_t from, std::size_t to,
                     const std::vector<int>& choice) {
  std::uint64_t code = 0, stride = 1;
  for (std::size_t g = from; g < to; ++g) {
    code += stride * static_cast<std::uint64_t>(choice[g]);
    stride *= groups[g].values.size();
  }
  return code;
}

// Split point balancing the log-sizes of both halves.
std::size_t split_point(const std::vector<OptionGroup>& groups) {
  double total = 0;
  for (const auto& g : groups) total += std::log2(double(g.values.size()));
  double acc = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    acc += std::log2(double(groups[i].values.size()));
    if (acc >= total / 2) return i + 1;
  }
  return groups.size();
}

struct BestPair {
  double delta = std::numeric_limits<double>::infinity();
  std::uint64_t c1 = 0, c2 = 0;
  bool found = false;

  void offer(double d, std::uint64_t a, std::uint64_t b) {
    if (!found || d < delta || (d == delta && (a < c1 || (a == c1 && b < c2)))) {
      delta = d;
      c1 = a;
      c2 = b;
      found = true;
    }
  }
};

SubsetSearchOutcome finish(const std::vector<OptionGroup>& groups, std::size_t mid, const BestPair& best,
                           bool exceeded, long long examined) {
  SubsetSearchOutcome out;
  out.budget_exceeded = exceeded;
  out.examined = examined;
  if (best.found) {
    out.delta = best.delta;
    auto d1 = decode(groups, 0, mid, best.c1);
    auto d2 = decode(groups, mid, groups.size(), best.c2);
    d1.insert(d1.end(), d2.begin(), d2.end());
    out.choice = std::move(d1);
  } else {
    out.delta = std::numeric_limits<double>::infinity();
  }
  return out;
}

} // namespace

SubsetSearchOutcome subset_search_exhaustive(const std::vector<OptionGroup>& groups,
                                             std::optional<double> target,
                                             const std::vector<int>* skip_choice, long long budget) {
  const std::size_t mid = split_point(groups);
  auto s1 = enumerate_half(groups, 0, mid);
  auto s2 = enumerate_half(groups, mid, groups.size());
  std::uint64_t skip1 = ~0ull, skip2 = ~0ull;
  if (skip_choice) {
    skip1 = encode(groups, 0, mid, *skip_choice);
    skip2 = encode(groups, mid, groups.size(), *skip_choice);
  }
  BestPair best;
  long long examined = 0;
  bool exceeded = false;
  for (const auto& a : s1) {
    if (exceeded) break;
    for (const auto& b : s2) {
      if (++examined > budget) {
        exceeded = true;
        break;
      }
      if (a.code == skip1 && b.code == skip2) continue;
      best.offer(eval_delta(a.sum + b.sum, target), a.code, b.code);
    }
  }
  return finish(groups, mid, best, exceeded, examined);
}

SubsetSearchOutcome subset_search_mitm(const std::vector<OptionGroup>& groups,
                                       std::optional<double> target,
                                       const std::vector<int>* skip_choice, long long budget) {
  const std::size_t mid = split_point(groups);
  auto s1 = enumerate_half(groups, 0, mid);
  auto s2 = enumerate_half(groups, mid, groups.size());
  std::uint64_t skip1 = ~0ull, skip2 = ~0ull;
  if (skip_choice) {
    skip1 = encode(groups, 0, mid, *skip_choice);
    skip2 = encode(groups, mid, groups.size(), *skip_choice);
  }

  // sort key: plain real part for a fixed target, fractional part otherwise
  auto key = [&](const SumEntry& e) {
    const double r = e.sum.real();
    if (target) return r;
    return r - std::floor(r);
  };
  std::sort(s2.begin(), s2.end(), [&](const SumEntry& a, const SumEntry& b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    return a.code < b.code;
  });
  std::vector<double> keys(s2.size());
  for (std::size_t i = 0; i < s2.size(); ++i) keys[i] = key(s2[i]);

  BestPair best;
  long long examined = 0;
  bool exceeded = false;

  auto consider = [&](const SumEntry& a, const SumEntry& b) {
    if (a.code == skip1 && b.code == skip2) return;
    best.offer(eval_delta(a.sum + b.sum, target), a.code, b.code);
  };

  const std::size_t n2 = s2.size();
  for (const auto& a : s1) {
    if (exceeded) break;
    // wanted key for the partner sum
    double want;
    if (target) {
      want = *target - a.sum.real();
    } else {
      want = -a.sum.real();
      want -= std::floor(want);
    }
    const auto it = std::lower_bound(keys.begin(), keys.end(), want);
    std::size_t base = static_cast<std::size_t>(it - keys.begin());

    // prune by the real-part (or mod-1) gap, a lower bound for the distance
    auto gap = [&](std::size_t idx) {
      const double d = std::abs(keys[idx] - want);
      return target ? d : std::min(d, 1.0 - d);
    };
    // scan right then left of the insertion point; stop when the gap alone
    // already exceeds the best distance
    for (std::size_t step = 0; step < n2; ++step) {
      const std::size_t idx = (base + step) % n2;
      const bool wrapped = base + step >= n2;
      if (target && wrapped) break;
      if (++examined > budget) {
        exceeded = true;
        break;
      }
      if (best.found && gap(idx) >= best.delta && step > 0) break;
      consider(a, s2[idx]);
    }
    if (exceeded) break;
    for (std::size_t step = 1; step <= n2; ++step) {
      const std::ptrdiff_t raw = static_cast<std::ptrdiff_t>(base) - static_cast<std::ptrdiff_t>(step);
      if (target && raw < 0) break;
      const std::size_t idx = (raw % static_cast<std::ptrdiff_t>(n2) + n2) % n2;
      if (++examined > budget) {
        exceeded = true;
        break;
      }
      if (best.found && gap(idx) >= best.delta) break;
      consider(a, s2[idx]);
    }
  }
  return finish(groups, mid, best, exceeded, examined);
}

namespace {

// strategy driver: exhaustive below 2^26 pair comparisons, halves otherwise
SubsetSearchOutcome run_search(const std::vector<OptionGroup>& groups, std::optional<double> target,
                               const std::vector<int>* skip, long long budget, std::string& strategy) {
  double log_total = 0;
  for (const auto& g : groups) log_total += std::log2(double(g.values.size()));
  if (log_total <= 26.0) {
    strategy = "exhaustive";
    return subset_search_exhaustive(groups, target, skip, budget);
  }
  strategy = "meet_in_middle";
  if (log_total / 2 > 22.0) { // half tables would not fit in memory
    SubsetSearchOutcome out;
    out.budget_exceeded = true;
    out.delta = std::numeric_limits<double>::infinity();
    return out;
  }
  return subset_search_mitm(groups, target, skip, budget);
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (k == 0) out = {{}};
  return out;
}

} // namespace

ObstructionCertificate theorem_d_check(const IndexTable& table, const ToleranceProfile& tol,
                                       long long budget, int threads) {
  (void)threads; // groups below the parallel threshold run sequentially
  ObstructionCertificate cert;
  cert.mode = "theorem_d";
  cert.tol = tol;
  cert.stats.budget = budget;

  if (table.any_degenerate) {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = "degenerate or multiple singularity present";
    return cert;
  }
  for (const auto& s : table.sings) {
    if (s.cls != SingClass::Simple && s.cls != SingClass::Poincare) {
      cert.verdict = Verdict::Inconclusive;
      cert.reason = "non-simple singularity (eigenvalue quotient is a positive rational)";
      return cert;
    }
    if (s.class_margin <= tol.eps_obstruction) {
      cert.verdict = Verdict::Inconclusive;
      cert.reason = "classification margin below eps_obstruction";
      return cert;
    }
  }

  std::vector<OptionGroup> groups;
  std::vector<int> full_choice;
  for (std::size_t i = 0; i < table.slots.size(); ++i) {
    OptionGroup g;
    g.values = {Cplx(0), table.slots[i].index};
    g.slots = {{}, {static_cast<int>(i)}};
    g.beta_inc = {0, 0};
    groups.push_back(std::move(g));
    full_choice.push_back(1);
  }

  auto outcome = run_search(groups, std::nullopt, &full_choice, budget, cert.stats.strategy);
  cert.stats.examined = outcome.examined;
  cert.stats.budget_exceeded = outcome.budget_exceeded;
  cert.delta_min = outcome.delta;
  if (outcome.budget_exceeded) {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = "budget exceeded; delta_min is partial";
    return cert;
  }
  if (outcome.delta <= tol.eps_obstruction) {
    cert.verdict = Verdict::Obstructed;
    std::vector<int> chosen;
    for (std::size_t g = 0; g < groups.size(); ++g)
      for (int s : groups[g].slots[outcome.choice[g]]) chosen.push_back(s);
    cert.witness = annotate_configuration(std::move(chosen), table, {});
  } else {
    cert.verdict = Verdict::Certified;
  }
  return cert;
}

namespace {

struct EligibleSlots {
  std::vector<std::vector<int>> transverse; // per component: type-II transverse slots
  std::vector<std::array<int, 2>> iii;      // per type-III singularity: its two slots
};

EligibleSlots eligible_slots(const IndexTable& table, std::size_t n_components) {
  EligibleSlots e;
  e.transverse.assign(n_components, {});
  std::map<int, std::vector<int>> by_sing;
  for (std::size_t i = 0; i < table.slots.size(); ++i) {
    const Slot& s = table.slots[i];
    if (s.type == SingType::II && !s.along_curve && s.component >= 0 &&
        s.component < static_cast<int>(n_components))
      e.transverse[s.component].push_back(static_cast<int>(i));
    if (s.type == SingType::III) by_sing[s.sing].push_back(static_cast<int>(i));
  }
  for (const auto& [sing, slots] : by_sing)
    if (slots.size() == 2) e.iii.push_back({slots[0], slots[1]});
  return e;
}

} // namespace

bool for_each_admissible(const IndexTable& table, const std::vector<int>& component_degrees,
                         const std::function<bool(const Configuration&)>& visit) {
  EligibleSlots el = eligible_slots(table, component_degrees.size());
  const int n_iii = static_cast<int>(el.iii.size());

  int k_max = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < component_degrees.size(); ++i) {
    const int d = std::max(1, component_degrees[i]);
    k_max = std::min(k_max, static_cast<int>(el.transverse[i].size()) / d);
  }
  if (component_degrees.empty()) k_max = 0;

  // total slots of the eligible universe, to recognize the full selection
  std::size_t universe = n_iii * 2;
  for (const auto& t : el.transverse) universe += t.size();

  for (int k = 0; k <= k_max; ++k) {
    // per-component combinations for this k
    std::vector<std::vector<std::vector<int>>> comp_choices;
    for (std::size_t i = 0; i < component_degrees.size(); ++i) {
      const int c = k * std::max(1, component_degrees[i]);
      auto combos = combinations(static_cast<int>(el.transverse[i].size()), c);
      comp_choices.push_back(std::move(combos));
    }
    for (int beta = 0; beta <= n_iii; ++beta) {
      auto both_sets = combinations(n_iii, beta);
      for (const auto& both : both_sets) {
        std::vector<bool> is_both(n_iii, false);
        for (int b : both) is_both[b] = true;
        std::vector<int> rest;
        for (int i = 0; i < n_iii; ++i)
          if (!is_both[i]) rest.push_back(i);
        // states of the remaining type-III singularities: none / first / second
        std::vector<int> state(rest.size(), 0);
        for (;;) {
          // component combination odometer
          std::vector<std::size_t> ci(comp_choices.size(), 0);
          for (;;) {
            std::vector<int> slots;
            for (std::size_t i = 0; i < comp_choices.size(); ++i)
              for (int pos : comp_choices[i][ci[i]]) slots.push_back(el.transverse[i][pos]);
            for (int b : both) {
              slots.push_back(el.iii[b][0]);
              slots.push_back(el.iii[b][1]);
            }
            for (std::size_t r = 0; r < rest.size(); ++r) {
              if (state[r] == 1) slots.push_back(el.iii[rest[r]][0]);
              if (state[r] == 2) slots.push_back(el.iii[rest[r]][1]);
            }
            if (!slots.empty() && slots.size() != universe) {
              Configuration a = annotate_configuration(std::move(slots), table, component_degrees);
              if (!visit(a)) return false;
            }
            // advance component odometer
            std::size_t pos = 0;
            while (pos < ci.size()) {
              if (++ci[pos] < comp_choices[pos].size()) break;
              ci[pos] = 0;
              ++pos;
            }
            if (pos == ci.size()) break;
            if (comp_choices.empty()) break;
          }
          // advance type-III state odometer
          std::size_t pos = 0;
          while (pos < state.size()) {
            if (++state[pos] <= 2) break;
            state[pos] = 0;
            ++pos;
          }
          if (pos == state.size()) break;
          if (state.empty()) break;
        }
      }
    }
  }
  return true;
}

ObstructionCertificate nodal_obstruction_check(const IndexTable& table, const SingularityCensus& cen,
                                               const std::vector<int>& component_degrees,
                                               const ToleranceProfile& tol, long long budget,
                                               int threads) {
  (void)threads;
  ObstructionCertificate cert;
  cert.mode = "nodal_refined";
  cert.tol = tol;
  cert.stats.budget = budget;

  auto inconclusive = [&](const std::string& why) {
    cert.verdict = Verdict::Inconclusive;
    cert.reason = why;
    return cert;
  };

  if (!cen.curve_invariant) return inconclusive("curve is not invariant: " + cen.diagnostics);
  if (!cen.curve_nodal) return inconclusive("curve fails the nodality requirement: " + cen.diagnostics);
  if (table.any_ambiguous) return inconclusive("ambiguous eigendirection/branch tangency");
  if (table.any_degenerate) return inconclusive("degenerate or multiple singularity present");

  for (const auto& s : table.sings) {
    if (s.type == SingType::I) {
      // Slots of these points never enter a configuration; they only need a
      // two-separatrix guarantee, which fails when the quotient sits at an
      // integer or reciprocal-integer resonance.
      if (s.cls == SingClass::Degenerate) return inconclusive("degenerate curve-crossing singularity");
      double resonance = std::numeric_limits<double>::infinity();
      for (int m = 1; m <= tol.q_max; ++m) {
        resonance = std::min(resonance, std::abs(s.quotient - Cplx(m, 0)));
        resonance = std::min(resonance, std::abs(s.quotient - Cplx(1.0 / m, 0)));
      }
      if (resonance <= tol.eps_obstruction)
        return inconclusive("curve-crossing singularity at an integer-ratio resonance");
    } else {
      if (s.cls != SingClass::Simple && s.cls != SingClass::Poincare)
        return inconclusive("non-simple singularity in scope");
      if (s.class_margin <= tol.eps_obstruction)
        return inconclusive("classification margin below eps_obstruction");
    }
  }

  EligibleSlots el = eligible_slots(table, component_degrees.size());
  int k_max = std::numeric_limits<int>::max();
  for (std::size_t i = 0; i < component_degrees.size(); ++i) {
    const int d = std::max(1, component_degrees[i]);
    k_max = std::min(k_max, static_cast<int>(el.transverse[i].size()) / d);
  }
  if (component_degrees.empty()) k_max = 0;

  cert.delta_min = std::numeric_limits<double>::infinity();
  const long long per_k_budget = budget / (k_max + 1);

  for (int k = 0; k <= k_max; ++k) {
    std::vector<OptionGroup> groups;
    bool feasible = true;
    bool k_is_full = true;
    for (std::size_t i = 0; i < component_degrees.size(); ++i) {
      const int need = k * std::max(1, component_degrees[i]);
      const auto& tslots = el.transverse[i];
      if (need > static_cast<int>(tslots.size())) {
        feasible = false;
        break;
      }
      if (need != static_cast<int>(tslots.size())) k_is_full = false;
      OptionGroup g;
      for (const auto& combo : combinations(static_cast<int>(tslots.size()), need)) {
        Cplx sum = 0;
        std::vector<int> chosen;
        for (int pos : combo) {
          sum += table.slots[tslots[pos]].index;
          chosen.push_back(tslots[pos]);
        }
        g.values.push_back(sum);
        g.slots.push_back(std::move(chosen));
        g.beta_inc.push_back(0);
      }
      groups.push_back(std::move(g));
    }
    if (!feasible) continue;
    for (const auto& pair : el.iii) {
      OptionGroup g;
      const Cplx v0 = table.slots[pair[0]].index;
      const Cplx v1 = table.slots[pair[1]].index;
      g.values = {Cplx(0), v0, v1, v0 + v1 + Cplx(1, 0)}; // +1 folds beta into the sum
      g.slots = {{}, {pair[0]}, {pair[1]}, {pair[0], pair[1]}};
      g.beta_inc = {0, 0, 0, 1};
      groups.push_back(std::move(g));
    }

    // the empty configuration (k = 0, nothing chosen) and the full eligible
    // set are excluded from admissibility
    std::optional<std::vector<int>> skip;
    if (k == 0) {
      skip = std::vector<int>(groups.size(), 0);
    } else if (k == k_max && k_is_full) {
      std::vector<int> full;
      for (const auto& g : groups) full.push_back(static_cast<int>(g.values.size()) - 1);
      skip = std::move(full);
    }

    std::string strategy;
    auto outcome = run_search(groups, double(k) * double(k), skip ? &*skip : nullptr, per_k_budget,
                              strategy);
    if (cert.stats.strategy.empty() || strategy == "meet_in_middle") cert.stats.strategy = strategy;
    cert.stats.examined += outcome.examined;
    if (outcome.budget_exceeded) {
      cert.stats.budget_exceeded = true;
      cert.delta_min = std::min(cert.delta_min, outcome.delta);
      cert.verdict = Verdict::Inconclusive;
      cert.reason = "budget exceeded; delta_min is partial";
      return cert;
    }
    if (outcome.delta < cert.delta_min) {
      cert.delta_min = outcome.delta;
      if (outcome.delta <= tol.eps_obstruction) {
        std::vector<int> chosen;
        for (std::size_t g = 0; g < groups.size(); ++g)
          for (int s : groups[g].slots[outcome.choice[g]]) chosen.push_back(s);
        cert.witness = annotate_configuration(std::move(chosen), table, component_degrees);
      }
    }
  }

  cert.verdict = cert.witness ? Verdict::Obstructed : Verdict::Certified;
  return cert;
}

} // namespace camsad
