#pragma once

#include <string>
#include <vector>

#include "camsad/foliation.hpp"
#include "camsad/projective.hpp"

namespace camsad {

// Kolmogorov family: the three coordinate lines are invariant, the key
// parameter a0 defaults to a negative real whose powers {1, a0, 1/a0} admit
// no integer relation.
struct KolmogorovParams {
  int n = 2;
  Cplx a0 = Cplx(-1.189207115002721, 0); // -2^(1/4)
  Cplx b = Cplx(0, 0);
};

struct FixtureEntry {
  std::string label;
  ProjectivePoint point;
  std::vector<Cplx> values; // quotient pair, or (along, transverse) index pair
  int line = -1;            // 0,1,2 for the components x, y, z
};

// Closed-form expectations attached to a constructed family member, used to
// validate the numeric pipeline end to end.
struct Fixture {
  std::vector<FixtureEntry> corners;   // eigenvalue quotient pairs
  std::vector<FixtureEntry> type_ii;   // index along the line, then transverse
  std::vector<FixtureEntry> type_iii;  // populated only at b = 0
};

struct KolmogorovFoliation {
  HomOneForm<Cplx> form;
  Fixture fixture;
  KolmogorovParams params;
};

KolmogorovFoliation kolmogorov(const KolmogorovParams& params);

// Logarithmic foliation attached to a set of lines and weights with zero sum:
//   Omega = (prod L_i) * sum_i w_i dL_i / L_i.
// Every line is invariant. Two lines give a degenerate pencil, accepted with
// a warning flag.
template <class K>
struct LogarithmicResult {
  HomOneForm<K> form;
  bool degenerate_pencil = false;
};

template <class K>
LogarithmicResult<K> logarithmic(const std::vector<Hom<K>>& lines, const std::vector<K>& weights,
                                 double eps = 1e-12) {
  if (lines.size() != weights.size() || lines.size() < 2)
    throw std::invalid_argument("need one weight per line and at least two lines");
  for (const auto& l : lines)
    if (l.declared_degree() != 1 || l.is_zero()) throw std::invalid_argument("components must be lines");
  // pairwise independence
  for (std::size_t i = 0; i < lines.size(); ++i)
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      std::array<K, 3> a{lines[i].coeff({1, 0, 0}), lines[i].coeff({0, 1, 0}), lines[i].coeff({0, 0, 1})};
      std::array<K, 3> b{lines[j].coeff({1, 0, 0}), lines[j].coeff({0, 1, 0}), lines[j].coeff({0, 0, 1})};
      K c0 = a[1] * b[2] - a[2] * b[1];
      K c1 = a[2] * b[0] - a[0] * b[2];
      K c2 = a[0] * b[1] - a[1] * b[0];
      const double m = CoeffOps<K>::abs_approx(c0) + CoeffOps<K>::abs_approx(c1) + CoeffOps<K>::abs_approx(c2);
      if (m <= eps) throw std::invalid_argument("lines must be pairwise independent");
    }
  K wsum = CoeffOps<K>::zero();
  for (const auto& w : weights) wsum += w;
  if constexpr (CoeffOps<K>::exact) {
    if (!CoeffOps<K>::is_zero(wsum)) throw std::invalid_argument("weights must sum to zero");
  } else {
    double wscale = 0;
    for (const auto& w : weights) wscale = std::max(wscale, CoeffOps<K>::abs_approx(w));
    if (CoeffOps<K>::abs_approx(wsum) > 1e-9 * std::max(1.0, wscale))
      throw std::invalid_argument("weights must sum to zero");
  }

  const int k = static_cast<int>(lines.size());
  Hom<K> p(k - 1), q(k - 1), r(k - 1);
  for (int i = 0; i < k; ++i) {
    Hom<K> prod(0);
    prod.add_term({0, 0, 0}, CoeffOps<K>::one());
    for (int j = 0; j < k; ++j)
      if (j != i) prod = prod * lines[j];
    p += prod.scaled(weights[i] * lines[i].coeff({1, 0, 0}));
    q += prod.scaled(weights[i] * lines[i].coeff({0, 1, 0}));
    r += prod.scaled(weights[i] * lines[i].coeff({0, 0, 1}));
  }
  LogarithmicResult<K> out{HomOneForm<K>::make(std::move(p), std::move(q), std::move(r)), k == 2};
  return out;
}

// The classical degree-n foliation with no invariant algebraic curve, in the
// affine presentation (y^n - x^{n+1}, 1 - x^n y); the projective extension
// picks up a factor of Z which is divided out to reach the saturated form.
HomOneForm<GaussRat> jouanolou(int n);

} // namespace camsad
