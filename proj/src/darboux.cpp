#include "camsad/darboux.hpp"

#include <Eigen/Dense>
#include <algorithm>

#include "camsad/parse.hpp"
#include "camsad/polygcd.hpp"

namespace camsad {

namespace {

// y-degree layers of T(x, b) seen as polynomials in b; layer j is the
// coefficient of x^j.
std::vector<CAffine> x_coefficients(const CAffine& t) {
  std::vector<CAffine> out;
  for (const auto& [e, c] : t.terms()) {
    if (out.size() <= static_cast<std::size_t>(e.ex)) out.resize(e.ex + 1);
    out[e.ex].add_term({0, e.ey}, c);
  }
  return out;
}

std::vector<Cplx> dense_univariate(const CAffine& p, int var) {
  std::vector<Cplx> out;
  for (const auto& [e, c] : p.terms()) {
    const int k = var == 0 ? e.ex : e.ey;
    if (out.size() <= static_cast<std::size_t>(k)) out.resize(k + 1, Cplx(0));
    out[k] += c;
  }
  if (out.empty()) out.push_back(Cplx(0));
  return out;
}

} // namespace

LineSearchResult find_invariant_lines(const VectorField<Cplx>& v, const ToleranceProfile& tol) {
  LineSearchResult out;
  const double scale = std::max(1.0, v.max_abs());
  CAffine x = CAffine::var_x(), y = CAffine::var_y();

  auto verify = [&](CAffine line) -> bool {
    auto k = cofactor(v, line, tol.eps_eq);
    if (!k) return false;
    CAffine resid = v.P * line.derivative(0) + v.Q * line.derivative(1) - *k * line;
    FoundCurve fc;
    fc.g = std::move(line);
    fc.cof = std::move(*k);
    fc.residual = resid.max_abs() / scale;
    for (const auto& c : out.curves)
      if ((c.g - fc.g).max_abs() <= 1e-6 && !c.line_at_infinity) return true; // already found
    out.curves.push_back(std::move(fc));
    return true;
  };

  // non-vertical lines y = a x + b: slopes from the singularities at infinity
  HomOneForm<Cplx> form = projectivize(v);
  CAffine r_inf;
  for (const auto& [e, c] : form.R().terms())
    if (e.ez == 0) r_inf.add_term({e.ex, e.ey}, c);
  if (r_inf.max_abs() <= 1e-12 * scale) {
    out.pencil = true;
    out.exhaustive = false;
    out.pencil_description = "the line at infinity consists of singular points";
    return out;
  }
  // candidate slopes are roots of r_inf(1, a)
  std::vector<Cplx> slope_poly;
  {
    CAffine tmp;
    for (const auto& [e, c] : r_inf.terms()) tmp.add_term({e.ey, 0}, c);
    slope_poly = dense_univariate(tmp, 0);
  }

  double smax = 0;
  for (const Cplx& c : slope_poly) smax = std::max(smax, std::abs(c));
  if (smax > 0) {
    std::vector<RootCluster> slopes;
    if (slope_poly.size() > 1) slopes = univariate_roots(slope_poly, tol);
    for (const auto& sl : slopes) {
      const Cplx a = sl.value;
      // T(x, b) = Q(x, a x + b) - a P(x, a x + b), with b in the y slot
      CAffine sub_y = x.scaled(a) + y;
      CAffine t = v.Q.substituted(x, sub_y) - v.P.substituted(x, sub_y).scaled(a);
      auto layers = x_coefficients(t);
      const CAffine* pick = nullptr;
      bool all_zero = true;
      double tscale = std::max(1.0, t.max_abs());
      for (const auto& l : layers) {
        if (l.max_abs() <= 1e-12 * tscale) continue;
        all_zero = false;
        if (l.degree() >= 1 && (!pick || l.degree() < pick->degree())) pick = &l;
      }
      if (all_zero) {
        out.pencil = true;
        out.exhaustive = false;
        out.pencil_description = "a pencil of parallel invariant lines";
        continue;
      }
      if (!pick) continue; // every coefficient is a nonzero constant: no intercept
      auto broots = univariate_roots(dense_univariate(*pick, 1), tol);
      for (const auto& br : broots) {
        bool ok = true;
        const double bscale = std::pow(std::max(1.0, std::abs(br.value)), std::max(1, t.degree()));
        for (const auto& l : layers)
          if (std::abs(l.eval_c(Cplx(0), br.value)) > std::sqrt(tol.eps_eq) * tscale * bscale) ok = false;
        if (!ok) continue;
        verify(y - x.scaled(a) - CAffine::constant(br.value));
      }
    }
  }

  // vertical lines x = c: P(c, .) identically zero
  if (v.P.is_zero()) {
    out.pencil = true;
    out.exhaustive = false;
    out.pencil_description = "every vertical line is invariant";
  } else {
    auto layers = [&] {
      std::vector<CAffine> ls;
      for (const auto& [e, c] : v.P.terms()) {
        if (ls.size() <= static_cast<std::size_t>(e.ey)) ls.resize(e.ey + 1);
        ls[e.ey].add_term({e.ex, 0}, c);
      }
      return ls;
    }();
    const CAffine* pick = nullptr;
    for (const auto& l : layers) {
      if (l.max_abs() <= 1e-12 * scale) continue;
      if (l.degree() >= 1 && (!pick || l.degree() < pick->degree())) pick = &l;
    }
    if (pick) {
      auto croots = univariate_roots(dense_univariate(*pick, 0), tol);
      for (const auto& cr : croots) {
        bool ok = true;
        const double cscale = std::pow(std::max(1.0, std::abs(cr.value)), std::max(1, v.P.degree()));
        for (const auto& l : layers)
          if (std::abs(l.eval_c(cr.value, Cplx(0))) > std::sqrt(tol.eps_eq) * scale * cscale) ok = false;
        if (!ok) continue;
        verify(x - CAffine::constant(cr.value));
      }
    }
  }

  // the projective closure always keeps the line at infinity invariant
  {
    FoundCurve fc;
    fc.line_at_infinity = true;
    fc.residual = 0;
    out.curves.push_back(fc);
  }
  return out;
}

RatAffine extactic_determinant(const VectorField<GaussRat>& v, int d) {
  if (d < 1) throw std::invalid_argument("extactic needs degree at least 1");
  // monomial basis of degree <= d
  std::vector<Exp2> basis;
  for (int t = 0; t <= d; ++t)
    for (int i = t; i >= 0; --i) basis.push_back({i, t - i});
  const std::size_t m = basis.size();

  std::vector<std::vector<RatAffine>> rows;
  std::vector<RatAffine> current;
  for (const auto& e : basis) current.push_back(RatAffine::monomial(e, GaussRat(1)));
  rows.push_back(current);
  for (std::size_t k = 1; k < m; ++k) {
    std::vector<RatAffine> next;
    for (const auto& f : rows.back()) next.push_back(v.P * f.derivative(0) + v.Q * f.derivative(1));
    rows.push_back(std::move(next));
  }
  // Bareiss over the bivariate entries
  std::vector<std::vector<RatAffine>> mat(m, std::vector<RatAffine>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) mat[r][c] = rows[r][c];

  RatAffine prev = RatAffine::constant(GaussRat(1));
  int sign = 1;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    if (mat[k][k].is_zero()) {
      std::size_t sr = k + 1;
      while (sr < m && mat[sr][k].is_zero()) ++sr;
      if (sr == m) return RatAffine();
      std::swap(mat[k], mat[sr]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < m; ++i) {
      for (std::size_t j = k + 1; j < m; ++j) {
        RatAffine num = mat[k][k] * mat[i][j] - mat[i][k] * mat[k][j];
        mat[i][j] = divide_exact(num, prev).quotient;
      }
      mat[i][k] = RatAffine();
    }
    prev = mat[k][k];
  }
  RatAffine det = mat[m - 1][m - 1];
  return sign < 0 ? -det : det;
}

namespace {

std::vector<Exp2> monomial_basis(int d) {
  std::vector<Exp2> basis;
  for (int t = 0; t <= d; ++t)
    for (int i = t; i >= 0; --i) basis.push_back({i, t - i});
  return basis;
}

CAffine from_coeffs(const std::vector<Exp2>& basis, const Eigen::VectorXcd& v) {
  CAffine out;
  for (std::size_t i = 0; i < basis.size(); ++i) out.add_term(basis[i], v[static_cast<int>(i)]);
  return out;
}

Eigen::VectorXcd coeff_vector(const CAffine& p, const std::map<Exp2, int, GrlexLess2>& index, int rows) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(rows);
  for (const auto& [e, c] : p.terms()) {
    auto it = index.find(e);
    if (it != index.end()) v[it->second] += c;
  }
  return v;
}

} // namespace

CurveSearchResult find_invariant_curves(const VectorField<Cplx>& v, const CurveSearchSpec& spec,
                                        const ToleranceProfile& tol) {
  CurveSearchResult out;
  const int d = spec.max_degree;
  const int n = v.degree_bound;
  const auto gbasis = monomial_basis(d);
  const auto kbasis = monomial_basis(std::max(0, n - 1));
  const int total_deg = n - 1 + d;
  std::map<Exp2, int, GrlexLess2> eq_index;
  {
    int r = 0;
    for (const auto& e : monomial_basis(total_deg)) eq_index[e] = r++;
  }
  const int rows = static_cast<int>(eq_index.size());
  const double scale = std::max(1.0, v.max_abs());

  // extactic divisibility filter (exact arithmetic on the lifted field)
  RatAffine ext;
  bool have_ext = false;
  if (d <= 3 && n <= 4) {
    VectorField<GaussRat> ve(lift_exact(v.P), lift_exact(v.Q), n);
    ext = extactic_determinant(ve, d);
    have_ext = true;
    out.extactic_vanishes = ext.is_zero();
  }
  CAffine extf;
  double ext_scale = 1;
  if (have_ext && !ext.is_zero()) {
    extf = to_float(ext);
    ext_scale = extf.max_abs();
    extf = extf.scaled(Cplx(1.0 / ext_scale, 0));
  }

  // precompute the derivative images of the curve basis
  std::vector<CAffine> der_images;
  for (const auto& e : gbasis) {
    CAffine m = CAffine::monomial(e, Cplx(1));
    der_images.push_back(v.P * m.derivative(0) + v.Q * m.derivative(1));
  }
  std::vector<CAffine> g_monomials;
  for (const auto& e : gbasis) g_monomials.push_back(CAffine::monomial(e, Cplx(1)));
  std::vector<CAffine> k_monomials;
  for (const auto& e : kbasis) k_monomials.push_back(CAffine::monomial(e, Cplx(1)));

  auto residual_of = [&](const CAffine& g, const CAffine& k) {
    CAffine e = v.P * g.derivative(0) + v.Q * g.derivative(1) - k * g;
    return e.max_abs() / (scale * std::max(1e-300, g.max_abs()));
  };

  auto already_have = [&](const CAffine& g) {
    for (const auto& c : out.curves) {
      // proportional up to normalization
      const auto [le, lc] = g.leading();
      Cplx other = c.g.coeff(le);
      if (std::abs(other) < 1e-12) continue;
      if ((g.scaled(Cplx(1) / lc) - c.g.scaled(Cplx(1) / other)).max_abs() <= 1e-6) return true;
    }
    return false;
  };

  auto excluded = [&](const CAffine& g) {
    // compare against products of the excluded factors up to degree d
    std::vector<CAffine> closure{CAffine::constant(Cplx(1))};
    std::vector<CAffine> all;
    for (std::size_t i = 0; i < closure.size(); ++i) {
      for (const auto& f : spec.excluded) {
        CAffine prod = closure[i] * f;
        if (prod.degree() > d) continue;
        closure.push_back(prod);
        all.push_back(prod);
      }
      if (closure.size() > 200) break;
    }
    for (const auto& f : all) {
      if (f.degree() != g.degree() || f.is_zero()) continue;
      const auto [le, lc] = g.leading();
      Cplx other = f.coeff(le);
      if (std::abs(other) < 1e-12) continue;
      if ((g.scaled(Cplx(1) / lc) - f.scaled(Cplx(1) / other)).max_abs() <= 1e-6) return true;
    }
    return false;
  };

  for (int start = 0; start < spec.starts; ++start) {
    // deterministic pseudo-random cofactor seed
    std::uint64_t state = splitmix64(spec.seed + 0x9E37ull * (start + 1));
    Eigen::VectorXcd kappa(static_cast<int>(kbasis.size()));
    for (int i = 0; i < kappa.size(); ++i) {
      state = splitmix64(state);
      const double re = uniform_double(state, -2, 2);
      state = splitmix64(state);
      const double im = uniform_double(state, -2, 2);
      kappa[i] = Cplx(re, im);
    }

    CAffine g, k;
    double res = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 40; ++iter) {
      // fix K, solve for the curve coefficients as the least singular vector
      CAffine kpoly;
      for (int i = 0; i < kappa.size(); ++i) kpoly += k_monomials[i].scaled(kappa[i]);
      Eigen::MatrixXcd a(rows, static_cast<int>(gbasis.size()));
      for (std::size_t c = 0; c < gbasis.size(); ++c)
        a.col(static_cast<int>(c)) = coeff_vector(der_images[c] - kpoly * g_monomials[c], eq_index, rows);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeThinV);
      Eigen::VectorXcd gv = svd.matrixV().col(svd.matrixV().cols() - 1);
      g = from_coeffs(gbasis, gv);
      if (g.degree() < 1) break; // collapsed to a constant

      // fix the curve, solve for K by least squares
      Eigen::MatrixXcd b(rows, static_cast<int>(kbasis.size()));
      for (std::size_t c = 0; c < kbasis.size(); ++c)
        b.col(static_cast<int>(c)) = coeff_vector(k_monomials[c] * g, eq_index, rows);
      Eigen::VectorXcd rhs = coeff_vector(v.P * g.derivative(0) + v.Q * g.derivative(1), eq_index, rows);
      kappa = b.colPivHouseholderQr().solve(rhs);
      k = CAffine();
      for (int i = 0; i < kappa.size(); ++i) k += k_monomials[i].scaled(kappa[i]);

      res = residual_of(g, k);
      if (res <= 1e-13) break;
    }
    if (res > std::min(1e-10, tol.eps_root)) continue;
    if (g.degree() < 1) continue;
    // normalize by the leading coefficient
    g = g.scaled(Cplx(1) / g.leading().second);
    g = g.pruned(1e-13 * std::max(1.0, g.max_abs()));
    if (g.degree() < 1) continue;
    if (already_have(g) || excluded(g)) continue;
    // extactic necessary condition
    if (have_ext && !ext.is_zero()) {
      auto dr = divide_exact(extf, g);
      if (dr.remainder.max_abs() > std::sqrt(tol.eps_eq) * std::max(1.0, extf.max_abs())) continue;
    }
    auto kc = cofactor(v, g, tol.eps_eq);
    if (!kc) continue;
    FoundCurve fc;
    fc.residual = residual_of(g, *kc);
    fc.g = std::move(g);
    fc.cof = std::move(*kc);
    out.curves.push_back(std::move(fc));
  }
  return out;
}

VectorField<Cplx> random_field(int n, SampleDist dist, std::uint64_t seed) {
  CAffine p, q;
  std::uint64_t state = splitmix64(seed);
  auto next_coeff = [&]() {
    state = splitmix64(state);
    if (dist == SampleDist::UniformBox) return Cplx(uniform_double(state, -1, 1), 0);
    const long v = static_cast<long>(state % 19) - 9;
    return Cplx(static_cast<double>(v), 0);
  };
  for (int t = 0; t <= n; ++t)
    for (int i = t; i >= 0; --i) {
      p.add_term({i, t - i}, next_coeff());
      q.add_term({i, t - i}, next_coeff());
    }
  return VectorField<Cplx>(std::move(p), std::move(q), n);
}

ExperimentReport sample_experiment(const SampleSpec& spec, const ToleranceProfile& tol, int threads) {
  ExperimentReport rep;
  rep.spec = spec;
  rep.tol = tol;
  rep.records.resize(spec.count);

  parallel_for(spec.count, threads, [&](std::size_t i) {
    SampleRecord& r = rep.records[i];
    r.index = static_cast<int>(i);
    r.seed = splitmix64(spec.seed ^ (0xA5A5ull + i * 0x9E3779B97F4A7C15ull));
    VectorField<Cplx> v = random_field(spec.n, spec.dist, r.seed);
    r.p_text = print_poly(v.P);
    r.q_text = print_poly(v.Q);

    bool has_curve = false;
    if (spec.check_lines) {
      auto lines = find_invariant_lines(v, tol);
      r.pencil = lines.pencil;
      int affine = 0;
      for (const auto& c : lines.curves)
        if (!c.line_at_infinity) ++affine;
      r.lines_found = affine;
      has_curve = has_curve || affine > 0 || lines.pencil;
    }
    if (spec.check_curves) {
      CurveSearchSpec cs;
      cs.max_degree = spec.curve_degree;
      cs.seed = r.seed;
      auto curves = find_invariant_curves(v, cs, tol);
      r.curves_found = static_cast<int>(curves.curves.size());
      has_curve = has_curve || r.curves_found > 0;
    }
    if (spec.check_certificate) {
      try {
        HomOneForm<Cplx> form = projectivize(v);
        auto curve = make_curve<Cplx>({CHom::monomial({0, 0, 1}, Cplx(1))});
        auto cen = census(form, curve, tol);
        auto table = index_table(cen);
        auto cert = nodal_obstruction_check(table, cen, {1}, tol);
        r.verdict = cert.verdict;
        r.delta_min = cert.delta_min;
        r.reason = cert.reason;
      } catch (const std::exception& e) {
        r.verdict = Verdict::Inconclusive;
        r.reason = e.what();
      }
    }
    r.consistent = !(r.verdict == Verdict::Certified && has_curve);
  });

  for (const auto& r : rep.records) {
    if (spec.check_certificate) {
      if (r.verdict == Verdict::Certified) ++rep.certified;
      if (r.verdict == Verdict::Obstructed) ++rep.obstructed;
      if (r.verdict == Verdict::Inconclusive) ++rep.inconclusive;
      if (std::isfinite(r.delta_min) && r.delta_min > 0) {
        int bin = static_cast<int>(std::floor(std::log10(r.delta_min))) + 13;
        bin = std::clamp(bin, 0, 13);
        rep.margin_histogram[bin] += 1;
      }
    }
    if (r.lines_found > 0 || r.pencil) ++rep.with_lines;
    if (r.curves_found > 0) ++rep.with_curves;
    if (!r.consistent) ++rep.inconsistent;
  }
  return rep;
}

} // namespace camsad
