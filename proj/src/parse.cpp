#include "camsad/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <vector>

#include "camsad/util.hpp"

namespace camsad {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      bool dot = false;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || (s[j] == '.' && !dot))) {
        if (s[j] == '.') dot = true;
        ++j;
      }
      // exponent part of a float literal
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) {
          ++k;
          while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
          j = k;
        }
      }
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default:
        throw ParseError(i, std::string("unexpected character '") + c + "'");
    }
    out.push_back({k, std::string(1, c), i});
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

// Unrestricted trivariate accumulator; homogeneity is checked afterwards.
template <class K>
struct Poly3 {
  using Ops = CoeffOps<K>;
  std::map<Exp3, K, GrlexLess3> t;

  static Poly3 constant(K c) {
    Poly3 p;
    p.add({0, 0, 0}, std::move(c));
    return p;
  }
  static Poly3 variable(int v) {
    Poly3 p;
    Exp3 e;
    (v == 0 ? e.ex : v == 1 ? e.ey : e.ez) = 1;
    p.add(e, Ops::one());
    return p;
  }
  void add(Exp3 e, K c) {
    if (Ops::is_zero(c)) return;
    auto it = t.find(e);
    if (it == t.end()) {
      t.emplace(e, std::move(c));
    } else {
      it->second += c;
      if (Ops::is_zero(it->second)) t.erase(it);
    }
  }
  Poly3 operator+(const Poly3& o) const {
    Poly3 out = *this;
    for (const auto& [e, c] : o.t) out.add(e, c);
    return out;
  }
  Poly3 operator-(const Poly3& o) const {
    Poly3 out = *this;
    for (const auto& [e, c] : o.t) out.add(e, -c);
    return out;
  }
  Poly3 operator*(const Poly3& o) const {
    Poly3 out;
    for (const auto& [ea, ca] : t)
      for (const auto& [eb, cb] : o.t) out.add(ea + eb, ca * cb);
    return out;
  }
  bool is_constant() const { return t.empty() || (t.size() == 1 && t.begin()->first.total() == 0); }
  K constant_value() const { return t.empty() ? Ops::zero() : t.begin()->second; }
};

template <class K>
K number_literal(const std::string& text, std::size_t offset);

template <>
GaussRat number_literal<GaussRat>(const std::string& text, std::size_t offset) {
  // decimal and exponent notation map to exact rationals
  std::string digits;
  long frac_digits = 0, exp10 = 0;
  std::size_t i = 0;
  bool seen_dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      seen_dot = true;
    } else if (c == 'e' || c == 'E') {
      exp10 = std::strtol(text.c_str() + i + 1, nullptr, 10);
      break;
    } else {
      digits += c;
      if (seen_dot) ++frac_digits;
    }
  }
  if (digits.empty()) throw ParseError(offset, "malformed number");
  mpz_class num(digits, 10);
  mpz_class den(1);
  long shift = exp10 - frac_digits;
  mpz_class ten(10);
  if (shift >= 0) {
    mpz_class scale;
    mpz_pow_ui(scale.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(shift));
    num *= scale;
  } else {
    mpz_pow_ui(den.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(-shift));
  }
  Rat r(num, den);
  r.canonicalize();
  return GaussRat(r);
}

template <>
Cplx number_literal<Cplx>(const std::string& text, std::size_t offset) {
  double v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc()) throw ParseError(offset, "malformed number");
  return Cplx(v, 0);
}

template <class K>
class Parser {
 public:
  Parser(std::string_view text, const Bindings<K>& bindings, bool homogeneous)
      : toks_(lex(text)), bindings_(bindings), homogeneous_(homogeneous) {}

  Poly3<K> run() {
    Poly3<K> p = expr();
    expect(Tok::End, "trailing input");
    return p;
  }

 private:
  using Ops = CoeffOps<K>;

  const Token& cur() const { return toks_[pos_]; }
  void advance() { ++pos_; }
  void expect(Tok k, const char* what) {
    if (cur().kind != k) throw ParseError(cur().offset, std::string("expected ") + what);
    if (k != Tok::End) advance();
  }

  Poly3<K> expr() {
    bool neg = false;
    if (cur().kind == Tok::Plus) {
      advance();
    } else if (cur().kind == Tok::Minus) {
      neg = true;
      advance();
    }
    Poly3<K> acc = term();
    if (neg) acc = Poly3<K>() - acc;
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      const bool sub = cur().kind == Tok::Minus;
      advance();
      Poly3<K> rhs = term();
      acc = sub ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Poly3<K> term() {
    Poly3<K> acc = factor();
    for (;;) {
      if (cur().kind == Tok::Star) {
        advance();
        acc = acc * factor();
      } else if (cur().kind == Tok::Slash) {
        const std::size_t off = cur().offset;
        advance();
        Poly3<K> d = factor();
        if (!d.is_constant()) throw ParseError(off, "divisor must be a constant");
        K v = d.constant_value();
        if (Ops::is_zero(v)) throw ParseError(off, "division by zero");
        Poly3<K> inv = Poly3<K>::constant(Ops::one() / v);
        acc = acc * inv;
      } else if (cur().kind == Tok::Ident || cur().kind == Tok::LParen) {
        acc = acc * factor(); // juxtaposition
      } else {
        break;
      }
    }
    return acc;
  }

  Poly3<K> factor() {
    Poly3<K> base = primary();
    if (cur().kind == Tok::Caret) {
      const std::size_t off = cur().offset;
      advance();
      if (cur().kind != Tok::Number) throw ParseError(cur().offset, "expected integer exponent");
      long e = 0;
      for (char c : cur().text) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
          throw ParseError(cur().offset, "exponent must be a non-negative integer");
        e = e * 10 + (c - '0');
        if (e > 64) throw ParseError(off, "exponent too large");
      }
      advance();
      Poly3<K> out = Poly3<K>::constant(Ops::one());
      for (long k = 0; k < e; ++k) out = out * base;
      return out;
    }
    return base;
  }

  Poly3<K> primary() {
    const Token t = cur();
    switch (t.kind) {
      case Tok::Number:
        advance();
        return Poly3<K>::constant(number_literal<K>(t.text, t.offset));
      case Tok::LParen: {
        advance();
        Poly3<K> p = expr();
        expect(Tok::RParen, "')'");
        return p;
      }
      case Tok::Ident:
        advance();
        return ident(t);
      default:
        throw ParseError(t.offset, "expected a number, variable, or '('");
    }
  }

  int variable_index(char c) const {
    switch (c) {
      case 'x': case 'X': return 0;
      case 'y': case 'Y': return 1;
      case 'z': case 'Z': return homogeneous_ ? 2 : -1;
      default: return -1;
    }
  }

  Poly3<K> ident(const Token& t) {
    if (t.text == "i" || t.text == "I") {
      if constexpr (Ops::exact) {
        return Poly3<K>::constant(GaussRat::i());
      } else {
        return Poly3<K>::constant(Cplx(0, 1));
      }
    }
    if (auto it = bindings_.find(t.text); it != bindings_.end())
      return Poly3<K>::constant(it->second);
    // a run of variable letters is their product: "xy" == x*y
    Poly3<K> acc = Poly3<K>::constant(Ops::one());
    for (std::size_t k = 0; k < t.text.size(); ++k) {
      const int v = variable_index(t.text[k]);
      if (v < 0) throw ParseError(t.offset + k, "unknown variable '" + t.text + "'");
      acc = acc * Poly3<K>::variable(v);
    }
    return acc;
  }

  std::vector<Token> toks_;
  const Bindings<K>& bindings_;
  bool homogeneous_;
  std::size_t pos_ = 0;
};

} // namespace

template <class K>
Affine<K> parse_affine(std::string_view text, const Bindings<K>& bindings) {
  Parser<K> parser(text, bindings, /*homogeneous=*/false);
  Poly3<K> p = parser.run();
  Affine<K> out;
  for (const auto& [e, c] : p.t) out.add_term({e.ex, e.ey}, c);
  return out;
}

namespace {

std::string monomial_str2(Exp2 e) {
  std::string s;
  auto app = [&s](const char* v, int k) {
    if (k == 0) return;
    if (!s.empty()) s += "*";
    s += v;
    if (k > 1) s += "^" + std::to_string(k);
  };
  app("x", e.ex);
  app("y", e.ey);
  return s;
}

std::string monomial_str3(Exp3 e) {
  std::string s;
  auto app = [&s](const char* v, int k) {
    if (k == 0) return;
    if (!s.empty()) s += "*";
    s += v;
    if (k > 1) s += "^" + std::to_string(k);
  };
  app("x", e.ex);
  app("y", e.ey);
  app("z", e.ez);
  return s;
}

} // namespace

template <class K>
Hom<K> parse_hom(std::string_view text, const Bindings<K>& bindings, int expected_degree) {
  Parser<K> parser(text, bindings, /*homogeneous=*/true);
  Poly3<K> p = parser.run();
  if (p.t.empty()) return Hom<K>(expected_degree >= 0 ? expected_degree : 0);
  const int deg = p.t.rbegin()->first.total();
  std::string offending;
  for (const auto& [e, c] : p.t) {
    if (e.total() != deg) {
      if (!offending.empty()) offending += ", ";
      std::string m = monomial_str3(e);
      offending += m.empty() ? "1" : m;
    }
  }
  if (!offending.empty())
    throw ParseError(0, "polynomial is not homogeneous of degree " + std::to_string(deg) +
                            "; offending terms: " + offending);
  if (expected_degree >= 0 && deg != expected_degree)
    throw ParseError(0, "expected homogeneous degree " + std::to_string(expected_degree) +
                            ", found " + std::to_string(deg));
  Hom<K> out(deg);
  for (const auto& [e, c] : p.t) out.add_term(e, c);
  return out;
}

namespace {

template <class K>
bool coeff_is_real(const K& c);
template <>
bool coeff_is_real<GaussRat>(const GaussRat& c) { return c.is_real(); }
template <>
bool coeff_is_real<Cplx>(const Cplx& c) { return c.imag() == 0.0; }

template <class K>
bool coeff_is_negative_real(const K& c);
template <>
bool coeff_is_negative_real<GaussRat>(const GaussRat& c) { return c.is_real() && sgn(c.re) < 0; }
template <>
bool coeff_is_negative_real<Cplx>(const Cplx& c) { return c.imag() == 0.0 && c.real() < 0.0; }

template <class K>
std::string coeff_magnitude_str(const K& c);
template <>
std::string coeff_magnitude_str<GaussRat>(const GaussRat& c) { return rat_str(abs(c.re)); }
template <>
std::string coeff_magnitude_str<Cplx>(const Cplx& c) { return dtos(std::abs(c.real())); }

template <class K>
bool coeff_is_one_mag(const K& c);
template <>
bool coeff_is_one_mag<GaussRat>(const GaussRat& c) { return c.is_real() && abs(c.re) == 1; }
template <>
bool coeff_is_one_mag<Cplx>(const Cplx& c) { return c.imag() == 0.0 && std::abs(c.real()) == 1.0; }

// Real coefficients contribute their sign to the separator; complex ones are
// printed in parenthesized (a+bi) form and joined with '+'.
template <class K, class Term, class MonoFn>
std::string print_terms(const std::vector<Term>& terms, MonoFn mono) {
  if (terms.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const std::string m = mono(e);
    std::string piece;
    bool neg = false;
    if (coeff_is_real<K>(c)) {
      neg = coeff_is_negative_real<K>(c);
      if (coeff_is_one_mag<K>(c) && !m.empty()) {
        piece = m;
      } else {
        piece = coeff_magnitude_str<K>(c);
        if (!m.empty()) piece += "*" + m;
      }
    } else {
      piece = CoeffOps<K>::str(c);
      if (!m.empty()) piece += "*" + m;
    }
    if (first) {
      s = neg ? "-" + piece : piece;
      first = false;
    } else {
      s += neg ? " - " : " + ";
      s += piece;
    }
  }
  return s;
}

} // namespace

template <class K>
std::string print_poly(const Affine<K>& p) {
  std::vector<std::pair<Exp2, K>> terms(p.terms().begin(), p.terms().end());
  std::reverse(terms.begin(), terms.end());
  return print_terms<K>(terms, monomial_str2);
}

template <class K>
std::string print_poly(const Hom<K>& p) {
  std::vector<std::pair<Exp3, K>> terms(p.terms().begin(), p.terms().end());
  std::reverse(terms.begin(), terms.end());
  return print_terms<K>(terms, monomial_str3);
}

template Affine<GaussRat> parse_affine<GaussRat>(std::string_view, const Bindings<GaussRat>&);
template Affine<Cplx> parse_affine<Cplx>(std::string_view, const Bindings<Cplx>&);
template Hom<GaussRat> parse_hom<GaussRat>(std::string_view, const Bindings<GaussRat>&, int);
template Hom<Cplx> parse_hom<Cplx>(std::string_view, const Bindings<Cplx>&, int);
template std::string print_poly<GaussRat>(const Affine<GaussRat>&);
template std::string print_poly<Cplx>(const Affine<Cplx>&);
template std::string print_poly<GaussRat>(const Hom<GaussRat>&);
template std::string print_poly<Cplx>(const Hom<Cplx>&);

} // namespace camsad
