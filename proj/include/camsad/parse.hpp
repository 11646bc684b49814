#pragma once

#include <map>
#include <string>
#include <string_view>

#include "camsad/poly.hpp"

namespace camsad {

// Expression grammar over polynomials: +, -, *, / (constant divisor only),
// ^ with non-negative integer exponents, parentheses, juxtaposition as
// multiplication, and "i" as the imaginary unit. Coefficients are decimals,
// rationals p/q, or complex (a+bi). Whitespace is insignificant.
//
// Affine mode admits the variables x, y; homogeneous mode admits x, y, z
// (case-insensitive) and requires every expanded term to have equal total
// degree. Named bindings supply external parameter values.

template <class K>
using Bindings = std::map<std::string, K, std::less<>>;

template <class K>
Affine<K> parse_affine(std::string_view text, const Bindings<K>& bindings = {});

// expected_degree (when >= 0) fixes the declared degree of a zero result and
// is cross-checked against nonzero input.
template <class K>
Hom<K> parse_hom(std::string_view text, const Bindings<K>& bindings = {}, int expected_degree = -1);

// Graded-lex descending canonical form; parse(print(p)) == p, exactly in
// exact mode and bit-for-bit for float coefficients.
template <class K>
std::string print_poly(const Affine<K>& p);
template <class K>
std::string print_poly(const Hom<K>& p);

} // namespace camsad
