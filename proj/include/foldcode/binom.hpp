#pragma once

#include <cstdint>
#include <boost/multiprecision/cpp_int.hpp>

namespace foldcode {

// Exact integers / rationals for all coefficient work. Intermediate binomial
// products overflow 64 bits well before the CLI caps are reached.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// C(a, b) with the zero convention: 0 whenever b < 0, a < 0 or b > a.
Int binom(long long a, long long b);

// Narrowing helpers; throw std::overflow_error if the value does not fit.
std::int64_t to_i64(const Int& v);
double to_double_exact(const Int& v); // requires |v| < 2^53

}  // namespace foldcode
