#include "foldcode/binom.hpp"

#include <limits>
#include <stdexcept>

namespace foldcode {

Int binom(long long a, long long b) {
  if (b < 0 || a < 0 || b > a) return 0;
  if (b > a - b) b = a - b;
  Int num = 1;
  for (long long k = 1; k <= b; ++k) {
    num *= (a - b + k);
    num /= k;  // exact: C(a-b+k, k) is integral at every step
  }
  return num;
}

std::int64_t to_i64(const Int& v) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("value does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

double to_double_exact(const Int& v) {
  const Int lim = Int(1) << 53;
  if (v >= lim || v <= -lim)
    throw std::overflow_error("value not exactly representable as double");
  return static_cast<double>(v);
}

}  // namespace foldcode
