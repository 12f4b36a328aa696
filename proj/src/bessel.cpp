#include <cmath>
#include <stdexcept>

#include "cqlad/floquet.hpp"

namespace cqlad::floquet {

namespace {

// Alternating ascending series sum_k (-x^2/4)^k / (k! (n+k)!) scaled by
// (x/2)^n / n!.  Used only where the term ratio stays <= 1, so there is no
// catastrophic cancellation.
double jn_series(int n, double x) {
  const double q = 0.25 * x * x;
  double term = std::exp(n * std::log(0.5 * x) - std::lgamma(n + 1.0));
  double sum = term;
  for (int k = 1; k <= 256; ++k) {
    term *= -q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (std::abs(term) <= 1e-18 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

// Miller's algorithm: run the three-term recurrence downward from an order
// well above both n and x (where J decays fast enough that the unwanted
// solution dies out), then normalize with J_0 + 2 sum_{k even} J_k = 1.
double jn_miller(int n, double x) {
  const int top = std::max(n, static_cast<int>(std::ceil(x)));
  int start = top + 40 + static_cast<int>(std::sqrt(static_cast<double>(top)));
  if (start % 2 == 1) ++start;

  double jp1 = 0.0;       // J_{k+1} (unnormalized)
  double jk = 1e-30;      // J_k
  double result = 0.0;
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm1 = (2.0 * k / x) * jk - jp1;
    jp1 = jk;
    jk = jm1;
    const int order = k - 1;
    if (order == n) result = jk;
    if (order > 0 && order % 2 == 0)
      norm += 2.0 * jk;
    else if (order == 0)
      norm += jk;
    if (std::abs(jk) > 1e250) {
      jk *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      result *= 1e-250;
    }
  }
  return result / norm;
}

}  // namespace

double bessel_jn(int n, double x) {
  if (n > 64 || n < -64) throw std::range_error("bessel_jn: |n| > 64");
  if (!std::isfinite(x) || std::abs(x) > 1e4)
    throw std::range_error("bessel_jn: |x| > 1e4 or not finite");

  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2 == 1) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (n % 2 == 1) sign = -sign;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  const double value =
      x <= 2.0 * std::sqrt(n + 1.0) ? jn_series(n, x) : jn_miller(n, x);
  return sign * value;
}

}  // namespace cqlad::floquet
