//
// Copyright 2026 The invcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


// Independent reference implementations for tests. Everything here uses
// long double and textbook formulas so it shares no code with the library.

#ifndef INVCERT_TESTS_TEST_ORACLES_H_
#define INVCERT_TESTS_TEST_ORACLES_H_

#include <cmath>
#include <cstdint>

namespace invcert::testing {

inline constexpr long double kPiL = 3.141592653589793238462643383279502884L;

// Upper tail Q(x) = 1 - Phi(x) for x >= 0: power series below 3, Lentz
// continued fraction above.
inline long double UpperTail(long double x) {
  const long double phi = std::exp(-0.5L * x * x) / std::sqrt(2.0L * kPiL);
  if (x < 3.0L) {
    long double term = x, sum = x;
    for (int n = 1; n < 400; ++n) {
      term *= x * x / (2.0L * n + 1.0L);
      sum += term;
      if (term < 1e-22L * sum) break;
    }
    return 0.5L - phi * sum;
  }
  // Q(x) = phi / (x + 1/(x + 2/(x + 3/(x + ...))))
  const long double tiny = 1e-300L;
  long double f = x, c = x, d = 0.0L;
  for (int k = 1; k < 2000; ++k) {
    d = x + k * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = x + k / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0L) < 1e-20L) break;
  }
  return phi / f;
}

inline double NormalCdf(double x) {
  const long double lx = x;
  return static_cast<double>(lx >= 0 ? 1.0L - UpperTail(lx) : UpperTail(-lx));
}

// Bisection on NormalCdf.
inline double NormalQuantile(double p) {
  long double lo = -40.0L, hi = 40.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    const long double c = mid >= 0 ? 1.0L - UpperTail(mid) : UpperTail(-mid);
    (c < p ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// log I0 from the power series sum (x/2)^{2k} / (k!)^2.
inline double LogI0Series(double x) {
  const long double h = 0.25L * static_cast<long double>(x) * x;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k < 100000; ++k) {
    term *= h / (static_cast<long double>(k) * k);
    sum += term;
    if (term < 1e-22L * sum) break;
  }
  return static_cast<double>(std::log(sum));
}

// Continued fraction for the regularized incomplete beta function.
inline long double BetaContinuedFraction(long double a, long double b,
                                         long double x) {
  const long double tiny = 1e-300L;
  long double c = 1.0L, d = 1.0L - (a + b) * x / (a + 1.0L);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0L / d;
  long double h = d;
  for (int m = 1; m < 100000; ++m) {
    const long double m2 = 2.0L * m;
    long double aa = m * (b - m) * x / ((a + m2 - 1.0L) * (a + m2));
    d = 1.0L + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0L + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    h *= d * c;
    aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0L));
    d = 1.0L + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0L + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0L) < 1e-19L) break;
  }
  return h;
}

inline long double RegularizedBeta(long double a, long double b,
                                   long double x) {
  if (x <= 0.0L) return 0.0L;
  if (x >= 1.0L) return 1.0L;
  const long double front =
      std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
               a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0L) / (a + b + 2.0L)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0L - front * BetaContinuedFraction(b, a, 1.0L - x) / b;
}

// One-sided Clopper-Pearson bounds by bisection on the beta distribution.
inline double ClopperPearsonLowerOracle(int64_t k, int64_t n, double conf) {
  if (k == 0) return 0.0;
  long double lo = 0.0L, hi = 1.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    // Pr[Bin(n, mid) >= k] = I_mid(k, n - k + 1)
    (RegularizedBeta(k, n - k + 1, mid) < 1.0L - conf ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

inline double ClopperPearsonUpperOracle(int64_t k, int64_t n, double conf) {
  if (k == n) return 1.0;
  long double lo = 0.0L, hi = 1.0L;
  for (int it = 0; it < 200; ++it) {
    const long double mid = 0.5L * (lo + hi);
    // Pr[Bin(n, mid) <= k] = 1 - I_mid(k + 1, n - k)
    (1.0L - RegularizedBeta(k + 1, n - k, mid) > 1.0L - conf ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

// Pr[Bin(n, p) <= k] by direct summation of the probability mass function.
inline double BinomialCdfOracle(int64_t k, int64_t n, double p) {
  long double sum = 0.0L;
  for (int64_t j = 0; j <= k && j <= n; ++j) {
    const long double log_pmf = std::lgamma(n + 1.0L) - std::lgamma(j + 1.0L) -
                                std::lgamma(n - j + 1.0L) +
                                j * std::log(static_cast<long double>(p)) +
                                (n - j) * std::log1p(-static_cast<long double>(p));
    sum += std::exp(log_pmf);
  }
  return static_cast<double>(sum);
}

}  // namespace invcert::testing

#endif  // INVCERT_TESTS_TEST_ORACLES_H_
