#pragma once
// independent reference computations used only by tests
#include <gmpxx.h>

#include <vector>

namespace oracle {

// prod_{n>=1} (1 - q^n) to order N via pentagonal numbers
inline std::vector<mpz_class> euler_pentagonal(int N) {
  std::vector<mpz_class> c(N + 1);
  for (long k = -2 * N - 2; k <= 2 * N + 2; ++k) {
    long e = k * (3 * k - 1) / 2;
    if (e >= 0 && e <= N) c[e] += (k % 2 == 0) ? 1 : -1;
  }
  return c;
}

inline std::vector<mpz_class> convolve(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  std::vector<mpz_class> r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; i + j < a.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline std::vector<mpz_class> power(const std::vector<mpz_class>& a, int m) {
  std::vector<mpz_class> r(a.size());
  r[0] = 1;
  for (int i = 0; i < m; ++i) r = convolve(r, a);
  return r;
}

inline mpz_class divisor_sum(long n, int k) {
  mpz_class s = 0;
  for (long e = 1; e <= n; ++e)
    if (n % e == 0) {
      mpz_class t = 1;
      for (int i = 0; i < k; ++i) t *= e;
      s += t;
    }
  return s;
}

// number of tuples of `colors` partitions with total size n
inline std::vector<mpz_class> colored_partitions(int colors, int N) {
  std::vector<mpz_class> p(N + 1);
  p[0] = 1;
  for (int c = 0; c < colors; ++c)
    for (int part = 1; part <= N; ++part)
      for (int n = part; n <= N; ++n) p[n] += p[n - part];
  return p;
}

}  // namespace oracle
