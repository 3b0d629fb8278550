#pragma once

// Slow, independent reference computations. Nothing here shares code with the
// library beyond the PeriodicFunction container.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "tracesum/periodic.hpp"

namespace oracle {

using cplx = std::complex<double>;
using int128 = __int128;
using u128 = unsigned __int128;

inline cplx e(double t) { return std::polar(1.0, 2.0 * std::numbers::pi * t); }

inline int64_t gcd(int64_t a, int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    const int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline int64_t mod(int64_t a, int64_t m) { return ((a % m) + m) % m; }

inline int64_t inverse(int64_t x, int64_t m) {
  for (int64_t y = 0; y < m; ++y)
    if (mod(x * y, m) == 1 % m) return y;
  return -1;
}

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int64_t order(int64_t g, int64_t q) {
  int64_t x = g % q, k = 1;
  while (x != 1) {
    x = x * g % q;
    ++k;
  }
  return k;
}

inline int64_t primitive_root(int64_t q) {
  if (q == 2) return 1;
  for (int64_t g = 2; g < q; ++g)
    if (order(g, q) == q - 1) return g;
  return -1;
}

inline int mobius(int64_t n) {
  int sign = 1;
  for (int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

inline std::vector<cplx> dft(const std::vector<cplx>& v, int sign = +1) {
  const auto q = static_cast<int64_t>(v.size());
  std::vector<cplx> out(v.size());
  for (int64_t n = 0; n < q; ++n) {
    cplx acc = 0;
    for (int64_t x = 0; x < q; ++x) acc += v[static_cast<size_t>(x)] * e(static_cast<double>(sign * n * x % q) / q);
    out[static_cast<size_t>(n)] = acc / std::sqrt(static_cast<double>(q));
  }
  return out;
}

inline cplx kloosterman(int64_t n, int64_t m) {
  cplx acc = 0;
  for (int64_t x = 0; x < m; ++x)
    if (gcd(x, m) == 1) acc += e(static_cast<double>(mod(n * x + inverse(x, m), m)) / m);
  return acc / std::sqrt(static_cast<double>(m));
}

/// Kl_r(n; q) by r-1 nested loops (x_r is determined).
inline cplx hyper_kloosterman(int64_t n, int64_t q, int r) {
  if (mod(n, q) == 0) return 0.0;
  cplx acc = 0;
  std::function<void(int, int64_t, int64_t)> rec = [&](int depth, int64_t prod, int64_t sum) {
    if (depth == r - 1) {
      const int64_t last = mod(n * inverse(prod, q), q);
      acc += e(static_cast<double>(mod(sum + last, q)) / q);
      return;
    }
    for (int64_t x = 1; x < q; ++x) rec(depth + 1, prod * x % q, sum + x);
  };
  rec(0, 1, 0);
  return acc / std::pow(static_cast<double>(q), (r - 1) / 2.0);
}

inline int64_t legendre(int64_t n, int64_t q) {
  n = mod(n, q);
  if (n == 0) return 0;
  for (int64_t x = 1; x < q; ++x)
    if (x * x % q == n) return 1;
  return -1;
}

/// tau(1..N) from Euler's pentagonal series raised to the 24th power.
inline std::vector<int128> tau_pentagonal(int64_t N) {
  const auto len = static_cast<size_t>(N);
  std::vector<int64_t> euler(len, 0);  // prod (1 - q^n)
  // sum_k (-1)^k q^{k(3k-1)/2} over all integers k
  for (int64_t k = 0; k * (3 * k - 1) / 2 < N; ++k) {
    const int sign = k % 2 ? -1 : 1;
    euler[static_cast<size_t>(k * (3 * k - 1) / 2)] += sign;
    if (k > 0 && k * (3 * k + 1) / 2 < N) euler[static_cast<size_t>(k * (3 * k + 1) / 2)] += sign;
  }
  std::vector<u128> power(len, 0);
  power[0] = 1;
  for (int i = 0; i < 24; ++i) {
    std::vector<u128> next(len, 0);
    for (size_t a = 0; a < len; ++a) {
      if (euler[a] == 0) continue;
      const u128 c = static_cast<u128>(static_cast<int128>(euler[a]));
      for (size_t b = 0; a + b < len; ++b) next[a + b] += c * power[b];
    }
    power = std::move(next);
  }
  std::vector<int128> tau(len + 1, 0);
  for (size_t n = 1; n <= len; ++n) tau[n] = static_cast<int128>(power[n - 1]);
  return tau;
}

/// Schur values s_{(x,y,0)} at (a^2, 1, a^-2) by the Pieri rule, with e1 = e2 = t and e3 = 1.
/// Returns a table indexed [x][y] for x >= y, x <= xmax.
inline std::vector<std::vector<double>> pieri_table(double lambda_p, int xmax) {
  const double t = lambda_p * lambda_p - 1.0;
  std::vector<std::vector<double>> s(static_cast<size_t>(xmax) + 2, std::vector<double>(static_cast<size_t>(xmax) + 2, 0.0));
  s[0][0] = 1.0;
  // Row y = 0 from s_(1) s_(x) = s_(x+1) + s_(x,1).
  // Rows y >= 1 from e2 s_(x,y) = s_(x+1,y+1) + s_(x+1,y,1) + s_(x,y,1), and s_(a,b,1) = s_(a-1,b-1) since e3 = 1.
  for (int total = 0; total <= 2 * xmax; ++total) {
    for (int y = 0; 2 * y <= total; ++y) {
      const int x = total - y;
      if (x > xmax) continue;
      // extend: s_(x+1,y+1) = t s_(x,y) - [y>=1] s_(x,y-1) - [x-1>=y] s_(x-1,y)
      if (x + 1 <= xmax) {
        double v = t * s[x][y];
        if (y >= 1) v -= s[x][y - 1];
        if (x - 1 >= y) v -= s[x - 1][y];
        s[x + 1][y + 1] = v;
      }
      if (y == 0 && x + 1 <= xmax) {
        // s_(x+1) = t s_(x) - [x>=1] s_(x,1)
        double v = t * s[x][0];
        if (x >= 1) v -= s[x][1];
        s[x + 1][0] = v;
      }
    }
  }
  return s;
}

inline std::vector<cplx> random_vector(std::mt19937_64& rng, size_t n) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

}  // namespace oracle
