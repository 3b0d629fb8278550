#pragma once

// Hecke data for the discriminant form Delta (weight 12, level 1) and its
// symmetric-square lift to GL(3).
//
//   lambda(n)   = tau(n) / n^{11/2}
//   alpha_p     : alpha_p + conj(alpha_p) = lambda(p), |alpha_p| = 1
//   lambda(m,n) : sym^2 coefficients, at prime powers the Schur polynomial
//                 s_{(a+b, b, 0)}(alpha^2, 1, alpha^{-2}), multiplicative otherwise.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "tracesum/modarith.hpp"

namespace tracesum {

using int128 = __int128;

/// tau(n) for n = 0..N (entry 0 is 0). Exact.
std::vector<int128> tau_table(int64_t N);

/// Decimal rendering of a 128-bit integer.
std::string to_string(int128 v);

class HeckeSystem {
 public:
  /// Builds tables up to `limit`, reading/writing the tau cache when `cache_dir` is set.
  explicit HeckeSystem(int64_t limit, std::optional<std::filesystem::path> cache_dir = std::nullopt);

  /// Same, with the cache directory taken from TRACESUM_CACHE_DIR if present.
  static HeckeSystem from_environment(int64_t limit);

  int64_t limit() const { return limit_; }
  int128 tau(int64_t n) const;
  /// lambda(n) from the tau table, n <= limit.
  double lambda(int64_t n) const;
  /// lambda(n) for any n whose prime factors are <= limit (Hecke recursion at prime powers).
  double lambda_any(int64_t n) const;
  double lambda_prime_power(int64_t p, int k) const;
  std::complex<double> satake(int64_t p) const;

  /// lambda(1,n) table, n <= limit.
  double lambda_1n(int64_t n) const;
  const std::vector<double>& lambda_1n_table() const { return lambda_1n_; }
  const std::vector<double>& lambda_table() const { return lambda_; }

  /// lambda(p^a, p^b) by the Jacobi-Trudi determinant.
  double gl3_prime_power(int64_t p, int a, int b) const;

 private:
  int64_t limit_;
  std::vector<int128> tau_;
  std::vector<double> lambda_;
  std::vector<double> lambda_1n_;
};

/// lambda(m, n) of sym^2 Delta. Throws OutOfRange when a prime factor exceeds the table.
double gl3_coefficient(int64_t m, int64_t n, const HeckeSystem& H);

struct IdentityReport {
  int64_t checked = 0;
  double convolution_defect = 0;  // lambda(n)^2 = sum_{ab=n} lambda(a^2)
  double square_defect = 0;       // lambda(1,n) = sum_{d^2|n} lambda(n^2/d^4)
  double mobius_defect = 0;       // lambda(n^2) = sum_{d^2|n} mu(d) lambda(1,n/d^2)
  double kim_sarnak_max = 0;      // max_p |lambda(1,p)| / (3 p^{5/14})
};

/// Checks the four coefficient identities for n <= N; throws IdentityViolation naming n.
IdentityReport verify_identities(const HeckeSystem& H, int64_t N, double tol = 1e-9);

struct RankinSelberg {
  double first;   // sum_{n<=X} |lambda(1,n)|^2 / X
  double second;  // sum_{m^2 n<=X} m |lambda(m,n)|^2 / X
};
RankinSelberg rankin_selberg_ratios(const HeckeSystem& H, int64_t X);

}  // namespace tracesum
