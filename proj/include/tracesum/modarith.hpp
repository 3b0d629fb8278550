#pragma once

/**
 * @file modarith.hpp
 * @brief Exact arithmetic over Z/mZ at desk scale.
 *
 * Moduli are small (a few times 10^6 at most), so everything is plain
 * 64-bit integer arithmetic. Factorizations come from a smallest-prime-factor
 * sieve that is built once and shared.
 */

#include <cstdint>
#include <span>
#include <vector>

namespace tracesum {

struct PrimePower {
  int64_t prime;
  int exponent;

  int64_t value() const;
  bool operator==(const PrimePower&) const = default;
};

/// A positive modulus together with its factorization.
class Modulus {
 public:
  explicit Modulus(int64_t value);

  int64_t value() const { return value_; }
  const std::vector<PrimePower>& factorization() const { return factors_; }
  bool is_prime() const { return factors_.size() == 1 && factors_[0].exponent == 1; }

  operator int64_t() const { return value_; }  // NOLINT(google-explicit-constructor)

 private:
  int64_t value_;
  std::vector<PrimePower> factors_;
};

/// Least non-negative residue of x modulo m (m >= 1).
constexpr int64_t reduce(int64_t x, int64_t m) {
  int64_t r = x % m;
  return r < 0 ? r + m : r;
}

constexpr int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
  return static_cast<int64_t>(static_cast<__int128>(a) * b % m);
}

int64_t pow_mod(int64_t base, int64_t exp, int64_t m);

/// y with x*y = 1 (mod m), 0 <= y < m. Throws NotInvertible if gcd(x, m) > 1.
int64_t mod_inverse(int64_t x, int64_t m);

/// Smallest generator of (Z/qZ)^x for a prime q.
int64_t primitive_root(const Modulus& q);

bool is_prime(int64_t n);
int mobius(int64_t n);
int64_t euler_phi(int64_t n);
int omega(int64_t n);  // number of distinct prime factors
std::vector<PrimePower> factorize(int64_t n);
std::vector<int64_t> divisors(int64_t n);

/// Primes p with lo <= p < hi.
std::vector<int64_t> primes_in(int64_t lo, int64_t hi);

/// Smallest prime factor table for 0..limit (entries 0 and 1 are 0).
std::vector<int32_t> smallest_prime_factors(int64_t limit);

struct Residue {
  int64_t value;
  int64_t modulus;
  bool operator==(const Residue&) const = default;
};

/// Residues of x modulo each prime power dividing m.
std::vector<Residue> crt_split(int64_t x, const Modulus& m);
/// Inverse of crt_split for pairwise coprime moduli.
int64_t crt_combine(std::span<const Residue> parts);

/// Discrete logarithm table for a prime modulus, base = smallest primitive root.
class DlogTable {
 public:
  explicit DlogTable(const Modulus& q);

  int64_t modulus() const { return q_; }
  int64_t generator() const { return g_; }
  /// Exponent k in 0..q-2 with g^k = x. x must be a unit.
  int64_t log(int64_t x) const { return log_[static_cast<size_t>(reduce(x, q_))]; }
  /// g^k mod q.
  int64_t power(int64_t k) const { return exp_[static_cast<size_t>(reduce(k, q_ - 1))]; }

 private:
  int64_t q_;
  int64_t g_;
  std::vector<int64_t> log_;  // log_[0] = -1
  std::vector<int64_t> exp_;
};

}  // namespace tracesum
