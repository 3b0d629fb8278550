#include "tracesum/modarith.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

#include "tracesum/errors.hpp"

namespace tracesum {
namespace {

constexpr int64_t kSieveLimit = 1'000'000;

const std::vector<int32_t>& shared_sieve() {
  static const std::vector<int32_t> spf = smallest_prime_factors(kSieveLimit);
  return spf;
}

const std::vector<int64_t>& sieve_primes() {
  static const std::vector<int64_t> primes = [] {
    const auto& spf = shared_sieve();
    std::vector<int64_t> out;
    for (int64_t n = 2; n <= kSieveLimit; ++n)
      if (spf[static_cast<size_t>(n)] == n) out.push_back(n);
    return out;
  }();
  return primes;
}

}  // namespace

int64_t PrimePower::value() const {
  int64_t v = 1;
  for (int i = 0; i < exponent; ++i) v *= prime;
  return v;
}

Modulus::Modulus(int64_t value) : value_(value) {
  if (value < 1) throw InputError(fmt::format("modulus must be >= 1, got {}", value));
  factors_ = factorize(value);
}

std::vector<int32_t> smallest_prime_factors(int64_t limit) {
  std::vector<int32_t> spf(static_cast<size_t>(limit) + 1, 0);
  for (int64_t i = 2; i <= limit; ++i) {
    if (spf[static_cast<size_t>(i)] != 0) continue;
    for (int64_t j = i; j <= limit; j += i)
      if (spf[static_cast<size_t>(j)] == 0) spf[static_cast<size_t>(j)] = static_cast<int32_t>(i);
  }
  return spf;
}

std::vector<PrimePower> factorize(int64_t n) {
  if (n < 1) throw InputError(fmt::format("cannot factor {}", n));
  std::vector<PrimePower> out;
  auto push = [&out](int64_t p) {
    if (!out.empty() && out.back().prime == p)
      ++out.back().exponent;
    else
      out.push_back({p, 1});
  };
  if (n <= kSieveLimit) {
    const auto& spf = shared_sieve();
    while (n > 1) {
      int64_t p = spf[static_cast<size_t>(n)];
      push(p);
      n /= p;
    }
    return out;
  }
  for (int64_t p : sieve_primes()) {
    if (p * p > n) break;
    while (n % p == 0) {
      push(p);
      n /= p;
    }
  }
  if (n > 1) {
    // Beyond 10^12 the cofactor may be composite; desk-scale inputs never get here.
    if (n > kSieveLimit * kSieveLimit) throw OutOfRange(fmt::format("cannot factor {} with the sieve", n));
    push(n);
  }
  return out;
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  if (n <= kSieveLimit) return shared_sieve()[static_cast<size_t>(n)] == n;
  auto f = factorize(n);
  return f.size() == 1 && f[0].exponent == 1;
}

int64_t pow_mod(int64_t base, int64_t exp, int64_t m) {
  if (m == 1) return 0;
  int64_t result = 1;
  base = reduce(base, m);
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

int64_t mod_inverse(int64_t x, int64_t m) {
  if (m < 1) throw InputError("modulus must be positive");
  if (m == 1) return 0;
  int64_t a = reduce(x, m);
  int64_t old_r = a, r = m, old_s = 1, s = 0;
  while (r != 0) {
    int64_t quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) throw NotInvertible(fmt::format("{} is not invertible modulo {} (gcd {})", x, m, old_r));
  return reduce(old_s, m);
}

int64_t primitive_root(const Modulus& q) {
  if (!q.is_prime()) throw InputError(fmt::format("primitive_root needs a prime modulus, got {}", q.value()));
  if (q.value() == 2) return 1;
  const int64_t order = q.value() - 1;
  const auto factors = factorize(order);
  for (int64_t g = 2; g < q.value(); ++g) {
    bool generates = true;
    for (const auto& f : factors) {
      if (pow_mod(g, order / f.prime, q.value()) == 1) {
        generates = false;
        break;
      }
    }
    if (generates) return g;
  }
  throw Error("no primitive root found");  // unreachable for primes
}

int mobius(int64_t n) {
  if (n < 1) throw InputError("mobius needs n >= 1");
  int sign = 1;
  for (const auto& f : factorize(n)) {
    if (f.exponent > 1) return 0;
    sign = -sign;
  }
  return sign;
}

int64_t euler_phi(int64_t n) {
  int64_t phi = n;
  for (const auto& f : factorize(n)) phi = phi / f.prime * (f.prime - 1);
  return phi;
}

int omega(int64_t n) { return static_cast<int>(factorize(n).size()); }

std::vector<int64_t> divisors(int64_t n) {
  std::vector<int64_t> out{1};
  for (const auto& f : factorize(n)) {
    const size_t base = out.size();
    int64_t pk = 1;
    for (int e = 1; e <= f.exponent; ++e) {
      pk *= f.prime;
      for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int64_t> primes_in(int64_t lo, int64_t hi) {
  std::vector<int64_t> out;
  for (int64_t n = std::max<int64_t>(lo, 2); n < hi; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

std::vector<Residue> crt_split(int64_t x, const Modulus& m) {
  std::vector<Residue> out;
  out.reserve(m.factorization().size());
  for (const auto& f : m.factorization()) {
    const int64_t pk = f.value();
    out.push_back({reduce(x, pk), pk});
  }
  return out;
}

int64_t crt_combine(std::span<const Residue> parts) {
  int64_t value = 0, modulus = 1;
  for (const auto& part : parts) {
    if (std::gcd(modulus, part.modulus) != 1) throw NotCoprime("crt_combine needs pairwise coprime moduli");
    // value + modulus * t = part.value (mod part.modulus)
    const int64_t t = mul_mod(reduce(part.value - value, part.modulus), mod_inverse(modulus, part.modulus),
                              part.modulus);
    value += modulus * t;
    modulus *= part.modulus;
    value = reduce(value, modulus);
  }
  return value;
}

DlogTable::DlogTable(const Modulus& q) : q_(q.value()), g_(primitive_root(q)) {
  log_.assign(static_cast<size_t>(q_), -1);
  exp_.resize(static_cast<size_t>(q_ - 1));
  int64_t x = 1;
  for (int64_t k = 0; k < q_ - 1; ++k) {
    exp_[static_cast<size_t>(k)] = x;
    log_[static_cast<size_t>(x)] = k;
    x = mul_mod(x, g_, q_);
  }
}

}  // namespace tracesum
