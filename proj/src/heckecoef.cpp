#include "tracesum/heckecoef.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "tracesum/errors.hpp"

namespace tracesum {
namespace {

using u128 = unsigned __int128;

constexpr uint32_t kTauMagic = 0x31554154;  // "TAU1" little-endian
constexpr uint32_t kTauVersion = 1;

// out += dense * sparse, truncated to out.size(); arithmetic wraps mod 2^128.
std::vector<u128> times_sparse(const std::vector<u128>& dense, const std::vector<std::pair<size_t, u128>>& sparse) {
  std::vector<u128> out(dense.size(), 0);
  for (const auto& [shift, c] : sparse) {
    if (shift >= dense.size()) break;
    const size_t len = dense.size() - shift;
    u128* dst = out.data() + shift;
    const u128* src = dense.data();
    for (size_t i = 0; i < len; ++i) dst[i] += src[i] * c;
  }
  return out;
}

std::optional<std::vector<int128>> read_cache(const std::filesystem::path& file, int64_t N) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  uint32_t magic = 0, version = 0;
  uint64_t stored = 0;
  in.read(reinterpret_cast<char*>(&magic), 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&stored), 8);
  if (!in || magic != kTauMagic || version != kTauVersion || stored < static_cast<uint64_t>(N)) return std::nullopt;
  std::vector<int128> tau(static_cast<size_t>(N) + 1, 0);
  in.read(reinterpret_cast<char*>(tau.data() + 1), static_cast<std::streamsize>(N * sizeof(int128)));
  if (!in || tau[1] != 1) return std::nullopt;
  return tau;
}

void write_cache(const std::filesystem::path& file, const std::vector<int128>& tau) {
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;  // cache is best-effort
    const uint64_t N = tau.size() - 1;
    out.write(reinterpret_cast<const char*>(&kTauMagic), 4);
    out.write(reinterpret_cast<const char*>(&kTauVersion), 4);
    out.write(reinterpret_cast<const char*>(&N), 8);
    out.write(reinterpret_cast<const char*>(tau.data() + 1), static_cast<std::streamsize>(N * sizeof(int128)));
  }
  std::filesystem::rename(tmp, file, ec);
}

// h_0..h_kmax of (alpha^2, 1, alpha^-2): e1 = e2 = lambda(p)^2 - 1, e3 = 1.
std::vector<double> complete_homogeneous(double lambda_p, int kmax) {
  const double t = lambda_p * lambda_p - 1.0;
  std::vector<double> h(static_cast<size_t>(std::max(kmax, 0)) + 1, 0.0);
  h[0] = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    double v = t * h[static_cast<size_t>(k - 1)];
    if (k >= 2) v -= t * h[static_cast<size_t>(k - 2)];
    if (k >= 3) v += h[static_cast<size_t>(k - 3)];
    h[static_cast<size_t>(k)] = v;
  }
  return h;
}

int valuation(int64_t& n, int64_t p) {
  int k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

}  // namespace

std::string to_string(int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  u128 u = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::vector<int128> tau_table(int64_t N) {
  if (N < 1) throw InputError(fmt::format("tau_table needs N >= 1, got {}", N));
  // prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}; tau(n) is the q^{n-1} coefficient of its 8th power.
  const size_t len = static_cast<size_t>(N);
  std::vector<std::pair<size_t, u128>> jacobi;
  for (int64_t k = 0;; ++k) {
    const int64_t e = k * (k + 1) / 2;
    if (e >= N) break;
    const int128 c = (k % 2 == 0 ? 1 : -1) * (2 * k + 1);
    jacobi.emplace_back(static_cast<size_t>(e), static_cast<u128>(c));
  }
  std::vector<u128> power(len, 0);
  for (const auto& [e, c] : jacobi) power[e] = c;
  for (int i = 1; i < 8; ++i) power = times_sparse(power, jacobi);

  std::vector<int128> tau(len + 1, 0);
  for (size_t n = 1; n <= len; ++n) tau[n] = static_cast<int128>(power[n - 1]);
  return tau;
}

HeckeSystem::HeckeSystem(int64_t limit, std::optional<std::filesystem::path> cache_dir) : limit_(limit) {
  if (limit < 1) throw InputError(fmt::format("HeckeSystem needs limit >= 1, got {}", limit));
  std::optional<std::vector<int128>> cached;
  std::filesystem::path file;
  if (cache_dir) {
    file = *cache_dir / "tau.bin";
    cached = read_cache(file, limit);
  }
  if (cached) {
    tau_ = std::move(*cached);
  } else {
    tau_ = tau_table(limit);
    // Any readable cache here is smaller than the new table.
    if (cache_dir) write_cache(file, tau_);
  }

  lambda_.assign(static_cast<size_t>(limit) + 1, 0.0);
  for (int64_t n = 1; n <= limit; ++n)
    lambda_[static_cast<size_t>(n)] = static_cast<double>(tau_[static_cast<size_t>(n)]) / std::pow(static_cast<double>(n), 5.5);

  const auto spf = smallest_prime_factors(limit);
  lambda_1n_.assign(static_cast<size_t>(limit) + 1, 0.0);
  lambda_1n_[1] = 1.0;
  for (int64_t n = 2; n <= limit; ++n) {
    const int64_t p = spf[static_cast<size_t>(n)];
    int64_t rest = n;
    const int k = valuation(rest, p);
    lambda_1n_[static_cast<size_t>(n)] =
        lambda_1n_[static_cast<size_t>(rest)] * complete_homogeneous(lambda_[static_cast<size_t>(p)], k)[static_cast<size_t>(k)];
  }
}

HeckeSystem HeckeSystem::from_environment(int64_t limit) {
  if (const char* dir = std::getenv("TRACESUM_CACHE_DIR"); dir && *dir) return HeckeSystem(limit, std::filesystem::path(dir));
  return HeckeSystem(limit);
}

int128 HeckeSystem::tau(int64_t n) const {
  if (n < 1 || n > limit_) throw OutOfRange(fmt::format("tau({}) outside table 1..{}", n, limit_));
  return tau_[static_cast<size_t>(n)];
}

double HeckeSystem::lambda(int64_t n) const {
  if (n < 1 || n > limit_) throw OutOfRange(fmt::format("lambda({}) outside table 1..{}", n, limit_));
  return lambda_[static_cast<size_t>(n)];
}

double HeckeSystem::lambda_prime_power(int64_t p, int k) const {
  const double lp = lambda(p);
  double prev = 1.0, cur = lp;
  if (k == 0) return 1.0;
  for (int j = 1; j < k; ++j) {
    const double next = lp * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double HeckeSystem::lambda_any(int64_t n) const {
  if (n <= limit_) return lambda(n);
  double v = 1.0;
  for (const auto& f : factorize(n)) v *= lambda_prime_power(f.prime, f.exponent);
  return v;
}

std::complex<double> HeckeSystem::satake(int64_t p) const {
  const double lp = lambda(p);
  return {lp / 2.0, std::sqrt(std::max(0.0, 4.0 - lp * lp)) / 2.0};
}

double HeckeSystem::lambda_1n(int64_t n) const {
  if (n < 1 || n > limit_) throw OutOfRange(fmt::format("lambda(1,{}) outside table 1..{}", n, limit_));
  return lambda_1n_[static_cast<size_t>(n)];
}

double HeckeSystem::gl3_prime_power(int64_t p, int a, int b) const {
  if (p > limit_) throw OutOfRange(fmt::format("tau({}) is not in the table (limit {})", p, limit_));
  const std::array<int, 3> part{a + b, b, 0};
  const auto h = complete_homogeneous(lambda_[static_cast<size_t>(p)], a + b + 2);
  auto hk = [&h](int k) { return k < 0 ? 0.0 : h[static_cast<size_t>(k)]; };
  double M[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[i][j] = hk(part[static_cast<size_t>(i)] - i + j);
  return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
         M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
}

double gl3_coefficient(int64_t m, int64_t n, const HeckeSystem& H) {
  if (m < 1 || n < 1) throw InputError(fmt::format("gl3_coefficient needs m, n >= 1, got ({}, {})", m, n));
  if (m == 1 && n <= H.limit()) return H.lambda_1n(n);
  std::vector<int64_t> primes;
  for (const auto& f : factorize(m)) primes.push_back(f.prime);
  for (const auto& f : factorize(n)) primes.push_back(f.prime);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  double v = 1.0;
  for (int64_t p : primes) {
    const int a = valuation(m, p);
    const int b = valuation(n, p);
    v *= H.gl3_prime_power(p, a, b);
  }
  return v;
}

IdentityReport verify_identities(const HeckeSystem& H, int64_t N, double tol) {
  if (N < 1 || N > H.limit()) throw OutOfRange(fmt::format("verify_identities: N = {} outside 1..{}", N, H.limit()));
  IdentityReport rep;
  auto lambda_square = [&H](int64_t a) {
    double v = 1.0;
    for (const auto& f : factorize(a)) v *= H.lambda_prime_power(f.prime, 2 * f.exponent);
    return v;
  };
  auto check = [tol](double lhs, double rhs, double scale, double& worst, int64_t n, const char* what) {
    const double d = std::abs(lhs - rhs) / std::max(1.0, scale);
    worst = std::max(worst, d);
    if (d > tol) throw IdentityViolation(fmt::format("{} fails at n = {}: {} vs {}", what, n, lhs, rhs));
  };

  for (int64_t n = 1; n <= N; ++n) {
    const auto divs = divisors(n);

    // (a) lambda(n)^2 = sum_{ab=n} lambda(a^2)
    double rhs = 0, scale = 0;
    for (int64_t a : divs) {
      const double t = lambda_square(a);
      rhs += t;
      scale += std::abs(t);
    }
    check(H.lambda(n) * H.lambda(n), rhs, scale, rep.convolution_defect, n, "lambda(n)^2 convolution");

    // (b) lambda(1,n) = sum_{d^2|n} lambda(n^2/d^4), (c) lambda(n^2) = sum_{d^2|n} mu(d) lambda(1,n/d^2)
    double rhs_b = 0, scale_b = 0, rhs_c = 0, scale_c = 0;
    for (int64_t d = 1; d * d <= n; ++d) {
      if (n % (d * d) != 0) continue;
      const double t = lambda_square(n / (d * d));
      rhs_b += t;
      scale_b += std::abs(t);
      const int mu = mobius(d);
      if (mu != 0) {
        const double u = mu * H.lambda_1n(n / (d * d));
        rhs_c += u;
        scale_c += std::abs(u);
      }
    }
    check(H.lambda_1n(n), rhs_b, scale_b, rep.square_defect, n, "lambda(1,n) square-argument expansion");
    check(lambda_square(n), rhs_c, scale_c, rep.mobius_defect, n, "Mobius inversion for lambda(n^2)");

    // (d) |lambda(1,p)| <= 3 p^{5/14}
    if (is_prime(n)) {
      const double ratio = std::abs(H.lambda_1n(n)) / (3.0 * std::pow(static_cast<double>(n), 5.0 / 14.0));
      rep.kim_sarnak_max = std::max(rep.kim_sarnak_max, ratio);
      if (ratio > 1.0) throw IdentityViolation(fmt::format("Kim-Sarnak bound fails at p = {}", n));
    }
    ++rep.checked;
  }
  return rep;
}

RankinSelberg rankin_selberg_ratios(const HeckeSystem& H, int64_t X) {
  if (X < 1 || X > H.limit()) throw OutOfRange(fmt::format("rankin_selberg_ratios: X = {} outside 1..{}", X, H.limit()));
  double first = 0;
  for (int64_t n = 1; n <= X; ++n) first += H.lambda_1n(n) * H.lambda_1n(n);
  double second = 0;
  for (int64_t m = 1; m * m <= X; ++m)
    for (int64_t n = 1; m * m * n <= X; ++n) {
      const double v = gl3_coefficient(m, n, H);
      second += static_cast<double>(m) * v * v;
    }
  const double x = static_cast<double>(X);
  return {first / x, second / x};
}

}  // namespace tracesum
