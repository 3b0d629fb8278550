#include "tracesum/amplifier.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "tracesum/errors.hpp"

namespace tracesum {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<int64_t> inverse_table(int64_t q) {
  std::vector<int64_t> inv(static_cast<size_t>(q), 0);
  for (int64_t z = 1; z < q; ++z) inv[static_cast<size_t>(z)] = mod_inverse(z, q);
  return inv;
}

void require_nonempty(const PrimePairMeasure& M) {
  if (M.p_set.empty() || M.l_set.empty())
    throw EmptyMeasure(fmt::format("prime-pair measure is empty: {} primes p in [{}, {}), {} primes l in [{}, {})",
                                   M.p_set.size(), M.P, 2 * M.P, M.l_set.size(), M.L, 2 * M.L));
}

double tail_at(const SmoothWindow& W, double omega, int64_t hmax) {
  const double c8 = W.derivative_l1(SmoothWindow::kMaxDerivative);
  return 2.0 * c8 / std::pow(kTwoPi * omega, 8) / 7.0 * std::pow(static_cast<double>(hmax), -7.0);
}

}  // namespace

AmplifierFamily::AmplifierFamily(PeriodicFunction K) : K_(std::move(K)) {
  if (!is_prime(K_.modulus())) throw InputError(fmt::format("amplifier family needs a prime modulus, got {}", K_.modulus()));
}

cplx family_value(const AmplifierFamily& F, int64_t n, int64_t h) {
  const int64_t q = F.modulus();
  const auto& Khat = F.dft();
  const auto roots = RootTable::get(q);
  const int64_t hr = reduce(h, q), nr = reduce(n, q);
  cplx acc = 0;
  for (int64_t z = 1; z < q; ++z) acc += Khat(z) * (*roots)(-mul_mod(hr, mod_inverse(z, q), q) - mul_mod(nr, z, q));
  return acc / std::sqrt(static_cast<double>(q));
}

PrimePairMeasure prime_pair_measure(int64_t P, int64_t L, int64_t q) {
  if (P < 1 || L < 1) throw InputError(fmt::format("P and L must be >= 1, got P = {}, L = {}", P, L));
  PrimePairMeasure M{P, L, {}, {}};
  for (int64_t p : primes_in(P, 2 * P))
    if (p % 4 == 1) M.p_set.push_back(p);
  for (int64_t l : primes_in(L, 2 * L))
    if (l % 4 == 3) M.l_set.push_back(l);
  for (auto v : {M.p_set, M.l_set})
    for (int64_t x : v)
      if (2 * x >= q) throw OutOfRange(fmt::format("prime {} is not below q/2 = {}", x, q / 2.0));
  return M;
}

cplx measure_average(const AmplifierFamily& F, const PrimePairMeasure& M, int64_t n, int64_t h) {
  require_nonempty(M);
  const int64_t q = F.modulus();
  cplx acc = 0;
  for (int64_t p : M.p_set)
    for (int64_t l : M.l_set) acc += family_value(F, n, mul_mod(mul_mod(reduce(h, q), p, q), mod_inverse(l, q), q));
  return acc / static_cast<double>(M.p_set.size() * M.l_set.size());
}

double amplifier_length(int64_t q, double X, double P, double L) {
  const double qd = static_cast<double>(q);
  return qd * qd * L / (X * P);
}

AmplifierChoice balanced_parameters(int64_t q, double X, double Z) {
  const double qd = static_cast<double>(q);
  const double P = std::pow(qd, 7.0 / 9.0) / (std::cbrt(X) * std::pow(Z, 10.0 / 9.0));
  const double L = std::pow(Z, 2.0 / 3.0) * X * P / std::pow(qd, 5.0 / 3.0);
  return {P, L};
}

Decomposition decompose_FO(const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X,
                           const PrimePairMeasure& M, double Hparam, int64_t hmax, double tol) {
  require_nonempty(M);
  if (!(Hparam >= 1.0)) throw InputError(fmt::format("amplifier length H = {} must be >= 1", Hparam));
  const int64_t q = K.modulus();
  const double sqrt_q = std::sqrt(static_cast<double>(q));
  const auto& Khat = K.fourier();
  const auto roots = RootTable::get(q);
  const auto W = SmoothWindow::unit_mass(1.0);

  constexpr double kTail = 1e-10;
  if (hmax <= 0) {
    hmax = tail_cutoff(W, 1.0 / Hparam, kTail);
  }
  const double tail = tail_at(W, 1.0 / Hparam, hmax);
  if (tail > kTail)
    throw TruncationTooCoarse(fmt::format("What tail beyond |h| = {} is {:.3e} > {:.0e}", hmax, tail, kTail));

  // A(r) = sum_{n = r} lambda(1,n) V(n/X); S and T summed directly.
  const int64_t lo = static_cast<int64_t>(std::floor(X)) + 1, hi = static_cast<int64_t>(std::ceil(2 * X)) - 1;
  if (hi > H.limit()) throw OutOfRange(fmt::format("decompose_FO needs coefficients up to {}, table has {}", hi, H.limit()));
  std::vector<cplx> A(static_cast<size_t>(q), 0.0);
  cplx S = 0, T = 0;
  for (int64_t n = lo; n <= hi; ++n) {
    const double a = H.lambda_1n(n) * V(static_cast<double>(n) / X);
    if (a == 0.0) continue;
    A[static_cast<size_t>(reduce(n, q))] += a;
    S += a * K(n);
    T += a;
  }

  // G(x) = sum_n a_n K(n, x) = sum_{z != 0} Khat(z) B(z) e_q(-x zbar), B = DFT of A with e(-rz/q).
  const auto B = naive_dft(A, -1);
  const auto inv = inverse_table(q);
  std::vector<cplx> G(static_cast<size_t>(q), 0.0);
  for (int64_t x = 0; x < q; ++x) {
    cplx acc = 0;
    for (int64_t z = 1; z < q; ++z)
      acc += Khat(z) * B[static_cast<size_t>(z)] * (*roots)(-mul_mod(x, inv[static_cast<size_t>(z)], q));
    G[static_cast<size_t>(x)] = acc;
  }

  std::vector<int64_t> shifts;  // p lbar mod q
  for (int64_t p : M.p_set)
    for (int64_t l : M.l_set) shifts.push_back(mul_mod(p, inv[static_cast<size_t>(reduce(l, q))], q));
  const double weight = 1.0 / static_cast<double>(shifts.size());

  std::vector<double> freqs;
  for (int64_t h = -hmax; h <= hmax; ++h) freqs.push_back(static_cast<double>(h) / Hparam);
  const auto What = W.fourier_batch(freqs);

  cplx F = 0, O = 0;
  for (int64_t h = -hmax; h <= hmax; ++h) {
    const cplx w = What[static_cast<size_t>(h + hmax)];
    cplx inner = 0;
    for (int64_t s : shifts) inner += G[static_cast<size_t>(mul_mod(reduce(h, q), s, q))];
    const cplx term = w * inner * weight;
    F += term;
    if (h != 0) O += term;
  }

  const double defect = std::abs(F - O - S + Khat(0) * T / sqrt_q);
  if (defect > tol * (std::abs(S) + 1.0))
    throw IdentityViolation(fmt::format("F - O - S + Khat(0) T / sqrt(q) = {:.3e} exceeds {:.0e} (|S| + 1)", defect, tol));
  return {F, O, S, T, defect, Hparam, hmax, tail};
}

NuCount nu_count(const PrimePairMeasure& M, int64_t Hprime, const SmoothWindow& W, double Hparam, int64_t q) {
  if (Hprime < 1) throw InputError(fmt::format("H' must be >= 1, got {}", Hprime));
  std::vector<cplx> nu(static_cast<size_t>(q), 0.0);
  int64_t triples = 0;
  cplx total = 0;
  std::vector<double> freqs;
  for (int64_t h = Hprime; h < 2 * Hprime; ++h) freqs.push_back(static_cast<double>(h) / Hparam);
  const auto What = W.fourier_batch(freqs);
  for (int64_t h = Hprime; h < 2 * Hprime; ++h) {
    const cplx w = What[static_cast<size_t>(h - Hprime)];
    for (int64_t l : M.l_set) {
      if (std::gcd(h, l) != 1) continue;
      const int64_t lbar = mod_inverse(l, q);
      for (int64_t p : M.p_set) {
        nu[static_cast<size_t>(mul_mod(mul_mod(reduce(p, q), reduce(h, q), q), lbar, q))] += w;
        total += w;
        ++triples;
      }
    }
  }
  double sum_sq = 0;
  for (const auto& v : nu) sum_sq += std::norm(v);
  return {PeriodicFunction(q, std::move(nu)), sum_sq, total, triples};
}

}  // namespace tracesum
