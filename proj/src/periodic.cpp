#include "tracesum/periodic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "tracesum/errors.hpp"

namespace tracesum {

std::shared_ptr<const RootTable> RootTable::get(int64_t q) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const RootTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[q];
  if (!slot) slot = std::make_shared<const RootTable>(q);
  return slot;
}

RootTable::RootTable(int64_t q) : q_(q), roots_(static_cast<size_t>(q)) {
  if (q < 1) throw InputError("root table needs q >= 1");
  for (int64_t k = 0; k < q; ++k) {
    // Fold into [-q/2, q/2] so the angle stays small and symmetric.
    const int64_t kk = 2 * k <= q ? k : k - q;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(kk) / static_cast<double>(q);
    roots_[static_cast<size_t>(k)] = {std::cos(angle), std::sin(angle)};
  }
  roots_[0] = 1.0;
  if (q % 2 == 0) roots_[static_cast<size_t>(q / 2)] = -1.0;
  if (q % 4 == 0) {
    roots_[static_cast<size_t>(q / 4)] = {0.0, 1.0};
    roots_[static_cast<size_t>(3 * q / 4)] = {0.0, -1.0};
  }
}

PeriodicFunction::PeriodicFunction(int64_t q, std::vector<cplx> values) : state_(std::make_shared<State>()) {
  if (q < 1) throw InputError("periodic function needs q >= 1");
  if (static_cast<int64_t>(values.size()) != q)
    throw InputError(fmt::format("periodic function mod {} needs {} values, got {}", q, q, values.size()));
  state_->q = q;
  state_->values = std::move(values);
}

const PeriodicFunction& PeriodicFunction::fourier() const {
  std::call_once(state_->dft_once, [this] {
    state_->dft = std::make_unique<PeriodicFunction>(state_->q, naive_dft(state_->values, +1));
  });
  return *state_->dft;
}

double PeriodicFunction::norm2_squared() const {
  double s = 0;
  for (const auto& v : state_->values) s += std::norm(v);
  return s;
}

double PeriodicFunction::sup_norm() const {
  double m = 0;
  for (const auto& v : state_->values) m = std::max(m, std::abs(v));
  return m;
}

std::vector<cplx> naive_dft(std::span<const cplx> in, int sign) {
  const auto q = static_cast<int64_t>(in.size());
  const auto roots = RootTable::get(q);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  std::vector<cplx> out(in.size());
  for (int64_t n = 0; n < q; ++n) {
    const int64_t step = reduce(sign * n, q);
    int64_t k = 0;
    cplx acc = 0;
    for (int64_t x = 0; x < q; ++x) {
      acc += in[static_cast<size_t>(x)] * roots->raw(static_cast<size_t>(k));
      k += step;
      if (k >= q) k -= q;
    }
    out[static_cast<size_t>(n)] = acc * scale;
  }
  return out;
}

PeriodicFunction dft(const PeriodicFunction& K) { return K.fourier(); }

PeriodicFunction inverse_dft(const PeriodicFunction& Khat) {
  return PeriodicFunction(Khat.modulus(), naive_dft(Khat.values(), -1));
}

double sup_norm_dft(const PeriodicFunction& K) { return K.fourier().sup_norm(); }

double plancherel_defect(const PeriodicFunction& K) {
  return std::abs(K.norm2_squared() - K.fourier().norm2_squared());
}

PeriodicFunction multiply(const PeriodicFunction& a, const PeriodicFunction& b) {
  if (a.modulus() != b.modulus()) throw InputError("multiply: moduli differ");
  return PeriodicFunction::tabulate(a.modulus(), [&](int64_t x) { return a(x) * b(x); });
}

PeriodicFunction conjugate(const PeriodicFunction& a) {
  return PeriodicFunction::tabulate(a.modulus(), [&](int64_t x) { return std::conj(a(x)); });
}

PeriodicFunction dilate(const PeriodicFunction& K, int64_t a) {
  const int64_t q = K.modulus();
  return PeriodicFunction::tabulate(q, [&](int64_t x) { return K(mul_mod(reduce(a, q), x, q)); });
}

CorrelationL correlation_L(const PeriodicFunction& K, double tol) {
  const int64_t q = K.modulus();
  if (!is_prime(q)) throw InputError(fmt::format("correlation_L needs a prime modulus, got {}", q));
  const auto& Khat = K.fourier();
  const auto roots = RootTable::get(q);
  const double inv_sqrt_q = 1.0 / std::sqrt(static_cast<double>(q));

  std::vector<int64_t> inv(static_cast<size_t>(q), 0);
  for (int64_t u = 1; u < q; ++u) inv[static_cast<size_t>(u)] = mod_inverse(u, q);

  std::vector<cplx> values(static_cast<size_t>(q));
  const double khat0_sq = std::norm(Khat(0));
  for (int64_t x = 0; x < q; ++x) {
    cplx acc = khat0_sq;
    for (int64_t u = 1; u < q; ++u)
      acc += std::norm(Khat(u)) * (*roots)(-mul_mod(inv[static_cast<size_t>(u)], x, q));
    values[static_cast<size_t>(x)] = acc * inv_sqrt_q;
  }
  PeriodicFunction L(q, std::move(values));

  const auto& Lhat = L.fourier();
  double worst = std::abs(Lhat(0) - khat0_sq);
  for (int64_t h = 1; h < q; ++h)
    worst = std::max(worst, std::abs(Lhat(h) - std::norm(Khat(inv[static_cast<size_t>(h)]))));
  const double scale = K.norm2_squared();
  const double defect = scale > 0 ? worst / scale : worst;
  if (defect > tol)
    throw IdentityViolation(fmt::format("correlation_L: Fourier formula off by {:.3e} (relative) mod {}", defect, q));
  return {std::move(L), defect};
}

PeriodicFunction correlation_K2hat(const PeriodicFunction& K, int64_t d, int64_t m1, int64_t m2) {
  const int64_t q = K.modulus();
  const int64_t a1 = mul_mod(mul_mod(reduce(d, q), reduce(d, q), q), reduce(m1, q), q);
  const int64_t a2 = mul_mod(mul_mod(reduce(d, q), reduce(d, q), q), reduce(m2, q), q);
  const bool coprime = std::gcd(reduce(d, q), q) == 1 && std::gcd(reduce(m1, q), q) == 1 &&
                       std::gcd(reduce(m2, q), q) == 1;
  if (!coprime)
    throw NotCoprime(fmt::format("correlation_K2hat needs (d m1 m2, q) = 1; got d={} m1={} m2={} q={}", d, m1, m2, q));
  auto product = PeriodicFunction::tabulate(q, [&](int64_t n) { return K(mul_mod(a1, n, q)) * std::conj(K(mul_mod(a2, n, q))); });
  return product.fourier();
}

}  // namespace tracesum
