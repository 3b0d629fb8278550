#pragma once

/**
 * @file periodic.hpp
 * @brief q-periodic functions on Z and their unitary discrete Fourier transform.
 *
 * Conventions:
 *   e(z)      = exp(2 pi i z)
 *   Khat(n)   = q^{-1/2} sum_x K(x) e(nx/q)
 *   K(x)      = q^{-1/2} sum_n Khat(n) e(-nx/q)
 *
 * Transforms are computed naively in O(q^2) from a shared table of q-th roots
 * of unity, which keeps the result exact up to rounding for every q.
 */

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "tracesum/modarith.hpp"

namespace tracesum {

using cplx = std::complex<double>;

/// e(k/q) for k in 0..q-1, cached per modulus.
class RootTable {
 public:
  static std::shared_ptr<const RootTable> get(int64_t q);

  explicit RootTable(int64_t q);
  int64_t modulus() const { return q_; }
  cplx operator()(int64_t k) const { return roots_[static_cast<size_t>(reduce(k, q_))]; }
  /// Unreduced lookup; 0 <= k < q.
  cplx raw(size_t k) const { return roots_[k]; }

 private:
  int64_t q_;
  std::vector<cplx> roots_;
};

/// e_q(k) = e(k/q) through the cached table.
inline cplx e_q(int64_t k, int64_t q) { return (*RootTable::get(q))(k); }

/**
 * A complex-valued function on Z/qZ.
 *
 * Immutable; copies share storage. The Fourier transform is computed the first
 * time it is requested and then cached (thread-safe).
 */
class PeriodicFunction {
 public:
  PeriodicFunction(int64_t q, std::vector<cplx> values);

  template <class F>
  static PeriodicFunction tabulate(int64_t q, F&& f) {
    std::vector<cplx> v(static_cast<size_t>(q));
    for (int64_t x = 0; x < q; ++x) v[static_cast<size_t>(x)] = cplx(f(x));
    return PeriodicFunction(q, std::move(v));
  }
  static PeriodicFunction zero(int64_t q) { return PeriodicFunction(q, std::vector<cplx>(static_cast<size_t>(q))); }

  int64_t modulus() const { return state_->q; }
  std::span<const cplx> values() const { return state_->values; }
  cplx operator()(int64_t n) const { return state_->values[static_cast<size_t>(reduce(n, state_->q))]; }

  /// Unitary DFT, cached.
  const PeriodicFunction& fourier() const;

  double norm2_squared() const;
  double sup_norm() const;

 private:
  struct State {
    int64_t q;
    std::vector<cplx> values;
    std::once_flag dft_once;
    std::unique_ptr<PeriodicFunction> dft;
  };
  std::shared_ptr<State> state_;
};

/// Naive DFT: out(n) = q^{-1/2} sum_x in(x) e(sign * n x / q).
std::vector<cplx> naive_dft(std::span<const cplx> in, int sign);

PeriodicFunction dft(const PeriodicFunction& K);
PeriodicFunction inverse_dft(const PeriodicFunction& Khat);

/// max_n |Khat(n)|.
double sup_norm_dft(const PeriodicFunction& K);

/// | sum |K(x)|^2 - sum |Khat(n)|^2 |.
double plancherel_defect(const PeriodicFunction& K);

/// Pointwise product, conjugate, and dilation n -> K(a n).
PeriodicFunction multiply(const PeriodicFunction& a, const PeriodicFunction& b);
PeriodicFunction conjugate(const PeriodicFunction& a);
PeriodicFunction dilate(const PeriodicFunction& K, int64_t a);

struct CorrelationL {
  PeriodicFunction L;
  /// max_h |Lhat(h) - expected(h)| relative to ||K||_2^2.
  double fourier_defect;
};

/**
 * L(x) = q^{-1/2} sum_{u != 0} |Khat(u)|^2 e_q(-ubar x) + q^{-1/2} |Khat(0)|^2.
 *
 * Also checks that Lhat(0) = |Khat(0)|^2 and Lhat(h) = |Khat(hbar)|^2 for h != 0,
 * throwing IdentityViolation when the defect exceeds `tol`.
 */
CorrelationL correlation_L(const PeriodicFunction& K, double tol = 1e-9);

/// h -> q^{-1/2} sum_n K(d^2 m1 n) conj(K(d^2 m2 n)) e(nh/q). Throws NotCoprime unless (d m1 m2, q) = 1.
PeriodicFunction correlation_K2hat(const PeriodicFunction& K, int64_t d, int64_t m1, int64_t m2);

}  // namespace tracesum
