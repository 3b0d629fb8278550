#pragma once

/**
 * @file tracefn.hpp
 * @brief Catalog of trace functions modulo a prime, plus Kloosterman sums,
 *        Gauss sums and the discrete Mellin transform.
 *
 * Normalizations:
 *   Kl_r(n)  = q^{-(r-1)/2} sum_{x_1...x_r = n} e((x_1 + ... + x_r)/q),  Kl_r(0) = 0
 *   Kl2(n;m) = m^{-1/2} sum_{x in (Z/mZ)^x} e((n x + xbar)/m)           (any m >= 1)
 *   tau(chi) = q^{-1/2} sum_x chi(x) e(x/q)
 *   M(chi)   = q^{-1/2} sum_{x != 0} K(x) conj(chi(x))
 *
 * Characters are indexed through the discrete logarithm for the smallest
 * primitive root g: chi_j(g^k) = e(jk/(q-1)), chi_j(0) = 0.
 */

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tracesum/modarith.hpp"
#include "tracesum/periodic.hpp"

namespace tracesum {

/// Integer polynomial, coefficients from degree 0 upwards.
struct Polynomial {
  std::vector<int64_t> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int64_t eval_mod(int64_t x, int64_t q) const;
};

namespace trace {
struct MixedCharacter {
  std::vector<int64_t> characters;  // indices j_i in 0..q-2
  std::vector<Polynomial> numerators;
  Polynomial additive;
};
struct HyperKloosterman {
  int rank = 2;
};
struct Delta {
  int64_t point = 0;
};
struct AdditiveCharacter {
  int64_t slope = 1;
};
struct LegendreSymbol {};
struct CustomTable {
  std::vector<cplx> values;
};
}  // namespace trace

struct TraceFunctionSpec {
  std::variant<trace::MixedCharacter, trace::HyperKloosterman, trace::Delta, trace::AdditiveCharacter,
               trace::LegendreSymbol, trace::CustomTable>
      variant;
  int64_t q = 0;

  /// Short family name used in reports ("kl2", "legendre", "delta:3", ...).
  std::string label() const;
};

/**
 * Parse the command-line form of a trace function:
 *   kl2 | kl3 | kl<r> | legendre | delta:<a> | additive:<a>
 *   mixed:j=<j1>;<j2>..,f=<poly1>;<poly2>..,g=<poly>
 * where a polynomial is written as slash-separated coefficients from degree 0,
 * e.g. "1/0/3" = 1 + 3x^2. Throws InvalidSpec.
 */
TraceFunctionSpec parse_trace_spec(std::string_view text, int64_t q);

/// Throws InvalidSpec when the spec is malformed for its modulus.
void validate(const TraceFunctionSpec& spec);

PeriodicFunction build(const TraceFunctionSpec& spec);

/// Shared discrete-log table for a prime.
std::shared_ptr<const DlogTable> dlog_table(int64_t q);

class DirichletCharacter {
 public:
  DirichletCharacter(int64_t q, int64_t index);

  int64_t modulus() const { return dlog_->modulus(); }
  int64_t index() const { return index_; }
  bool is_trivial() const { return index_ == 0; }
  cplx operator()(int64_t x) const;

 private:
  std::shared_ptr<const DlogTable> dlog_;
  std::shared_ptr<const RootTable> roots_;  // (q-1)-th roots of unity
  int64_t index_;
};

/// Kl2(n; m) for any modulus m >= 1.
cplx kloosterman(int64_t n, int64_t m);

/// Kl2(n; m) for n = 0..m-1, cached per modulus (the n = 0 entry is the Ramanujan value).
std::shared_ptr<const std::vector<cplx>> kloosterman_table(int64_t m);

/// Kl_r as a q-periodic function with Kl_r(0) = 0.
PeriodicFunction hyper_kloosterman(int64_t q, int rank);

/// Normalized Gauss sum of a nontrivial character. Throws TrivialCharacter.
cplx gauss_sum(const DirichletCharacter& chi);

/// tau(chi_j) for all j in 0..q-2, including the trivial character (value -q^{-1/2}).
std::vector<cplx> gauss_sums(int64_t q);

/// M(chi_j) for j in 0..q-2.
std::vector<cplx> mellin_transform(const PeriodicFunction& K);

struct Kl3Twist {
  PeriodicFunction direct;      // q^{-1/2} sum_x K(x) Kl3(n x)
  PeriodicFunction gauss_form;  // sqrt(q)/(q-1) sum_chi tau(chi)^3 M(chi) conj(chi(n))
  double defect;                // max_n |direct - gauss_form| / max(1, ||K||_2)
};

/// Both forms of the Kl3-twisted transform; throws IdentityViolation if they disagree beyond tol.
Kl3Twist kl3_twist(const PeriodicFunction& K, double tol = 1e-8);

}  // namespace tracesum
