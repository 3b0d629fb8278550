#pragma once

// The amplifier family
//   K(n, h) = q^{-1/2} sum_{z != 0} Khat(z) e_q(-h zbar) e_q(-n z),   K(n, 0) = K(n) - Khat(0)/sqrt(q),
// averaged over h p lbar with p, l running over the prime sets below.

#include <vector>

#include "tracesum/heckecoef.hpp"
#include "tracesum/periodic.hpp"
#include "tracesum/sums.hpp"

namespace tracesum {

class AmplifierFamily {
 public:
  explicit AmplifierFamily(PeriodicFunction K);

  const PeriodicFunction& base() const { return K_; }
  const PeriodicFunction& dft() const { return K_.fourier(); }
  int64_t modulus() const { return K_.modulus(); }

 private:
  PeriodicFunction K_;
};

cplx family_value(const AmplifierFamily& F, int64_t n, int64_t h);

/// p in [P, 2P) prime with p = 1 mod 4; l in [L, 2L) prime with l = 3 mod 4.
struct PrimePairMeasure {
  int64_t P = 0;
  int64_t L = 0;
  std::vector<int64_t> p_set;
  std::vector<int64_t> l_set;
};

/// Throws OutOfRange if an element reaches q/2.
PrimePairMeasure prime_pair_measure(int64_t P, int64_t L, int64_t q);

/// (1/|P||L|) sum_{p,l} K(n, h p lbar). Throws EmptyMeasure.
cplx measure_average(const AmplifierFamily& F, const PrimePairMeasure& M, int64_t n, int64_t h);

/// H = q^2 L / (X P).
double amplifier_length(int64_t q, double X, double P, double L);

struct AmplifierChoice {
  double P;
  double L;
};
/// P = q^{7/9} / (X^{1/3} Z^{10/9}), L = Z^{2/3} X P / q^{5/3}.
AmplifierChoice balanced_parameters(int64_t q, double X, double Z);

struct Decomposition {
  cplx F;
  cplx O;
  cplx S;
  cplx T;  // sum lambda(1,n) V(n/X)
  double defect;  // |F - O - S + Khat(0) T / sqrt(q)|
  double Hparam;
  int64_t hmax;
  double tail_bound;
};

/**
 * F = (1/|P||L|) sum_{p,l} sum_{|h|<=hmax} What(h/H) sum_n lambda(1,n) K(n, h p lbar) V(n/X), O = the h != 0 part.
 * W is the unit-mass window with Z = 1. hmax <= 0 picks the cutoff from the 8-derivative tail bound.
 * Throws TruncationTooCoarse if the tail bound at hmax exceeds 1e-10, IdentityViolation if defect > tol (|S| + 1).
 */
Decomposition decompose_FO(const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X,
                           const PrimePairMeasure& M, double Hparam, int64_t hmax = 0, double tol = 1e-6);

struct NuCount {
  PeriodicFunction nu;
  double sum_squares;  // sum_x |nu(x)|^2
  cplx total;
  int64_t triples;     // admissible (p, h, l)
};

/// nu(x) = sum_{p h lbar = x, (h,l) = 1, H' <= h < 2H'} What(h/H).
NuCount nu_count(const PrimePairMeasure& M, int64_t Hprime, const SmoothWindow& W, double Hparam, int64_t q);

}  // namespace tracesum
