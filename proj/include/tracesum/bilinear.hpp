#pragma once

// Bilinear forms sum_{m,n mod q} alpha(m) beta(n) K(m - n) on Z/qZ and the
// Fourier bound |form| <= sqrt(q) ||Khat||_inf ||alpha||_2 ||beta||_2.

#include <vector>

#include "tracesum/periodic.hpp"

namespace tracesum {

struct BilinearInstance {
  std::vector<cplx> alpha;
  std::vector<cplx> beta;
  PeriodicFunction kernel;
};

struct BilinearValue {
  cplx direct;    // O(q^2) double sum
  cplx spectral;  // sqrt(q) sum_t alphahat(-t) betahat(t) Khat(t)
  double defect;  // |direct - spectral| / (||alpha||_2 ||beta||_2 ||K||_2), 0 if that is 0
};

/// Evaluates both sides; throws IdentityViolation if they differ by more than tol.
BilinearValue bilinear_form(const BilinearInstance& B, double tol = 1e-8);

/// |form| / (sqrt(q) ||Khat||_inf ||alpha||_2 ||beta||_2). Throws DegenerateNorm on a zero denominator.
double bound_ratio(const BilinearInstance& B);

}  // namespace tracesum
