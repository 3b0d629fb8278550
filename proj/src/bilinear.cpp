#include "tracesum/bilinear.hpp"

#include <fmt/format.h>

#include <cmath>

#include "tracesum/errors.hpp"

namespace tracesum {
namespace {

double norm2(const std::vector<cplx>& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void check_shape(const BilinearInstance& B) {
  const auto q = static_cast<size_t>(B.kernel.modulus());
  if (B.alpha.size() != q || B.beta.size() != q)
    throw InputError(fmt::format("bilinear instance: alpha/beta lengths {}/{} differ from q = {}", B.alpha.size(),
                                 B.beta.size(), q));
}

}  // namespace

BilinearValue bilinear_form(const BilinearInstance& B, double tol) {
  check_shape(B);
  const int64_t q = B.kernel.modulus();
  const auto& K = B.kernel;

  cplx direct = 0;
  for (int64_t m = 0; m < q; ++m) {
    const cplx a = B.alpha[static_cast<size_t>(m)];
    if (a == 0.0) continue;
    cplx inner = 0;
    for (int64_t n = 0; n < q; ++n) inner += B.beta[static_cast<size_t>(n)] * K(m - n);
    direct += a * inner;
  }

  const auto ahat = naive_dft(B.alpha, +1);
  const auto bhat = naive_dft(B.beta, +1);
  const auto& Khat = K.fourier();
  cplx spectral = 0;
  for (int64_t t = 0; t < q; ++t)
    spectral += ahat[static_cast<size_t>(reduce(-t, q))] * bhat[static_cast<size_t>(t)] * Khat(t);
  spectral *= std::sqrt(static_cast<double>(q));

  const double scale = norm2(B.alpha) * norm2(B.beta) * std::sqrt(K.norm2_squared());
  const double defect = scale > 0 ? std::abs(direct - spectral) / scale : std::abs(direct - spectral);
  if (defect > tol)
    throw IdentityViolation(fmt::format("bilinear form: direct and spectral sums differ by {:.3e} mod {}", defect, q));
  return {direct, spectral, defect};
}

double bound_ratio(const BilinearInstance& B) {
  check_shape(B);
  const double denom = std::sqrt(static_cast<double>(B.kernel.modulus())) * sup_norm_dft(B.kernel) * norm2(B.alpha) *
                       norm2(B.beta);
  if (denom == 0.0) throw DegenerateNorm("bound_ratio: zero denominator");
  return std::abs(bilinear_form(B).direct) / denom;
}

}  // namespace tracesum
