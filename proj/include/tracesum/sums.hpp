#pragma once

// Smooth windows and the sums S_V(K, X) = sum_n a(n) K(n) V(n/X).
//
// V_Z(x) = S(Z'(x-1)) S(Z'(2-x)),  S(t) = s(t) / (s(t) + s(1-t)),  s(t) = exp(-1/t) (t > 0),
// Z' = max(Z, 2). Vhat(y) = int V(x) e(-xy) dx.

#include <optional>
#include <string>
#include <vector>

#include "tracesum/heckecoef.hpp"
#include "tracesum/periodic.hpp"
#include "tracesum/tracefn.hpp"

namespace tracesum {

class SmoothWindow {
 public:
  static constexpr int kMaxDerivative = 8;

  explicit SmoothWindow(double Z, double scale = 1.0);
  /// V_Z divided by its integral, so that Vhat(0) = 1.
  static SmoothWindow unit_mass(double Z);

  double Z() const { return Z_; }
  double sharpness() const { return Zeff_; }

  double operator()(double x) const { return derivative(x, 0); }
  /// Exact derivatives up to kMaxDerivative via truncated Taylor arithmetic.
  double derivative(double x, int order) const;
  /// All derivatives 0..kMaxDerivative at x.
  std::vector<double> jet(double x) const;

  /// Vhat(y) by adaptive Simpson; absolute target `tol`.
  cplx fourier(double y, double tol = 1e-12) const;
  /// Vhat at many frequencies by the trapezoid rule on a uniform grid fine enough to resolve max |y|.
  std::vector<cplx> fourier_batch(const std::vector<double>& ys) const;
  double mass() const;
  /// int |V^{(j)}|, used for Fourier tail bounds.
  double derivative_l1(int order) const;

 private:
  double Z_;
  double Zeff_;
  double scale_;
};

enum class Coefficient { gl3, gl2_square_arg, gl2_squared, unit };
Coefficient parse_coefficient(const std::string& name);
std::string to_string(Coefficient c);

/// a(n) for the chosen family, n <= H.limit().
double coefficient(const HeckeSystem& H, Coefficient c, int64_t n);

/// S_V(K, X) over integers X < n < 2X. Throws OutOfRange if 2X exceeds the Hecke table.
cplx s_v(const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X, Coefficient c);

struct PoissonCheck {
  cplx lhs;
  cplx rhs;
  int64_t hmax;
  double tail_bound;
  double defect;  // |lhs - rhs| / sum |K(n)| V(n/X)
};

/// Smallest power-of-two h_max whose tail bound sum_{|h|>hmax} |Vhat(h / step)| stays below `target`.
int64_t tail_cutoff(const SmoothWindow& V, double step, double target, int64_t cap = int64_t{1} << 22);

/// Both sides of sum_n K(n) V(n/X) = (X/sqrt(q)) sum_h Khat(h) Vhat(hX/q).
PoissonCheck poisson_check(const PeriodicFunction& K, const SmoothWindow& V, double X);
double poisson_defect(const PeriodicFunction& K, const SmoothWindow& V, double X);

struct ScanConfig {
  std::vector<std::string> traces;
  std::vector<int64_t> q_list;
  double x_exponent = 1.5;           // X = q^x_exponent unless x_fixed
  std::optional<double> x_fixed;
  double Z = 2.0;
  Coefficient coeff = Coefficient::gl3;
  uint64_t seed = 0;
};

struct ScanRow {
  int64_t q;
  double X;
  double Z;
  std::string family;
  cplx S;
  double khat_inf;
  double bound;          // khat_inf Z^{10/9} q^{2/9} X^{5/6}
  double ratio;          // |S| / bound
  double trivial_ratio;  // |S| / X
  bool trivial_regime;   // khat_inf attains sqrt(q) max |K|
  bool in_window;        // Z^{2/3} q^{4/3} <= X <= Z^{-2} q^2
};

double scan_length(const ScanConfig& cfg, int64_t q);
/// Rows sorted by (family, q); cells evaluated in parallel.
std::vector<ScanRow> exponent_scan(const ScanConfig& cfg, const HeckeSystem& H);

struct DTerm {
  int64_t d;
  int mu;
  cplx T;  // sum_{m,n} lambda(1,n) K(d^2 m n) V(d^2 m n / X)
};

struct CorollarySums {
  cplx c15;          // sum lambda(n^2) K(n) V(n/X)
  cplx c15_mobius;   // sum_d mu(d) sum_n lambda(1,n) K(n d^2) V(n d^2 / X)
  cplx c16;          // sum lambda(n)^2 K(n) V(n/X)
  cplx c16_mobius;   // sum_d mu(d) T_d
  double c15_defect;
  double c16_defect;
  std::vector<DTerm> d_terms;
};

/// Throws IdentityViolation when c15 disagrees beyond 1e-9 or c16 beyond 1e-8 (relative).
CorollarySums corollary_sums(const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X);

/// |sum_n lambda(1,n) e(alpha n) V(n/X)| / X^{3/4}.
double additive_twist_ratio(const HeckeSystem& H, const SmoothWindow& V, double alpha, double X);

}  // namespace tracesum
