#include "tracesum/sums.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>
#include <numbers>

#include "tracesum/errors.hpp"
#include "tracesum/parallel.hpp"

namespace tracesum {
namespace {

constexpr int kOrder = SmoothWindow::kMaxDerivative;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Truncated Taylor series c_k = f^{(k)}(x0) / k!, k <= kOrder.
struct Jet {
  std::array<double, kOrder + 1> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet affine(double value, double slope) {
    Jet j;
    j.c[0] = value;
    j.c[1] = slope;
    return j;
  }
};

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kOrder; ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kOrder; ++k)
    for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet r;
  for (int k = 0; k <= kOrder; ++k) {
    double v = a.c[k];
    for (int j = 1; j <= k; ++j) v -= b.c[j] * r.c[k - j];
    r.c[k] = v / b.c[0];
  }
  return r;
}

Jet exp(const Jet& f) {
  Jet g;
  g.c[0] = std::exp(f.c[0]);
  for (int k = 1; k <= kOrder; ++k) {
    double v = 0;
    for (int j = 1; j <= k; ++j) v += j * f.c[j] * g.c[k - j];
    g.c[k] = v / k;
  }
  return g;
}

// exp(-1/t) underflows to zero (with all derivatives) below this.
constexpr double kFlat = 1.0 / 700.0;

Jet sigma(const Jet& t) {
  if (t.c[0] <= kFlat) return Jet{};
  Jet minus_inv = Jet::constant(-1.0) / t;
  return exp(minus_inv);
}

Jet ramp(const Jet& t) {
  if (t.c[0] <= kFlat) return Jet{};
  if (t.c[0] >= 1.0 - kFlat) return Jet::constant(1.0);
  const Jet a = sigma(t);
  const Jet b = sigma(Jet::constant(1.0) + Jet::constant(-1.0) * t);
  return a / (a + b);
}

double factorial(int k) {
  double f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

template <class F>
cplx adaptive_simpson(const F& f, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const cplx flm = f(lm), frm = f(rm);
  const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const cplx diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth <= 0) throw QuadratureFailure(fmt::format("Simpson did not converge on [{}, {}]", a, b));
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double lambda_of_square(const HeckeSystem& H, int64_t n) {
  double v = 1.0;
  for (const auto& f : factorize(n)) v *= H.lambda_prime_power(f.prime, 2 * f.exponent);
  return v;
}

// Integers n with lo < n < hi.
std::pair<int64_t, int64_t> open_range(double lo, double hi) {
  return {static_cast<int64_t>(std::floor(lo)) + 1, static_cast<int64_t>(std::ceil(hi)) - 1};
}

}  // namespace

SmoothWindow::SmoothWindow(double Z, double scale) : Z_(Z), Zeff_(std::max(Z, 2.0)), scale_(scale) {
  if (!(Z >= 1.0)) throw InputError(fmt::format("window sharpness Z must be >= 1, got {}", Z));
}

SmoothWindow SmoothWindow::unit_mass(double Z) {
  const SmoothWindow raw(Z);
  return SmoothWindow(Z, 1.0 / raw.mass());
}

std::vector<double> SmoothWindow::jet(double x) const {
  std::vector<double> out(kOrder + 1, 0.0);
  if (x <= 1.0 || x >= 2.0) return out;
  const Jet left = ramp(Jet::affine(Zeff_ * (x - 1.0), Zeff_));
  const Jet right = ramp(Jet::affine(Zeff_ * (2.0 - x), -Zeff_));
  const Jet v = left * right;
  for (int k = 0; k <= kOrder; ++k) out[static_cast<size_t>(k)] = v.c[k] * factorial(k) * scale_;
  return out;
}

double SmoothWindow::derivative(double x, int order) const {
  if (order < 0 || order > kOrder) throw OutOfRange(fmt::format("derivative order {} outside 0..{}", order, kOrder));
  if (x <= 1.0 || x >= 2.0) return 0.0;
  if (order == 0) {
    const Jet left = ramp(Jet::constant(Zeff_ * (x - 1.0)));
    const Jet right = ramp(Jet::constant(Zeff_ * (2.0 - x)));
    return left.c[0] * right.c[0] * scale_;
  }
  return jet(x)[static_cast<size_t>(order)];
}

cplx SmoothWindow::fourier(double y, double tol) const {
  const auto panels = static_cast<int>(std::max(8.0, std::ceil(4.0 * std::abs(y)) + 8.0));
  auto f = [this, y](double x) -> cplx {
    const double v = (*this)(x);
    if (v == 0.0) return 0.0;
    const double phase = -kTwoPi * std::remainder(x * y, 1.0);
    return {v * std::cos(phase), v * std::sin(phase)};
  };
  cplx total = 0;
  const double width = 1.0 / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = 1.0 + i * width, b = a + width;
    const cplx fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
    const cplx whole = width / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson(f, a, b, fa, fm, fb, whole, tol / panels, 40);
  }
  return total;
}

std::vector<cplx> SmoothWindow::fourier_batch(const std::vector<double>& ys) const {
  double ymax = 0;
  for (double y : ys) ymax = std::max(ymax, std::abs(y));
  // Aliasing error is |Vhat(N - y)|, negligible once N - y exceeds a few hundred.
  const int64_t N = std::max<int64_t>(2048, 2 * static_cast<int64_t>(std::ceil(ymax)) + 1024);
  std::vector<double> samples(static_cast<size_t>(N), 0.0);
  for (int64_t k = 1; k < N; ++k) samples[static_cast<size_t>(k)] = (*this)(1.0 + static_cast<double>(k) / N);
  std::vector<cplx> out;
  out.reserve(ys.size());
  constexpr int64_t kResync = 64;
  for (double y : ys) {
    const cplx step = std::polar(1.0, -kTwoPi * std::remainder(y / static_cast<double>(N), 1.0));
    cplx acc = 0, phase = 1.0;
    for (int64_t k = 1; k < N; ++k) {
      if (k % kResync == 0)
        phase = std::polar(1.0, -kTwoPi * std::remainder(static_cast<double>(k) * y / static_cast<double>(N), 1.0));
      else
        phase *= step;
      acc += samples[static_cast<size_t>(k)] * phase;
    }
    out.push_back(acc * std::polar(1.0, -kTwoPi * std::remainder(y, 1.0)) / static_cast<double>(N));
  }
  return out;
}

double SmoothWindow::mass() const { return fourier(0.0).real(); }

double SmoothWindow::derivative_l1(int order) const {
  constexpr int intervals = 1 << 14;
  const double h = 1.0 / intervals;
  double s = 0;
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * std::abs(derivative(1.0 + i * h, order));
  return s * h / 3.0;
}

Coefficient parse_coefficient(const std::string& name) {
  if (name == "gl3") return Coefficient::gl3;
  if (name == "gl2_square_arg") return Coefficient::gl2_square_arg;
  if (name == "gl2_squared") return Coefficient::gl2_squared;
  if (name == "unit") return Coefficient::unit;
  throw InvalidSpec(fmt::format("unknown coefficient family '{}'", name));
}

std::string to_string(Coefficient c) {
  switch (c) {
    case Coefficient::gl3: return "gl3";
    case Coefficient::gl2_square_arg: return "gl2_square_arg";
    case Coefficient::gl2_squared: return "gl2_squared";
    case Coefficient::unit: return "unit";
  }
  return "?";
}

double coefficient(const HeckeSystem& H, Coefficient c, int64_t n) {
  switch (c) {
    case Coefficient::gl3: return H.lambda_1n(n);
    case Coefficient::gl2_square_arg: return lambda_of_square(H, n);
    case Coefficient::gl2_squared: {
      const double l = H.lambda(n);
      return l * l;
    }
    case Coefficient::unit: return 1.0;
  }
  return 0.0;
}

cplx s_v(const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X, Coefficient c) {
  const auto [lo, hi] = open_range(X, 2 * X);
  if (c != Coefficient::unit && hi > H.limit())
    throw OutOfRange(fmt::format("S_V needs coefficients up to {}, table has {}", hi, H.limit()));
  cplx acc = 0;
  for (int64_t n = lo; n <= hi; ++n) {
    const double v = V(static_cast<double>(n) / X);
    if (v == 0.0) continue;
    acc += coefficient(H, c, n) * v * K(n);
  }
  return acc;
}

int64_t tail_cutoff(const SmoothWindow& V, double omega, double target, int64_t cap) {
  if (!(omega > 0)) throw InputError("tail_cutoff needs a positive frequency step");
  const double c8 = V.derivative_l1(kOrder);
  const double base = 2.0 * c8 / std::pow(kTwoPi * omega, kOrder) / (kOrder - 1);
  for (int64_t hmax = 1; hmax <= cap; hmax *= 2)
    if (base * std::pow(static_cast<double>(hmax), -(kOrder - 1)) < target) return hmax;
  throw TruncationTooCoarse(fmt::format("Fourier tail needs more than {} terms (step {})", cap, omega));
}

PoissonCheck poisson_check(const PeriodicFunction& K, const SmoothWindow& V, double X) {
  if (!(X >= 1.0)) throw InputError(fmt::format("poisson_check needs X >= 1, got {}", X));
  const int64_t q = K.modulus();
  const auto [lo, hi] = open_range(X, 2 * X);
  cplx lhs = 0;
  double scale = 0;
  for (int64_t n = lo; n <= hi; ++n) {
    const double v = V(static_cast<double>(n) / X);
    lhs += K(n) * v;
    scale += std::abs(K(n)) * v;
  }
  if (scale == 0.0) return {lhs, 0.0, 0, 0.0, 0.0};

  const auto& Khat = K.fourier();
  const double sqrt_q = std::sqrt(static_cast<double>(q));
  const double prefactor = X / sqrt_q;
  const double khat_inf = std::max(Khat.sup_norm(), 1e-300);
  const double target = 1e-10 * scale / (prefactor * khat_inf);
  int64_t hmax = 0;
  try {
    hmax = tail_cutoff(V, X / static_cast<double>(q), target, int64_t{1} << 20);
  } catch (const TruncationTooCoarse& e) {
    throw QuadratureFailure(e.what());
  }
  const double c8 = V.derivative_l1(kOrder);
  const double tail = prefactor * khat_inf * 2.0 * c8 / std::pow(kTwoPi * X / static_cast<double>(q), kOrder) /
                      (kOrder - 1) * std::pow(static_cast<double>(hmax), -(kOrder - 1));

  cplx rhs = 0;
  for (int64_t h = -hmax; h <= hmax; ++h) {
    const cplx kh = Khat(h);
    if (kh == 0.0) continue;
    rhs += kh * V.fourier(static_cast<double>(h) * X / static_cast<double>(q));
  }
  rhs *= prefactor;
  return {lhs, rhs, hmax, tail, std::abs(lhs - rhs) / scale};
}

double poisson_defect(const PeriodicFunction& K, const SmoothWindow& V, double X) {
  return poisson_check(K, V, X).defect;
}

double scan_length(const ScanConfig& cfg, int64_t q) {
  return cfg.x_fixed ? *cfg.x_fixed : std::pow(static_cast<double>(q), cfg.x_exponent);
}

std::vector<ScanRow> exponent_scan(const ScanConfig& cfg, const HeckeSystem& H) {
  const size_t nq = cfg.q_list.size();
  std::vector<ScanRow> rows(cfg.traces.size() * nq);
  const SmoothWindow V(cfg.Z);
  parallel_for(rows.size(), [&](size_t cell) {
    const auto& trace = cfg.traces[cell / nq];
    const int64_t q = cfg.q_list[cell % nq];
    const auto spec = parse_trace_spec(trace, q);
    const auto K = build(spec);
    const double X = scan_length(cfg, q);
    const cplx S = s_v(K, H, V, X, cfg.coeff);
    const double khat_inf = sup_norm_dft(K);
    const double qd = static_cast<double>(q);
    const double bound = khat_inf * std::pow(cfg.Z, 10.0 / 9.0) * std::pow(qd, 2.0 / 9.0) * std::pow(X, 5.0 / 6.0);
    ScanRow row;
    row.q = q;
    row.X = X;
    row.Z = cfg.Z;
    row.family = spec.label();
    row.S = S;
    row.khat_inf = khat_inf;
    row.bound = bound;
    row.ratio = bound > 0 ? std::abs(S) / bound : 0.0;
    row.trivial_ratio = std::abs(S) / X;
    row.trivial_regime = khat_inf >= (1.0 - 1e-9) * std::sqrt(qd) * K.sup_norm() && khat_inf > 0;
    row.in_window = std::pow(cfg.Z, 2.0 / 3.0) * std::pow(qd, 4.0 / 3.0) <= X && X <= qd * qd / (cfg.Z * cfg.Z);
    rows[cell] = std::move(row);
  });
  return rows;
}

CorollarySums corollary_sums(const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X) {
  const auto [lo, hi] = open_range(X, 2 * X);
  if (hi > H.limit()) throw OutOfRange(fmt::format("corollary sums need coefficients up to {}, table has {}", hi, H.limit()));
  CorollarySums out{};

  double scale15 = 0, scale16 = 0;
  for (int64_t n = lo; n <= hi; ++n) {
    const double v = V(static_cast<double>(n) / X);
    if (v == 0.0) continue;
    const double a15 = lambda_of_square(H, n);
    const double l = H.lambda(n);
    out.c15 += a15 * v * K(n);
    out.c16 += l * l * v * K(n);
    scale15 += std::abs(a15 * v * K(n));
    scale16 += std::abs(l * l * v * K(n));
  }

  for (int64_t d = 1; d * d <= hi; ++d) {
    const int mu = mobius(d);
    const int64_t d2 = d * d;
    // lambda(n^2) side: sum_n lambda(1,n) K(n d^2) V(n d^2 / X).
    cplx inner15 = 0;
    for (int64_t n = 1; n * d2 <= hi; ++n) {
      const int64_t N = n * d2;
      const double v = V(static_cast<double>(N) / X);
      if (v == 0.0) continue;
      const cplx t = H.lambda_1n(n) * v * K(N);
      inner15 += t;
      if (mu != 0) scale15 += std::abs(t);
    }
    // T_d: sum over m, n with d^2 m n in (X, 2X).
    cplx T = 0;
    for (int64_t n = 1; n * d2 <= hi; ++n) {
      const double ln = H.lambda_1n(n);
      for (int64_t m = 1; m * n * d2 <= hi; ++m) {
        const int64_t N = m * n * d2;
        const double v = V(static_cast<double>(N) / X);
        if (v == 0.0) continue;
        const cplx t = ln * v * K(N);
        T += t;
        if (mu != 0) scale16 += std::abs(t);
      }
    }
    if (mu != 0) {
      out.c15_mobius += static_cast<double>(mu) * inner15;
      out.c16_mobius += static_cast<double>(mu) * T;
    }
    out.d_terms.push_back({d, mu, T});
  }

  out.c15_defect = scale15 > 0 ? std::abs(out.c15 - out.c15_mobius) / scale15 : 0.0;
  out.c16_defect = scale16 > 0 ? std::abs(out.c16 - out.c16_mobius) / scale16 : 0.0;
  if (out.c15_defect > 1e-9)
    throw IdentityViolation(fmt::format("lambda(n^2) sum: direct and Mobius forms differ by {:.3e}", out.c15_defect));
  if (out.c16_defect > 1e-8)
    throw IdentityViolation(fmt::format("lambda(n)^2 sum: direct and T_d forms differ by {:.3e}", out.c16_defect));
  return out;
}

double additive_twist_ratio(const HeckeSystem& H, const SmoothWindow& V, double alpha, double X) {
  const auto [lo, hi] = open_range(X, 2 * X);
  if (hi > H.limit()) throw OutOfRange(fmt::format("twisted sum needs coefficients up to {}, table has {}", hi, H.limit()));
  cplx acc = 0;
  for (int64_t n = lo; n <= hi; ++n) {
    const double v = V(static_cast<double>(n) / X);
    if (v == 0.0) continue;
    const double frac = static_cast<double>(std::fmod(static_cast<long double>(alpha) * n, 1.0L));
    acc += H.lambda_1n(n) * v * std::polar(1.0, kTwoPi * frac);
  }
  return std::abs(acc) / std::pow(X, 0.75);
}

}  // namespace tracesum
