#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tracesum/errors.hpp"
#include "tracesum/periodic.hpp"
#include "tracesum/tracefn.hpp"

using namespace tracesum;
using oracle::cplx;

namespace {

double max_diff(std::span<const cplx> a, const std::vector<cplx>& b) {
  double m = 0;
  for (size_t i = 0; i < b.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PeriodicFunction legendre(int64_t q) { return PeriodicFunction::tabulate(q, [q](int64_t x) { return double(oracle::legendre(x, q)); }); }

PeriodicFunction random_function(std::mt19937_64& rng, int64_t q) {
  return PeriodicFunction(q, oracle::random_vector(rng, static_cast<size_t>(q)));
}

}  // namespace

TEST_CASE("dft of basic functions") {
  const double r5 = std::sqrt(5.0);
  auto one = PeriodicFunction::tabulate(5, [](int64_t) { return 1.0; });
  CHECK(max_diff(one.fourier().values(), {r5, 0, 0, 0, 0}) < 1e-12);
  CHECK(sup_norm_dft(one) == doctest::Approx(r5));

  auto delta = PeriodicFunction::tabulate(7, [](int64_t x) { return x == 0 ? std::sqrt(7.0) : 0.0; });
  for (cplx v : delta.fourier().values()) CHECK(std::abs(v - 1.0) < 1e-12);

  auto chi = legendre(5);
  CHECK(std::abs(chi.fourier()(0)) < 1e-12);
  for (int64_t n = 1; n < 5; ++n) CHECK(std::abs(chi.fourier()(n)) == doctest::Approx(1.0));
  CHECK(sup_norm_dft(chi) == doctest::Approx(1.0));

  auto add = PeriodicFunction::tabulate(5, [](int64_t x) { return oracle::e(x / 5.0); });
  CHECK(sup_norm_dft(add) == doctest::Approx(r5));
}

TEST_CASE("dft agrees with the reference transform") {
  std::mt19937_64 rng(11);
  for (int64_t q : {5, 13, 101}) {
    auto v = oracle::random_vector(rng, static_cast<size_t>(q));
    PeriodicFunction K(q, v);
    CHECK(max_diff(K.fourier().values(), oracle::dft(v, +1)) < 1e-10);
    CHECK(max_diff(naive_dft(v, -1), oracle::dft(v, -1)) < 1e-10);
  }
}

TEST_CASE("dft round trip and Plancherel for random functions") {
  std::mt19937_64 rng(12);
  for (int64_t q : {5, 101, 997}) {
    auto K = random_function(rng, q);
    auto back = inverse_dft(dft(K));
    double err = 0;
    for (int64_t x = 0; x < q; ++x) err = std::max(err, std::abs(back(x) - K(x)));
    CHECK(err <= 1e-9 * std::sqrt(K.norm2_squared()));
    CHECK(plancherel_defect(K) <= 1e-9 * K.norm2_squared());
  }
}

TEST_CASE("Plancherel for structured functions") {
  auto one = PeriodicFunction::tabulate(7, [](int64_t) { return 1.0; });
  CHECK(plancherel_defect(one) <= 1e-9 * one.norm2_squared());
  auto kl = PeriodicFunction::tabulate(11, [](int64_t x) { return oracle::kloosterman(x, 11); });
  CHECK(plancherel_defect(kl) <= 1e-9 * kl.norm2_squared());
}

TEST_CASE("sup_norm_dft never exceeds sqrt(q) max|K|") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int64_t q = trial % 2 ? 101 : 5;
    auto K = random_function(rng, q);
    CHECK(sup_norm_dft(K) <= std::sqrt(double(q)) * K.sup_norm() * (1 + 1e-12));
  }
}

TEST_CASE("correlation_L matches its definition and Fourier formula") {
  auto one = PeriodicFunction::tabulate(5, [](int64_t) { return 1.0; });
  auto L1 = correlation_L(one);
  for (int64_t x = 0; x < 5; ++x) CHECK(std::abs(L1.L(x) - std::sqrt(5.0)) < 1e-12);

  auto Lchi = correlation_L(legendre(5));
  const auto& Lhat = Lchi.L.fourier();
  CHECK(std::abs(Lhat(0)) < 1e-12);
  for (int64_t h = 1; h < 5; ++h) CHECK(std::abs(Lhat(h) - 1.0) < 1e-12);

  std::mt19937_64 rng(14);
  for (int64_t q : {5, 101}) {
    for (int trial = 0; trial < 50; ++trial) {
      auto K = random_function(rng, q);
      auto r = correlation_L(K);
      REQUIRE(r.fourier_defect <= 1e-9);
      const auto Khat = oracle::dft(std::vector<cplx>(K.values().begin(), K.values().end()));
      // L(x) recomputed from its definition.
      for (int64_t x : {int64_t{0}, int64_t{1}, q - 1}) {
        cplx acc = std::norm(Khat[0]);
        for (int64_t u = 1; u < q; ++u) acc += std::norm(Khat[size_t(u)]) * oracle::e(-double(oracle::mod(oracle::inverse(u, q) * x, q)) / q);
        CHECK(std::abs(r.L(x) - acc / std::sqrt(double(q))) < 1e-9 * (1 + K.norm2_squared()));
      }
      CHECK(std::abs(r.L.fourier()(0) - std::norm(Khat[0])) < 1e-9 * K.norm2_squared());
    }
  }
}

TEST_CASE("correlation_K2hat") {
  auto chi = legendre(7);
  auto C = correlation_K2hat(chi, 1, 1, 1);
  CHECK(std::abs(C(0) - 6.0 / std::sqrt(7.0)) < 1e-12);
  // sum over units of e(nh/7) is -1 for h != 0
  for (int64_t h = 1; h < 7; ++h) CHECK(std::abs(C(h) + 1.0 / std::sqrt(7.0)) < 1e-12);

  auto one = PeriodicFunction::tabulate(11, [](int64_t) { return 1.0; });
  auto C1 = correlation_K2hat(one, 3, 2, 5);
  CHECK(std::abs(C1(0) - std::sqrt(11.0)) < 1e-12);
  for (int64_t h = 1; h < 11; ++h) CHECK(std::abs(C1(h)) < 1e-12);

  auto kl = build(parse_trace_spec("kl2", 11));
  auto Ck = correlation_K2hat(kl, 1, 1, 2);
  CHECK(std::isfinite(Ck.sup_norm()));
  MESSAGE("Kl2 mod 11 correlation sup-norm " << Ck.sup_norm());

  CHECK_THROWS_AS(correlation_K2hat(kl, 11, 1, 1), NotCoprime);
  CHECK_THROWS_AS(correlation_K2hat(kl, 1, 22, 1), NotCoprime);
}

TEST_CASE("pointwise helpers") {
  std::mt19937_64 rng(15);
  auto a = random_function(rng, 13), b = random_function(rng, 13);
  auto ab = multiply(a, b);
  auto ac = conjugate(a);
  auto ad = dilate(a, 3);
  for (int64_t x = 0; x < 13; ++x) {
    CHECK(std::abs(ab(x) - a(x) * b(x)) < 1e-14);
    CHECK(std::abs(ac(x) - std::conj(a(x))) < 1e-14);
    CHECK(std::abs(ad(x) - a(3 * x)) < 1e-14);
  }
  CHECK_THROWS_AS(PeriodicFunction(5, std::vector<cplx>(4)), InputError);
}
