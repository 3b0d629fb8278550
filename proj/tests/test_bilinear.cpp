#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tracesum/bilinear.hpp"
#include "tracesum/errors.hpp"
#include "tracesum/tracefn.hpp"

using namespace tracesum;
using oracle::cplx;

namespace {

cplx brute(const std::vector<cplx>& a, const std::vector<cplx>& b, const PeriodicFunction& K) {
  const auto q = static_cast<int64_t>(a.size());
  cplx acc = 0;
  for (int64_t m = 0; m < q; ++m)
    for (int64_t n = 0; n < q; ++n) acc += a[size_t(m)] * b[size_t(n)] * K(oracle::mod(m - n, q));
  return acc;
}

std::vector<cplx> delta0(int64_t q) {
  std::vector<cplx> v(size_t(q), 0.0);
  v[0] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("bilinear form on basic inputs") {
  const int64_t q = 7;
  auto K = build(parse_trace_spec("kl2", q));
  auto r = bilinear_form({delta0(q), delta0(q), K});
  CHECK(std::abs(r.direct - K(0)) < 1e-12);

  std::vector<cplx> ones(size_t(q), 1.0);
  cplx total = 0;
  for (auto v : K.values()) total += v;
  auto s = bilinear_form({ones, ones, K});
  CHECK(std::abs(s.direct - double(q) * total) < 1e-10);

  auto one = PeriodicFunction::tabulate(q, [](int64_t) { return 1.0; });
  CHECK(bound_ratio({ones, ones, one}) == doctest::Approx(1.0));
}

TEST_CASE("extremal kernel saturates the bound") {
  for (int64_t q : {5, 11, 101}) {
    const cplx phase = std::polar(1.0, 0.7);
    auto K = inverse_dft(PeriodicFunction::tabulate(q, [&](int64_t) { return phase; }));
    CHECK(bound_ratio({delta0(q), delta0(q), K}) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("direct and spectral sides agree on random instances") {
  std::mt19937_64 rng(31);
  for (int64_t q : {5, 101}) {
    for (int trial = 0; trial < 10; ++trial) {
      auto a = oracle::random_vector(rng, size_t(q)), b = oracle::random_vector(rng, size_t(q));
      PeriodicFunction K(q, oracle::random_vector(rng, size_t(q)));
      auto r = bilinear_form({a, b, K});
      CHECK(r.defect <= 1e-8);
      CHECK(std::abs(r.direct - brute(a, b, K)) <= 1e-9 * std::abs(r.direct) + 1e-9);
    }
  }
}

TEST_CASE("bound holds on random instances") {
  std::mt19937_64 rng(32);
  const int64_t qs[] = {5, 101, 499};
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int64_t q = qs[trial % 3];
    BilinearInstance B{oracle::random_vector(rng, size_t(q)), oracle::random_vector(rng, size_t(q)),
                       PeriodicFunction(q, oracle::random_vector(rng, size_t(q)))};
    worst = std::max(worst, bound_ratio(B));
  }
  CHECK(worst <= 1 + 1e-8);
}

TEST_CASE("bound holds for every +-1 instance mod 5") {
  const int64_t q = 5;
  auto sign_vector = [](int mask) {
    std::vector<cplx> v(5);
    for (int i = 0; i < 5; ++i) v[size_t(i)] = (mask >> i) & 1 ? -1.0 : 1.0;
    return v;
  };
  double worst = 0;
  // alpha fixed with alpha(0) = 1 up to global sign symmetry.
  for (int ma = 0; ma < 32; ma += 2)
    for (int mb = 0; mb < 32; ++mb)
      for (int mk = 0; mk < 32; ++mk) {
        BilinearInstance B{sign_vector(ma), sign_vector(mb), PeriodicFunction(q, sign_vector(mk))};
        worst = std::max(worst, bound_ratio(B));
      }
  CHECK(worst <= 1 + 1e-8);
}

TEST_CASE("translating the kernel and beta together leaves the form unchanged") {
  std::mt19937_64 rng(33);
  const int64_t q = 31;
  auto a = oracle::random_vector(rng, size_t(q)), b = oracle::random_vector(rng, size_t(q));
  PeriodicFunction K(q, oracle::random_vector(rng, size_t(q)));
  const auto base = bilinear_form({a, b, K}).direct;
  for (int64_t c : {1, 5, 30}) {
    auto Kc = PeriodicFunction::tabulate(q, [&](int64_t x) { return K(x - c); });
    std::vector<cplx> bc(static_cast<size_t>(q));
    for (int64_t n = 0; n < q; ++n) bc[size_t(n)] = b[size_t(oracle::mod(n + c, q))];
    // sum a(m) b(n + c) K(m - n - c) = sum a(m) b(n') K(m - n')
    CHECK(std::abs(bilinear_form({a, bc, Kc}).direct - base) <= 1e-9 * std::abs(base));
  }
}

TEST_CASE("bilinear errors") {
  auto K = PeriodicFunction::zero(5);
  CHECK_THROWS_AS(bound_ratio({delta0(5), delta0(5), K}), DegenerateNorm);
  CHECK_THROWS_AS(bilinear_form({delta0(4), delta0(5), K}), InputError);
}
