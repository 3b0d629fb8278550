#include <doctest.h>

#include "oracles.hpp"
#include "tracesum/errors.hpp"
#include "tracesum/modarith.hpp"

using namespace tracesum;

TEST_CASE("mod_inverse small cases") {
  CHECK(mod_inverse(1, 7) == 1);
  CHECK(mod_inverse(2, 5) == oracle::inverse(2, 5));
  CHECK(mod_inverse(-2, 5) == oracle::inverse(3, 5));
  CHECK_THROWS_AS(mod_inverse(3, 6), NotInvertible);
  CHECK_THROWS_AS(mod_inverse(0, 7), NotInvertible);
}

TEST_CASE("mod_inverse is exact for every unit of every prime up to 1000") {
  for (int64_t q : primes_in(2, 1000))
    for (int64_t x = 1; x < q; ++x) REQUIRE(mul_mod(mod_inverse(x, q), x, q) == 1);
}

TEST_CASE("mod_inverse on composite moduli matches search") {
  for (int64_t m = 2; m <= 60; ++m)
    for (int64_t x = 0; x < m; ++x) {
      if (oracle::gcd(x, m) == 1)
        CHECK(mod_inverse(x, m) == oracle::inverse(x, m));
      else
        CHECK_THROWS_AS(mod_inverse(x, m), NotInvertible);
    }
}

TEST_CASE("primitive roots are the smallest generators") {
  CHECK(primitive_root(Modulus(2)) == 1);
  CHECK(primitive_root(Modulus(5)) == oracle::primitive_root(5));
  CHECK(primitive_root(Modulus(7)) == oracle::primitive_root(7));
  for (int64_t q : primes_in(3, 400)) CHECK(primitive_root(Modulus(q)) == oracle::primitive_root(q));
}

TEST_CASE("mobius values and summatory identity") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(6) == oracle::mobius(6));
  CHECK(mobius(12) == 0);
  for (int64_t n = 1; n <= 10000; ++n) {
    REQUIRE(mobius(n) == oracle::mobius(n));
    int s = 0;
    for (int64_t d : divisors(n)) s += mobius(d);
    REQUIRE(s == (n == 1 ? 1 : 0));
  }
}

TEST_CASE("euler_phi and omega agree with counting") {
  for (int64_t n = 1; n <= 500; ++n) {
    int64_t phi = 0;
    for (int64_t x = 0; x < n; ++x) phi += oracle::gcd(x, n) == 1;
    CHECK(euler_phi(n) == phi);
    int w = 0;
    for (int64_t p = 2; p <= n; ++p) w += (n % p == 0 && oracle::is_prime(p));
    CHECK(omega(n) == w);
  }
}

TEST_CASE("factorization multiplies back") {
  for (int64_t n = 1; n <= 5000; ++n) {
    int64_t prod = 1;
    for (const auto& pp : factorize(n)) {
      CHECK(oracle::is_prime(pp.prime));
      prod *= pp.value();
    }
    REQUIRE(prod == n);
  }
  Modulus m(360);
  CHECK(m.factorization() == std::vector<PrimePower>{{2, 3}, {3, 2}, {5, 1}});
  CHECK_FALSE(m.is_prime());
  CHECK(Modulus(101).is_prime());
}

TEST_CASE("primes_in matches trial division") {
  auto ps = primes_in(10, 100);
  std::vector<int64_t> expected;
  for (int64_t n = 10; n < 100; ++n)
    if (oracle::is_prime(n)) expected.push_back(n);
  CHECK(ps == expected);
  CHECK(primes_in(2, 4) == std::vector<int64_t>{2, 3});
  CHECK(primes_in(24, 29).empty());
}

TEST_CASE("crt split and combine") {
  CHECK(crt_split(5, Modulus(6)) == std::vector<Residue>{{1, 2}, {2, 3}});
  CHECK(crt_split(0, Modulus(12)) == std::vector<Residue>{{0, 4}, {0, 3}});
  CHECK(crt_split(7, Modulus(15)) == std::vector<Residue>{{7 % 3, 3}, {7 % 5, 5}});
  for (int64_t m : {6, 12, 15, 60, 210, 1001}) {
    Modulus mm(m);
    for (int64_t x = 0; x < m; ++x) {
      auto parts = crt_split(x, mm);
      REQUIRE(crt_combine(parts) == x);
    }
  }
}

TEST_CASE("discrete log tables round-trip") {
  for (int64_t q : primes_in(3, 1000)) {
    DlogTable t{Modulus(q)};
    CHECK(t.generator() == oracle::primitive_root(q));
    std::vector<bool> seen(static_cast<size_t>(q - 1), false);
    for (int64_t x = 1; x < q; ++x) {
      const int64_t k = t.log(x);
      REQUIRE(k >= 0);
      REQUIRE(k < q - 1);
      REQUIRE(pow_mod(t.generator(), k, q) == x);
      REQUIRE(t.power(k) == x);
      REQUIRE_FALSE(seen[static_cast<size_t>(k)]);
      seen[static_cast<size_t>(k)] = true;
    }
  }
}
