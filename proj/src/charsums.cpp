#include "tracesum/charsums.hpp"

#include <fmt/format.h>

#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "tracesum/errors.hpp"
#include "tracesum/tracefn.hpp"

namespace tracesum {

int64_t CInstance::big_modulus() const { return r * std::lcm(l1, l2) / m; }

int64_t CInstance::delta() const {
  const int64_t g = std::gcd(l1, l2);
  return q * (l2 * l2 * p2 - l1 * l1 * p1) / (g * g);
}

void validate(const CInstance& inst) {
  if (inst.r < 1 || inst.m < 1 || inst.l1 < 1 || inst.l2 < 1 || inst.q < 1)
    throw InvalidInstance("C-sum parameters r, m, l1, l2, q must be positive");
  if ((inst.r * inst.l1) % inst.m != 0 || (inst.r * inst.l2) % inst.m != 0)
    throw InvalidInstance(fmt::format("m = {} must divide r l1 = {} and r l2 = {}", inst.m, inst.r * inst.l1,
                                      inst.r * inst.l2));
  if (std::gcd(inst.p1, inst.s1()) != 1 || std::gcd(inst.p2, inst.s2()) != 1)
    throw InvalidInstance(fmt::format("p1 = {}, p2 = {} must be invertible modulo {} and {}", inst.p1, inst.p2,
                                      inst.s1(), inst.s2()));
}

std::vector<cplx> c_sum_batch(const CInstance& inst, const std::vector<int64_t>& ns) {
  validate(inst);
  const int64_t s1 = inst.s1(), s2 = inst.s2(), M = inst.big_modulus();
  const auto T1 = kloosterman_table(s1);
  const auto T2 = kloosterman_table(s2);
  const int64_t a1 = mul_mod(mod_inverse(inst.p1, s1), reduce(inst.q, s1), s1);
  const int64_t a2 = mul_mod(mod_inverse(inst.p2, s2), reduce(inst.q, s2), s2);

  std::vector<cplx> g(static_cast<size_t>(M));
  for (int64_t b = 0; b < M; ++b)
    g[static_cast<size_t>(b)] =
        (*T1)[static_cast<size_t>(mul_mod(a1, b, s1))] * std::conj((*T2)[static_cast<size_t>(mul_mod(a2, b, s2))]);

  const auto roots = RootTable::get(M);
  std::vector<cplx> out;
  out.reserve(ns.size());
  for (int64_t n : ns) {
    const int64_t step = reduce(n, M);
    cplx acc = 0;
    int64_t k = 0;
    for (int64_t b = 0; b < M; ++b) {
      acc += g[static_cast<size_t>(b)] * roots->raw(static_cast<size_t>(k));
      k += step;
      if (k >= M) k -= M;
    }
    out.push_back(acc);
  }
  return out;
}

cplx c_sum(const CInstance& inst) { return c_sum_batch(inst, {inst.n}).front(); }

int64_t ramanujan_sum(int64_t n, int64_t m) {
  if (m < 1) throw InputError(fmt::format("ramanujan_sum needs m >= 1, got {}", m));
  const int64_t g = std::gcd(std::abs(n), m);  // gcd(0, m) = m
  int64_t total = 0;
  for (int64_t d : divisors(g)) total += d * mobius(m / d);
  return total;
}

double diagonal_constant(int64_t s) { return std::pow(2.0, omega(s)); }

std::vector<CInstance> lemma62_grid(int64_t r_max, const std::vector<int64_t>& ls, const std::vector<int64_t>& ps,
                                    int64_t n_max, const std::vector<int64_t>& qs) {
  std::vector<CInstance> out;
  for (int64_t q : qs)
    for (int64_t r = 1; r <= r_max; ++r)
      for (int64_t l1 : ls)
        for (int64_t l2 : ls)
          for (int64_t m : divisors(std::gcd(r * l1, r * l2)))
            for (int64_t p1 : ps)
              for (int64_t p2 : ps) {
                CInstance inst{0, p1, p2, l1, l2, r, m, q};
                if (std::gcd(p1, inst.s1()) != 1 || std::gcd(p2, inst.s2()) != 1) continue;
                for (int64_t n = -n_max; n <= n_max; ++n) {
                  inst.n = n;
                  out.push_back(inst);
                }
              }
  return out;
}

AuditReport lemma62_audit(const std::vector<CInstance>& instances, bool raise, double tol) {
  AuditReport rep;
  rep.instances = static_cast<int64_t>(instances.size());

  // Batch over n: everything else fixes the Kloosterman product.
  using Key = std::tuple<int64_t, int64_t, int64_t, int64_t, int64_t, int64_t, int64_t>;
  std::map<Key, std::vector<size_t>> groups;
  for (size_t i = 0; i < instances.size(); ++i) {
    const auto& c = instances[i];
    groups[{c.p1, c.p2, c.l1, c.l2, c.r, c.m, c.q}].push_back(i);
  }
  std::vector<cplx> values(instances.size());
  for (const auto& [key, idx] : groups) {
    std::vector<int64_t> ns;
    for (size_t i : idx) ns.push_back(instances[i].n);
    const auto vals = c_sum_batch(instances[idx.front()], ns);
    for (size_t j = 0; j < idx.size(); ++j) values[idx[j]] = vals[j];
  }

  auto record = [&rep](const CInstance& inst, cplx value, int part, double bound, double ratio, bool pass) {
    rep.rows.push_back({inst, value, std::to_string(part), bound, ratio, pass});
    ++rep.checked[part];
    rep.max_ratio[part] = std::max(rep.max_ratio[part], ratio);
    if (!pass) ++rep.violations[part];
  };

  for (size_t i = 0; i < instances.size(); ++i) {
    const auto& c = instances[i];
    const cplx v = values[i];
    const double a = std::abs(v);
    const int64_t M = c.big_modulus();

    if (c.n == 0 && c.l1 != c.l2) {
      const double slack = tol * static_cast<double>(M);
      record(c, v, 1, 0.0, a / static_cast<double>(M), a <= slack);
    }
    if (c.n == 0 && c.l1 == c.l2) {
      const double bound = static_cast<double>(std::gcd(c.s1(), std::abs(c.p2 - c.p1)));
      record(c, v, 2, bound, a / bound, a <= bound * (1 + tol) + tol);
    }
    const int64_t delta = c.delta();
    if (delta == 0) {
      if (c.p1 != c.p2 || c.l1 != c.l2) {
        ++rep.diagonal_degenerate;
        record(c, v, 4, 0.0, 0.0, false);
      } else {
        const int64_t s = c.s1();
        const double bound = diagonal_constant(s) * std::sqrt(static_cast<double>(s)) *
                             std::sqrt(static_cast<double>(std::gcd(std::abs(c.n), s)));
        record(c, v, 4, bound, a / bound, a <= bound * (1 + tol));
      }
    }
    const int64_t g_all = std::gcd(std::gcd(std::abs(c.n), c.s1()), c.s2());
    const int64_t g_delta = std::gcd(std::abs(delta), g_all);
    const double norm = std::sqrt(static_cast<double>(M)) * static_cast<double>(g_delta) /
                        std::sqrt(static_cast<double>(g_all));
    record(c, v, 3, norm, a / norm, true);
  }

  if (raise) {
    const int64_t bad = rep.violations[1] + rep.violations[2] + rep.violations[4];
    if (bad > 0)
      throw LemmaViolation(fmt::format("C-sum audit: {} violations (part 1: {}, part 2: {}, part 4: {})", bad,
                                       rep.violations[1], rep.violations[2], rep.violations[4]));
  }
  return rep;
}

}  // namespace tracesum
