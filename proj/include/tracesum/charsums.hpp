#pragma once

/**
 * @file charsums.hpp
 * @brief Complete sums of products of Kloosterman sums to composite moduli.
 *
 *   C(n) = sum_{beta mod M} Kl2(p1bar q beta; r l1/m) conj(Kl2(p2bar q beta; r l2/m)) e(beta n / M),
 *   M = r [l1, l2] / m, with pibar the inverse of pi modulo r li / m.
 */

#include <string>
#include <vector>

#include "tracesum/periodic.hpp"

namespace tracesum {

struct CInstance {
  int64_t n = 0;
  int64_t p1 = 0, p2 = 0;
  int64_t l1 = 0, l2 = 0;
  int64_t r = 1;
  int64_t m = 1;
  int64_t q = 0;

  int64_t s1() const { return r * l1 / m; }
  int64_t s2() const { return r * l2 / m; }
  /// r [l1, l2] / m.
  int64_t big_modulus() const;
  /// q (l2^2 p2 - l1^2 p1) / (l1, l2)^2.
  int64_t delta() const;
};

/// Throws InvalidInstance unless m | r li and (pi, r li / m) = 1.
void validate(const CInstance& inst);

cplx c_sum(const CInstance& inst);

/// C(n) for each n in `ns`, all other parameters taken from `inst`.
std::vector<cplx> c_sum_batch(const CInstance& inst, const std::vector<int64_t>& ns);

/// c_m(n) = sum_{d | (m, n)} d mu(m/d).
int64_t ramanujan_sum(int64_t n, int64_t m);

/// Constant used for the Delta = 0 bound |C| <= c (rl/m)^{1/2} (n, rl/m)^{1/2}.
double diagonal_constant(int64_t s);

struct AuditRow {
  CInstance inst;
  cplx value;
  std::string part;  // "1", "2", "4" or "3" (logged only)
  double bound;      // asserted bound, or the normalizer for part 3
  double ratio;      // |C| / bound
  bool pass;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  int64_t instances = 0;
  int64_t checked[5] = {0, 0, 0, 0, 0};  // indexed by part
  int64_t violations[5] = {0, 0, 0, 0, 0};
  double max_ratio[5] = {0, 0, 0, 0, 0};
  int64_t diagonal_degenerate = 0;  // Delta = 0 instances with (p1, l1) != (p2, l2)
};

/// Valid instances on the grid r <= r_max, l1, l2 in ls, p1, p2 in ps, m | (r l1, r l2), |n| <= n_max, q in qs.
std::vector<CInstance> lemma62_grid(int64_t r_max, const std::vector<int64_t>& ls, const std::vector<int64_t>& ps,
                                    int64_t n_max, const std::vector<int64_t>& qs);

/// Runs the checks on every instance. With `raise`, throws LemmaViolation after the audit if anything failed.
AuditReport lemma62_audit(const std::vector<CInstance>& instances, bool raise = true, double tol = 1e-8);

}  // namespace tracesum
