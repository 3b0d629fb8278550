#include "tracesum/tracefn.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "tracesum/errors.hpp"

namespace tracesum {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int64_t parse_int(std::string_view s, std::string_view context) {
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw InvalidSpec(fmt::format("bad integer '{}' in trace spec '{}'", s, context));
  return v;
}

Polynomial parse_polynomial(std::string_view s, std::string_view context) {
  Polynomial p;
  for (auto part : split(s, '/')) p.coeffs.push_back(parse_int(part, context));
  return p;
}

// Mixed character value; chi(0) = 0 kills the product.
cplx mixed_value(const trace::MixedCharacter& m, int64_t q, const DlogTable& dlog, const RootTable& unit_roots,
                 const RootTable& roots, int64_t n) {
  int64_t exponent = 0;
  for (size_t i = 0; i < m.characters.size(); ++i) {
    const int64_t v = m.numerators[i].eval_mod(n, q);
    if (v == 0) return 0.0;
    exponent += mul_mod(m.characters[i], dlog.log(v), q - 1);
  }
  return unit_roots(exponent) * roots(m.additive.eval_mod(n, q));
}

void require_prime(int64_t q, std::string_view what) {
  if (!is_prime(q)) throw InvalidSpec(fmt::format("{} needs a prime modulus, got {}", what, q));
}

}  // namespace

int64_t Polynomial::eval_mod(int64_t x, int64_t q) const {
  int64_t acc = 0;
  const int64_t xr = reduce(x, q);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = reduce(mul_mod(acc, xr, q) + reduce(*it, q), q);
  return acc;
}

std::string TraceFunctionSpec::label() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, trace::HyperKloosterman>)
          return fmt::format("kl{}", v.rank);
        else if constexpr (std::is_same_v<T, trace::LegendreSymbol>)
          return "legendre";
        else if constexpr (std::is_same_v<T, trace::Delta>)
          return fmt::format("delta:{}", v.point);
        else if constexpr (std::is_same_v<T, trace::AdditiveCharacter>)
          return fmt::format("additive:{}", v.slope);
        else if constexpr (std::is_same_v<T, trace::MixedCharacter>)
          return "mixed";
        else
          return "custom";
      },
      variant);
}

TraceFunctionSpec parse_trace_spec(std::string_view text, int64_t q) {
  TraceFunctionSpec spec;
  spec.q = q;
  if (text == "legendre") {
    spec.variant = trace::LegendreSymbol{};
  } else if (text.starts_with("kl") && text.size() > 2 && text.find(':') == std::string_view::npos) {
    spec.variant = trace::HyperKloosterman{static_cast<int>(parse_int(text.substr(2), text))};
  } else if (text.starts_with("delta:")) {
    spec.variant = trace::Delta{parse_int(text.substr(6), text)};
  } else if (text.starts_with("additive:")) {
    spec.variant = trace::AdditiveCharacter{parse_int(text.substr(9), text)};
  } else if (text.starts_with("mixed:")) {
    trace::MixedCharacter m;
    bool have_g = false;
    for (auto field : split(text.substr(6), ',')) {
      const auto eq = field.find('=');
      if (eq == std::string_view::npos) throw InvalidSpec(fmt::format("expected key=value in '{}'", text));
      const auto key = field.substr(0, eq);
      const auto value = field.substr(eq + 1);
      if (key == "j") {
        for (auto j : split(value, ';')) m.characters.push_back(parse_int(j, text));
      } else if (key == "f") {
        for (auto f : split(value, ';')) m.numerators.push_back(parse_polynomial(f, text));
      } else if (key == "g") {
        m.additive = parse_polynomial(value, text);
        have_g = true;
      } else {
        throw InvalidSpec(fmt::format("unknown key '{}' in '{}'", key, text));
      }
    }
    if (!have_g) m.additive = Polynomial{{0}};
    spec.variant = std::move(m);
  } else {
    throw InvalidSpec(fmt::format("unknown trace function '{}'", text));
  }
  validate(spec);
  return spec;
}

void validate(const TraceFunctionSpec& spec) {
  const int64_t q = spec.q;
  if (q < 2) throw InvalidSpec(fmt::format("trace function needs q >= 2, got {}", q));
  std::visit(
      [q](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, trace::HyperKloosterman>) {
          require_prime(q, "Kl_r");
          if (v.rank < 2) throw InvalidSpec(fmt::format("Kl_r needs rank >= 2, got {}", v.rank));
        } else if constexpr (std::is_same_v<T, trace::LegendreSymbol>) {
          require_prime(q, "legendre");
          if (q == 2) throw InvalidSpec("legendre symbol needs an odd prime");
        } else if constexpr (std::is_same_v<T, trace::MixedCharacter>) {
          require_prime(q, "mixed character");
          if (v.characters.size() != v.numerators.size())
            throw InvalidSpec(fmt::format("mixed character: {} characters but {} numerators", v.characters.size(),
                                          v.numerators.size()));
          for (auto j : v.characters)
            if (j < 0 || j > q - 2) throw InvalidSpec(fmt::format("character index {} outside 0..{}", j, q - 2));
          for (const auto& f : v.numerators)
            if (f.coeffs.empty()) throw InvalidSpec("empty numerator polynomial");
          if (v.additive.coeffs.empty()) throw InvalidSpec("empty additive polynomial");
        } else if constexpr (std::is_same_v<T, trace::CustomTable>) {
          if (static_cast<int64_t>(v.values.size()) != q)
            throw InvalidSpec(fmt::format("custom table has {} values for modulus {}", v.values.size(), q));
        }
      },
      spec.variant);
}

PeriodicFunction build(const TraceFunctionSpec& spec) {
  validate(spec);
  const int64_t q = spec.q;
  return std::visit(
      [q](const auto& v) -> PeriodicFunction {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, trace::HyperKloosterman>) {
          return hyper_kloosterman(q, v.rank);
        } else if constexpr (std::is_same_v<T, trace::LegendreSymbol>) {
          return PeriodicFunction::tabulate(q, [q](int64_t n) -> double {
            if (n == 0) return 0.0;
            return pow_mod(n, (q - 1) / 2, q) == 1 ? 1.0 : -1.0;
          });
        } else if constexpr (std::is_same_v<T, trace::Delta>) {
          const int64_t a = reduce(v.point, q);
          const double amp = std::sqrt(static_cast<double>(q));
          return PeriodicFunction::tabulate(q, [a, amp](int64_t n) { return n == a ? amp : 0.0; });
        } else if constexpr (std::is_same_v<T, trace::AdditiveCharacter>) {
          const auto roots = RootTable::get(q);
          return PeriodicFunction::tabulate(q, [&](int64_t n) { return (*roots)(mul_mod(reduce(v.slope, q), n, q)); });
        } else if constexpr (std::is_same_v<T, trace::MixedCharacter>) {
          const auto dlog = dlog_table(q);
          const auto unit_roots = RootTable::get(q - 1);
          const auto roots = RootTable::get(q);
          return PeriodicFunction::tabulate(
              q, [&](int64_t n) { return mixed_value(v, q, *dlog, *unit_roots, *roots, n); });
        } else {
          return PeriodicFunction(q, v.values);
        }
      },
      spec.variant);
}

std::shared_ptr<const DlogTable> dlog_table(int64_t q) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const DlogTable>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[q];
  if (!slot) slot = std::make_shared<const DlogTable>(Modulus(q));
  return slot;
}

DirichletCharacter::DirichletCharacter(int64_t q, int64_t index)
    : dlog_(dlog_table(q)), roots_(RootTable::get(q - 1)), index_(index) {
  if (index < 0 || index > q - 2)
    throw InvalidSpec(fmt::format("character index {} outside 0..{} for q = {}", index, q - 2, q));
}

cplx DirichletCharacter::operator()(int64_t x) const {
  const int64_t q = modulus();
  const int64_t r = reduce(x, q);
  if (r == 0) return 0.0;
  return (*roots_)(mul_mod(index_, dlog_->log(r), q - 1));
}

cplx kloosterman(int64_t n, int64_t m) {
  if (m < 1) throw InputError("kloosterman needs m >= 1");
  const auto roots = RootTable::get(m);
  cplx acc = 0;
  for (int64_t x = 0; x < m; ++x) {
    if (std::gcd(x, m) != 1) continue;
    acc += (*roots)(mul_mod(reduce(n, m), x, m) + mod_inverse(x, m));
  }
  return acc / std::sqrt(static_cast<double>(m));
}

std::shared_ptr<const std::vector<cplx>> kloosterman_table(int64_t m) {
  static std::mutex mu;
  static std::map<int64_t, std::shared_ptr<const std::vector<cplx>>> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(m); it != cache.end()) return it->second;
  }
  if (m < 1) throw InputError("kloosterman_table needs m >= 1");
  const auto roots = RootTable::get(m);
  std::vector<int64_t> units, inverses;
  for (int64_t x = 0; x < m; ++x)
    if (std::gcd(x, m) == 1) {
      units.push_back(x);
      inverses.push_back(mod_inverse(x, m));
    }
  auto table = std::make_shared<std::vector<cplx>>(static_cast<size_t>(m));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (int64_t n = 0; n < m; ++n) {
    cplx acc = 0;
    for (size_t i = 0; i < units.size(); ++i) acc += (*roots)(mul_mod(n, units[i], m) + inverses[i]);
    (*table)[static_cast<size_t>(n)] = acc * scale;
  }
  std::lock_guard lock(mu);
  return cache.emplace(m, std::move(table)).first->second;
}

PeriodicFunction hyper_kloosterman(int64_t q, int rank) {
  require_prime(q, "Kl_r");
  if (rank < 2) throw InvalidSpec(fmt::format("Kl_r needs rank >= 2, got {}", rank));
  const double sqrt_q = std::sqrt(static_cast<double>(q));
  const auto roots = RootTable::get(q);

  if (rank <= 3) {
    // Kl2(n) = q^{-1/2} sum_x e((x + n xbar)/q)
    std::vector<int64_t> inv(static_cast<size_t>(q), 0);
    for (int64_t x = 1; x < q; ++x) inv[static_cast<size_t>(x)] = mod_inverse(x, q);
    std::vector<cplx> kl2(static_cast<size_t>(q), 0.0);
    for (int64_t n = 1; n < q; ++n) {
      cplx acc = 0;
      for (int64_t x = 1; x < q; ++x) acc += (*roots)(x + mul_mod(n, inv[static_cast<size_t>(x)], q));
      kl2[static_cast<size_t>(n)] = acc / sqrt_q;
    }
    if (rank == 2) return PeriodicFunction(q, std::move(kl2));
    // Kl3(n) = q^{-1/2} sum_z e(z/q) Kl2(n zbar)
    std::vector<cplx> kl3(static_cast<size_t>(q), 0.0);
    for (int64_t n = 1; n < q; ++n) {
      cplx acc = 0;
      for (int64_t z = 1; z < q; ++z) acc += (*roots)(z) * kl2[static_cast<size_t>(mul_mod(n, inv[static_cast<size_t>(z)], q))];
      kl3[static_cast<size_t>(n)] = acc / sqrt_q;
    }
    return PeriodicFunction(q, std::move(kl3));
  }

  // Mellin side: sum_y Kl_r(y) chi(y) = sqrt(q) tau(chi)^r, inverted over the unit group.
  const auto dlog = dlog_table(q);
  const auto taus = gauss_sums(q);
  std::vector<cplx> spectrum(taus.size());
  for (size_t j = 0; j < taus.size(); ++j) spectrum[j] = std::pow(taus[j], rank);
  // naive_dft(-1) carries (q-1)^{-1/2}; we need sqrt(q)/(q-1).
  auto on_units = naive_dft(spectrum, -1);
  const double scale = sqrt_q / std::sqrt(static_cast<double>(q - 1));
  std::vector<cplx> values(static_cast<size_t>(q), 0.0);
  for (int64_t k = 0; k < q - 1; ++k) values[static_cast<size_t>(dlog->power(k))] = on_units[static_cast<size_t>(k)] * scale;
  return PeriodicFunction(q, std::move(values));
}

std::vector<cplx> gauss_sums(int64_t q) {
  require_prime(q, "gauss_sums");
  const auto dlog = dlog_table(q);
  const auto roots = RootTable::get(q);
  std::vector<cplx> b(static_cast<size_t>(q - 1));
  for (int64_t k = 0; k < q - 1; ++k) b[static_cast<size_t>(k)] = (*roots)(dlog->power(k));
  auto taus = naive_dft(b, +1);
  const double scale = std::sqrt(static_cast<double>(q - 1) / static_cast<double>(q));
  for (auto& t : taus) t *= scale;
  return taus;
}

cplx gauss_sum(const DirichletCharacter& chi) {
  if (chi.is_trivial()) throw TrivialCharacter("gauss_sum needs a nontrivial character");
  const int64_t q = chi.modulus();
  const auto roots = RootTable::get(q);
  cplx acc = 0;
  for (int64_t x = 1; x < q; ++x) acc += chi(x) * (*roots)(x);
  return acc / std::sqrt(static_cast<double>(q));
}

std::vector<cplx> mellin_transform(const PeriodicFunction& K) {
  const int64_t q = K.modulus();
  require_prime(q, "mellin_transform");
  const auto dlog = dlog_table(q);
  std::vector<cplx> a(static_cast<size_t>(q - 1));
  for (int64_t k = 0; k < q - 1; ++k) a[static_cast<size_t>(k)] = K(dlog->power(k));
  auto m = naive_dft(a, -1);
  const double scale = std::sqrt(static_cast<double>(q - 1) / static_cast<double>(q));
  for (auto& v : m) v *= scale;
  return m;
}

Kl3Twist kl3_twist(const PeriodicFunction& K, double tol) {
  const int64_t q = K.modulus();
  require_prime(q, "kl3_twist");
  const auto kl3 = hyper_kloosterman(q, 3);
  const double sqrt_q = std::sqrt(static_cast<double>(q));

  std::vector<cplx> direct(static_cast<size_t>(q), 0.0);
  for (int64_t n = 1; n < q; ++n) {
    cplx acc = 0;
    for (int64_t x = 1; x < q; ++x) acc += K(x) * kl3(mul_mod(n, x, q));
    direct[static_cast<size_t>(n)] = acc / sqrt_q;
  }

  const auto dlog = dlog_table(q);
  const auto taus = gauss_sums(q);
  const auto mellin = mellin_transform(K);
  std::vector<cplx> spectrum(taus.size());
  for (size_t j = 0; j < taus.size(); ++j) spectrum[j] = taus[j] * taus[j] * taus[j] * mellin[j];
  auto on_units = naive_dft(spectrum, -1);  // (q-1)^{-1/2} sum_j ... e(-jk/(q-1))
  const double scale = sqrt_q / std::sqrt(static_cast<double>(q - 1));
  std::vector<cplx> gauss(static_cast<size_t>(q), 0.0);
  for (int64_t k = 0; k < q - 1; ++k) gauss[static_cast<size_t>(dlog->power(k))] = on_units[static_cast<size_t>(k)] * scale;

  double worst = 0;
  for (int64_t n = 0; n < q; ++n) worst = std::max(worst, std::abs(direct[static_cast<size_t>(n)] - gauss[static_cast<size_t>(n)]));
  const double defect = worst / std::max(1.0, std::sqrt(K.norm2_squared()));
  if (defect > tol)
    throw IdentityViolation(fmt::format("kl3_twist: direct and Gauss-sum forms differ by {:.3e} mod {}", defect, q));
  return {PeriodicFunction(q, std::move(direct)), PeriodicFunction(q, std::move(gauss)), defect};
}

}  // namespace tracesum
