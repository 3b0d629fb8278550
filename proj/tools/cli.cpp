#include "cli.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "tracesum/amplifier.hpp"
#include "tracesum/bilinear.hpp"
#include "tracesum/charsums.hpp"
#include "tracesum/errors.hpp"
#include "tracesum/heckecoef.hpp"
#include "tracesum/io.hpp"
#include "tracesum/parallel.hpp"
#include "tracesum/sums.hpp"
#include "tracesum/tracefn.hpp"

namespace tracesum::cli {
namespace {

using json = nlohmann::ordered_json;

struct Globals {
  unsigned threads = 0;
  uint64_t seed = 0;
  std::string out;
  std::string manifest;
};

std::string timestamp() {
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(std::chrono::system_clock::now())));
}

std::vector<int64_t> parse_int_list(const std::string& text) {
  std::vector<int64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    size_t pos = 0;
    int64_t v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size()) throw InputError(fmt::format("'{}' is not an integer", item));
    out.push_back(v);
  }
  if (out.empty()) throw InputError(fmt::format("empty integer list '{}'", text));
  return out;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Output goes to --out if set, else stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
      if (!*file_) throw InputError(fmt::format("cannot open '{}' for writing", path));
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_manifest(const Globals& g, const std::string& command, const std::map<std::string, std::string>& flags,
                    const std::string& started) {
  std::string path = g.manifest;
  if (path.empty() && !g.out.empty()) path = g.out + ".manifest.json";
  if (path.empty()) return;
  json j;
  j["command"] = command;
  json f = json::object();
  for (const auto& [k, v] : flags) f[k] = v;
  j["flags"] = f;
  j["seed"] = g.seed;
  j["version"] = TRACESUM_VERSION;
  j["started"] = started;
  j["finished"] = timestamp();
  std::ofstream out(path, std::ios::trunc);
  out << j.dump(2) << '\n';
}

std::map<std::string, std::string> collect_flags(const CLI::App& sub) {
  std::map<std::string, std::string> flags;
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->count() == 0 || opt->get_name() == "--help") continue;
    std::string value;
    for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    flags[opt->get_name()] = value;
  }
  return flags;
}

int64_t hecke_limit_for(double X) { return static_cast<int64_t>(std::ceil(2 * X)) + 1; }

// Subcommand bodies -------------------------------------------------------

struct DftArgs {
  std::string trace = "kl2";
  int64_t q = 0;
};
void cmd_dft(const DftArgs& a, std::ostream& out) {
  const auto K = build(parse_trace_spec(a.trace, a.q));
  write_csv(out, K.fourier());
}

struct ScanArgs {
  std::vector<std::string> traces;
  std::string q_list = "101,211,401,809";
  std::string x_rule = "q^3/2";
  double z = 2.0;
  std::string coeff = "gl3";
};
void cmd_sum_scan(const ScanArgs& a, uint64_t seed, std::ostream& out) {
  ScanConfig cfg;
  cfg.traces = a.traces.empty() ? std::vector<std::string>{"legendre", "kl2", "kl3"} : a.traces;
  cfg.q_list = parse_int_list(a.q_list);
  cfg.Z = a.z;
  cfg.coeff = parse_coefficient(a.coeff);
  cfg.seed = seed;
  double X_max = 0;
  std::map<int64_t, double> lengths;
  for (int64_t q : cfg.q_list) {
    lengths[q] = parse_length(a.x_rule, q);
    X_max = std::max(X_max, lengths[q]);
  }
  cfg.x_fixed.reset();
  const auto H = HeckeSystem::from_environment(hecke_limit_for(X_max));

  // Each q may have its own X; run one scan per q and merge.
  std::vector<ScanRow> rows;
  for (int64_t q : cfg.q_list) {
    ScanConfig one = cfg;
    one.q_list = {q};
    one.x_fixed = lengths[q];
    auto part = exponent_scan(one, H);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const ScanRow& x, const ScanRow& y) {
    return std::tie(x.family, x.q) < std::tie(y.family, y.q);
  });
  CsvWriter csv(out, {"q", "X", "Z", "family", "S_re", "S_im", "khat_inf", "bound", "ratio", "trivial_ratio", "regime",
                      "in_window"});
  for (const auto& r : rows)
    csv.row({std::to_string(r.q), format_number(r.X), format_number(r.Z), r.family, format_number(r.S.real()),
             format_number(r.S.imag()), format_number(r.khat_inf), format_number(r.bound), format_number(r.ratio),
             format_number(r.trivial_ratio), r.trivial_regime ? "trivial" : "nontrivial", r.in_window ? "1" : "0"});
}

struct BilinearArgs {
  int64_t q = 101;
  int trials = 50;
};
void cmd_bilinear(const BilinearArgs& a, uint64_t seed, std::ostream& out) {
  if (a.trials < 1) throw InputError("--trials must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    std::vector<cplx> v(static_cast<size_t>(a.q));
    for (auto& x : v) x = {gauss(rng), gauss(rng)};
    return v;
  };
  std::vector<BilinearInstance> instances;
  for (int t = 0; t < a.trials; ++t) {
    auto alpha = random_vector();
    auto beta = random_vector();
    instances.push_back({std::move(alpha), std::move(beta), PeriodicFunction(a.q, random_vector())});
  }
  std::vector<BilinearValue> values(instances.size());
  std::vector<double> ratios(instances.size());
  parallel_for(instances.size(), [&](size_t i) {
    values[i] = bilinear_form(instances[i]);
    ratios[i] = bound_ratio(instances[i]);
  });
  CsvWriter csv(out, {"trial", "direct_re", "direct_im", "spectral_re", "spectral_im", "ratio"});
  int64_t exceeded = 0;
  for (size_t i = 0; i < instances.size(); ++i) {
    csv.row({std::to_string(i), format_number(values[i].direct.real()), format_number(values[i].direct.imag()),
             format_number(values[i].spectral.real()), format_number(values[i].spectral.imag()), format_number(ratios[i])});
    if (ratios[i] > 1.0 + 1e-8) ++exceeded;
  }
  if (exceeded) throw IdentityViolation(fmt::format("{} bilinear instances exceed the Fourier bound", exceeded));
}

struct AmplifierArgs {
  int64_t q = 101;
  std::string X = "q^3/2";
  int64_t P = 2;
  int64_t L = 2;
  std::string trace = "kl2";
  double tol = 1e-6;
  int64_t hmax = 0;
  double z = 2.0;
};
void cmd_amplifier(const AmplifierArgs& a, std::ostream& out) {
  const double X = parse_length(a.X, a.q);
  const auto K = build(parse_trace_spec(a.trace, a.q));
  const auto M = prime_pair_measure(a.P, a.L, a.q);
  const auto H = HeckeSystem::from_environment(hecke_limit_for(X));
  const SmoothWindow V(a.z);
  const double Hparam = amplifier_length(a.q, X, static_cast<double>(a.P), static_cast<double>(a.L));
  json j;
  j["q"] = a.q;
  j["X"] = X;
  j["P"] = a.P;
  j["L"] = a.L;
  j["trace"] = a.trace;
  j["p_set"] = M.p_set;
  j["l_set"] = M.l_set;
  try {
    const auto d = decompose_FO(K, H, V, X, M, Hparam, a.hmax, a.tol);
    j["F"] = complex_json(d.F);
    j["O"] = complex_json(d.O);
    j["S"] = complex_json(d.S);
    j["T"] = complex_json(d.T);
    j["defect"] = d.defect;
    j["H"] = d.Hparam;
    j["hmax"] = d.hmax;
    j["tail_bound"] = d.tail_bound;
    j["pass"] = true;
  } catch (const IdentityViolation&) {
    j["pass"] = false;
    out << j.dump(2) << '\n';
    throw;
  }
  out << j.dump(2) << '\n';
}

struct LemmaArgs {
  int64_t r_max = 12;
  std::string q_list = "17";
  std::string l_list = "3,7,11";
  std::string p_list = "5,13";
  int64_t n_max = 12;
};
void cmd_lemma(const LemmaArgs& a, std::ostream& out) {
  const auto grid = lemma62_grid(a.r_max, parse_int_list(a.l_list), parse_int_list(a.p_list), a.n_max,
                                 parse_int_list(a.q_list));
  const auto rep = lemma62_audit(grid, false);
  CsvWriter csv(out, {"part", "q", "r", "m", "l1", "l2", "p1", "p2", "n", "abs_C", "bound", "ratio", "pass"});
  for (const auto& row : rep.rows) {
    const auto& c = row.inst;
    csv.row({row.part, std::to_string(c.q), std::to_string(c.r), std::to_string(c.m), std::to_string(c.l1),
             std::to_string(c.l2), std::to_string(c.p1), std::to_string(c.p2), std::to_string(c.n),
             format_number(std::abs(row.value)), format_number(row.bound), format_number(row.ratio),
             row.pass ? "1" : "0"});
  }
  std::cerr << fmt::format("instances {}; part 1: {}/{} pass; part 2: {}/{} pass; part 4: {}/{} pass; part 3 max ratio {:.4g}\n",
                           rep.instances, rep.checked[1] - rep.violations[1], rep.checked[1],
                           rep.checked[2] - rep.violations[2], rep.checked[2], rep.checked[4] - rep.violations[4],
                           rep.checked[4], rep.max_ratio[3]);
  const int64_t bad = rep.violations[1] + rep.violations[2] + rep.violations[4];
  if (bad) throw LemmaViolation(fmt::format("{} C-sum bound violations", bad));
}

void cmd_hecke_table(int64_t limit, std::ostream& out) {
  if (limit < 1) throw InputError("--limit must be >= 1");
  const auto H = HeckeSystem::from_environment(limit);
  CsvWriter csv(out, {"n", "tau", "lambda", "lambda_1n"});
  for (int64_t n = 1; n <= limit; ++n)
    csv.row({std::to_string(n), to_string(H.tau(n)), format_number(H.lambda(n)), format_number(H.lambda_1n(n))});
}

struct PoissonArgs {
  std::vector<std::string> traces;
  int64_t q = 11;
  std::string X = "500";
  double z = 2.0;
  double tol = 1e-6;
};
void cmd_poisson(const PoissonArgs& a, std::ostream& out) {
  const auto traces = a.traces.empty() ? std::vector<std::string>{"kl2"} : a.traces;
  const double X = parse_length(a.X, a.q);
  const SmoothWindow V(a.z);
  CsvWriter csv(out, {"q", "X", "family", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "hmax", "defect"});
  int64_t bad = 0;
  for (const auto& t : traces) {
    const auto spec = parse_trace_spec(t, a.q);
    const auto r = poisson_check(build(spec), V, X);
    csv.row({std::to_string(a.q), format_number(X), spec.label(), format_number(r.lhs.real()),
             format_number(r.lhs.imag()), format_number(r.rhs.real()), format_number(r.rhs.imag()),
             std::to_string(r.hmax), format_number(r.defect)});
    if (r.defect > a.tol) ++bad;
  }
  if (bad) throw IdentityViolation(fmt::format("{} Poisson checks exceed tolerance {}", bad, a.tol));
}

struct KlStatsArgs {
  int64_t q_max = 500;
  int64_t q_min = 2;
};
void cmd_kl_stats(const KlStatsArgs& a, std::ostream& out) {
  const auto primes = primes_in(a.q_min, a.q_max + 1);
  struct Stat {
    double kl2 = 0, kl3 = 0, kl2_imag = 0, kl2_hat = 0, kl3_hat = 0;
  };
  std::vector<Stat> stats(primes.size());
  parallel_for(primes.size(), [&](size_t i) {
    const int64_t q = primes[i];
    const auto K2 = hyper_kloosterman(q, 2);
    const auto K3 = hyper_kloosterman(q, 3);
    Stat s;
    for (int64_t n = 1; n < q; ++n) {
      s.kl2 = std::max(s.kl2, std::abs(K2(n)));
      s.kl3 = std::max(s.kl3, std::abs(K3(n)));
      s.kl2_imag = std::max(s.kl2_imag, std::abs(K2(n).imag()));
    }
    s.kl2_hat = sup_norm_dft(K2);
    s.kl3_hat = sup_norm_dft(K3);
    stats[i] = s;
  });
  CsvWriter csv(out, {"q", "max_kl2", "max_kl3", "max_imag_kl2", "khat_inf_kl2", "khat_inf_kl3"});
  int64_t bad = 0;
  for (size_t i = 0; i < primes.size(); ++i) {
    const auto& s = stats[i];
    csv.row({std::to_string(primes[i]), format_number(s.kl2), format_number(s.kl3), format_number(s.kl2_imag),
             format_number(s.kl2_hat), format_number(s.kl3_hat)});
    if (s.kl2 > 2.0 + 1e-9 || s.kl3 > 3.0 + 1e-9 || s.kl2_imag > 1e-9) ++bad;
  }
  if (bad) throw IdentityViolation(fmt::format("{} moduli violate the Kloosterman bounds", bad));
}

}  // namespace

double parse_length(const std::string& rule, int64_t q) {
  auto number = [&rule](std::string text) {
    text.erase(std::remove_if(text.begin(), text.end(), [](char c) { return c == '(' || c == ')' || c == ' '; }),
               text.end());
    try {
      size_t pos = 0;
      const auto slash = text.find('/');
      if (slash != std::string::npos) {
        const double num = std::stod(text.substr(0, slash), &pos);
        if (pos != slash) throw std::invalid_argument("");
        const std::string den_text = text.substr(slash + 1);
        const double den = std::stod(den_text, &pos);
        if (pos != den_text.size() || den == 0) throw std::invalid_argument("");
        return num / den;
      }
      const double v = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw InputError(fmt::format("cannot parse length '{}'", rule));
    }
  };
  if (rule.starts_with("q^")) return std::pow(static_cast<double>(q), number(rule.substr(2)));
  return number(rule);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"Finite exponential sums, trace functions and Hecke data"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--manifest", g.manifest, "Run manifest path (default <out>.manifest.json)");

  DftArgs dft_args;
  auto* dft = app.add_subcommand("dft", "Unitary DFT of a trace function as CSV");
  dft->add_option("--trace", dft_args.trace, "Trace function spec");
  dft->add_option("--q", dft_args.q, "Prime modulus")->required();

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("sum-scan", "Scan |S_V(K,X)| against the exponent bound");
  scan->add_option("--trace", scan_args.traces, "Trace function spec (repeatable)");
  scan->add_option("--q-list", scan_args.q_list, "Comma-separated primes");
  scan->add_option("--x-rule", scan_args.x_rule, "Length: q^a, q^(a/b) or a number");
  scan->add_option("--z", scan_args.z, "Window sharpness Z");
  scan->add_option("--coeff", scan_args.coeff, "gl3 | gl2_square_arg | gl2_squared | unit");

  BilinearArgs bil_args;
  auto* bil = app.add_subcommand("bilinear-check", "Random bilinear forms against the Fourier bound");
  bil->add_option("--q", bil_args.q, "Modulus");
  bil->add_option("--trials", bil_args.trials, "Number of random instances");

  AmplifierArgs amp_args;
  auto* amp = app.add_subcommand("amplifier-check", "F/O decomposition of the amplified sum");
  amp->add_option("--q", amp_args.q, "Prime modulus");
  amp->add_option("--X", amp_args.X, "Length: q^a or a number");
  amp->add_option("--P", amp_args.P, "p-range start");
  amp->add_option("--L", amp_args.L, "l-range start");
  amp->add_option("--trace", amp_args.trace, "Trace function spec");
  amp->add_option("--tol", amp_args.tol, "Relative tolerance");
  amp->add_option("--hmax", amp_args.hmax, "h cutoff (0 = automatic)");
  amp->add_option("--z", amp_args.z, "Window sharpness Z");

  LemmaArgs lem_args;
  auto* lem = app.add_subcommand("lemma-check", "Audit the Kloosterman-correlation sum bounds");
  lem->add_option("--r-max", lem_args.r_max, "Largest r");
  lem->add_option("--q", lem_args.q_list, "Comma-separated outer primes");
  lem->add_option("--l-list", lem_args.l_list, "Comma-separated l values");
  lem->add_option("--p-list", lem_args.p_list, "Comma-separated p values");
  lem->add_option("--n-max", lem_args.n_max, "Largest |n|");

  int64_t hecke_limit = 100;
  auto* hecke = app.add_subcommand("hecke-table", "tau(n), lambda(n), lambda(1,n) as CSV");
  hecke->add_option("--limit", hecke_limit, "Largest n");

  PoissonArgs poi_args;
  auto* poi = app.add_subcommand("poisson-check", "Both sides of the Poisson formula");
  poi->add_option("--trace", poi_args.traces, "Trace function spec (repeatable)");
  poi->add_option("--q", poi_args.q, "Prime modulus");
  poi->add_option("--X", poi_args.X, "Length: q^a or a number");
  poi->add_option("--z", poi_args.z, "Window sharpness Z");
  poi->add_option("--tol", poi_args.tol, "Relative tolerance");

  KlStatsArgs kl_args;
  auto* kl = app.add_subcommand("kl-stats", "Sup norms of Kl2 and Kl3 for all primes up to a bound");
  kl->add_option("--q-max", kl_args.q_max, "Largest prime");
  kl->add_option("--q-min", kl_args.q_min, "Smallest prime");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  set_thread_count(g.threads);
  const std::string started = timestamp();
  CLI::App* sub = app.get_subcommands().front();
  try {
    Sink sink(g.out);
    auto& out = sink.stream();
    int code = 0;
    try {
      if (sub == dft) cmd_dft(dft_args, out);
      else if (sub == scan) cmd_sum_scan(scan_args, g.seed, out);
      else if (sub == bil) cmd_bilinear(bil_args, g.seed, out);
      else if (sub == amp) cmd_amplifier(amp_args, out);
      else if (sub == lem) cmd_lemma(lem_args, out);
      else if (sub == hecke) cmd_hecke_table(hecke_limit, out);
      else if (sub == poi) cmd_poisson(poi_args, out);
      else if (sub == kl) cmd_kl_stats(kl_args, out);
    } catch (const VerificationError& e) {
      std::cerr << "verification failed: " << e.what() << '\n';
      code = 2;
    }
    out.flush();
    auto flags = collect_flags(app);
    flags.merge(collect_flags(*sub));
    write_manifest(g, sub->get_name(), flags, started);
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace tracesum::cli
