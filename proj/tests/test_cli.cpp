#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using tracesum::cli::run;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fs::path("tracesum_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("hecke-table writes rows and a manifest") {
  TempDir dir;
  const auto out = dir.file("hecke.csv");
  REQUIRE(run({"hecke-table", "--limit", "10", "--out", out}) == 0);
  const auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == "n,tau,lambda,lambda_1n");
  CHECK(rows[1].starts_with("1,1,1,1"));
  CHECK(rows[2].starts_with("2,-24,"));
  const auto manifest = nlohmann::json::parse(slurp(out + ".manifest.json"));
  CHECK(manifest["command"] == "hecke-table");
  CHECK(manifest["flags"]["--limit"] == "10");
  CHECK(manifest["seed"] == 0);
  CHECK(manifest.contains("version"));
  CHECK(manifest.contains("started"));
  CHECK(manifest.contains("finished"));
}

TEST_CASE("bilinear-check is deterministic per seed") {
  TempDir dir;
  const auto a = dir.file("a.csv"), b = dir.file("b.csv"), c = dir.file("c.csv");
  REQUIRE(run({"bilinear-check", "--q", "101", "--trials", "50", "--seed", "7", "--out", a}) == 0);
  REQUIRE(run({"--seed", "7", "--out", b, "bilinear-check", "--q", "101", "--trials", "50"}) == 0);
  REQUIRE(run({"bilinear-check", "--q", "101", "--trials", "50", "--seed", "8", "--out", c}) == 0);
  const auto rows = lines(slurp(a));
  CHECK(rows.size() == 51);
  for (size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i].substr(rows[i].rfind(',') + 1)) <= 1 + 1e-8);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) != slurp(c));
  const auto m = nlohmann::json::parse(slurp(a + ".manifest.json"));
  CHECK(m["seed"] == 7);
  CHECK(m["flags"]["--trials"] == "50");
}

TEST_CASE("lemma-check passes on the standard grid") {
  TempDir dir;
  const auto out = dir.file("lemma.csv");
  REQUIRE(run({"lemma-check", "--r-max", "12", "--q", "17", "--out", out}) == 0);
  const auto rows = lines(slurp(out));
  int checked = 0, passed = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].starts_with("1,") || rows[i].starts_with("2,"))) continue;
    ++checked;
    passed += rows[i].ends_with(",1");
  }
  CHECK(checked > 0);
  CHECK(passed == checked);
}

TEST_CASE("other subcommands run") {
  TempDir dir;
  CHECK(run({"dft", "--trace", "legendre", "--q", "5", "--out", dir.file("dft.csv")}) == 0);
  CHECK(lines(slurp(dir.file("dft.csv"))).size() == 6);
  CHECK(run({"poisson-check", "--trace", "kl2", "--trace", "legendre", "--q", "11", "--X", "500", "--out", dir.file("p.csv")}) == 0);
  CHECK(lines(slurp(dir.file("p.csv"))).size() == 3);
  CHECK(run({"kl-stats", "--q-max", "60", "--out", dir.file("kl.csv")}) == 0);
  CHECK(run({"sum-scan", "--trace", "legendre", "--q-list", "31,37", "--x-rule", "q^(3/2)", "--out", dir.file("s.csv")}) == 0);
  const auto scan = lines(slurp(dir.file("s.csv")));
  REQUIRE(scan.size() == 3);
  CHECK(scan[0] == "q,X,Z,family,S_re,S_im,khat_inf,bound,ratio,trivial_ratio,regime,in_window");
  CHECK(run({"amplifier-check", "--q", "101", "--P", "5", "--L", "3", "--trace", "legendre", "--out", dir.file("amp.json")}) == 0);
  const auto amp = nlohmann::json::parse(slurp(dir.file("amp.json")));
  CHECK(amp["pass"] == true);
  CHECK(amp["defect"].get<double>() <= 1e-6);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run({}) == 1);
  CHECK(run({"no-such-command"}) == 1);
  CHECK(run({"dft", "--q", "7", "--bogus", "1"}) == 1);
  CHECK(run({"dft", "--trace", "kl2"}) == 1);  // --q is required
  CHECK(run({"dft", "--trace", "kl2", "--q", "8", "--out", dir.file("x.csv")}) == 1);
  CHECK(run({"amplifier-check", "--q", "101", "--P", "2", "--L", "2", "--out", dir.file("e.json")}) == 1);
  CHECK(run({"poisson-check", "--q", "11", "--X", "500", "--tol=-1", "--out", dir.file("v.csv")}) == 2);
  CHECK(run({"amplifier-check", "--q", "101", "--P", "5", "--L", "3", "--tol=-1", "--out", dir.file("v.json")}) == 2);
  CHECK(fs::exists(dir.file("v.csv.manifest.json")));
}

TEST_CASE("length rules") {
  using tracesum::cli::parse_length;
  CHECK(parse_length("q^3/2", 101) == doctest::Approx(std::pow(101.0, 1.5)));
  CHECK(parse_length("q^(3/2)", 101) == doctest::Approx(std::pow(101.0, 1.5)));
  CHECK(parse_length("q^2", 11) == doctest::Approx(121.0));
  CHECK(parse_length("2000", 11) == 2000.0);
  CHECK_THROWS(parse_length("q^x", 11));
  CHECK_THROWS(parse_length("abc", 11));
}
