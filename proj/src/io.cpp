#include "tracesum/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>

#include "tracesum/errors.hpp"

namespace tracesum {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  return fmt::format("{:.17g}", v);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error(fmt::format("CSV row has {} cells, header has {}", cells.size(), columns_));
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void write_csv(std::ostream& out, const PeriodicFunction& K) {
  CsvWriter csv(out, {"residue", "re", "im"});
  for (int64_t x = 0; x < K.modulus(); ++x)
    csv.row({std::to_string(x), format_number(K(x).real()), format_number(K(x).imag())});
}

std::string to_json(const PeriodicFunction& K) {
  nlohmann::ordered_json j;
  j["modulus"] = K.modulus();
  auto re = nlohmann::json::array(), im = nlohmann::json::array();
  for (const auto& v : K.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

PeriodicFunction periodic_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int64_t q = j.at("modulus").get<int64_t>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (re.size() != im.size()) throw InputError("re/im length mismatch");
    std::vector<cplx> v(re.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = {re[i], im[i]};
    return PeriodicFunction(q, std::move(v));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("bad periodic-function JSON: {}", e.what()));
  }
}

}  // namespace tracesum
