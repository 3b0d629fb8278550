#pragma once

#include <string>
#include <vector>

namespace tracesum::cli {

/// Runs one subcommand. Returns 0 on success, 2 on a failed verification, 1 on usage or input errors.
int run(const std::vector<std::string>& args);

/// Parses "q^a", "q^(a/b)" or a plain number into a length for modulus q.
double parse_length(const std::string& rule, int64_t q);

}  // namespace tracesum::cli
