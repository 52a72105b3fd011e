#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace shiftlab::cli {

// One parsed invocation. Sentinels mark flags the user did not pass: 0 for
// --horizon/--window/--eps, -1 for --kmax/--samples, empty strings for the
// designations/lists. to_argv() emits the canonical textual form; parsing
// that form reproduces the config exactly.
struct RunConfig {
  std::string subcommand;
  std::string operator_designation;
  std::string vector_designation;
  std::string vector2_designation;
  std::string space = "l2";
  std::int64_t horizon = 0;
  std::int64_t window = 0;
  double tol_zero = 1e-3;
  double tol_inf = 1e3;
  double eps = 0.0;
  double big = 1e6;
  std::int64_t kmax = -1;
  std::string powers;  // comma-separated positive integers; empty = auto
  std::uint64_t seed = 12345;
  std::int64_t samples = -1;
  std::int64_t stride = 1;
  std::int64_t to = 64;
  std::string set_name;
  std::string output_path;
  std::string format = "csv";

  bool operator==(const RunConfig&) const = default;
  std::vector<std::string> to_argv() const;
};

// Parse only (no execution). Usage problems, including bare help requests,
// surface as ConfigError.
RunConfig parse_cli(const std::vector<std::string>& args);

// Parse and run one invocation; args excludes the program name. Data rows go
// to `out` (or the --output file), diagnostics and CSV-mode summaries to
// `err`. Returns 0 on success, 2 on usage errors, 3 on capacity/truncation.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace shiftlab::cli
