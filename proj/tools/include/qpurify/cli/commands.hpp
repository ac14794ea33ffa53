#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qpurify/core.hpp"

namespace qpurify::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

enum class Command { stats, verify, simulate, figure1, clone };
enum class Format { csv, tsv };

/// Bad flags or out-of-range values; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::stats;
  std::optional<int> n;
  int n_min = 2;
  std::optional<std::int64_t> m;  // empty with m_infinite set means M = infinity
  bool m_infinite = false;
  std::vector<double> lambdas;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::string out_path;
  std::string plot_path;
  Format format = Format::csv;
  Direction direction{1.0 / 3, 2.0 / 3, 2.0 / 3};
  bool dense = false;
  unsigned workers = 0;
  int qubit_cap = kDefaultQubitCap;

  char separator() const { return format == Format::csv ? ',' : '\t'; }
};

/// "0.2,0.4" -> {0.2, 0.4}; throws UsageError on malformed entries.
std::vector<double> parse_lambda_list(const std::string& text);

/// SCHUR_CAP value (null means unset) -> qubit cap.
int parse_qubit_cap(const char* value);

int cmd_stats(const RunConfig& config, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_figure1(const RunConfig& config, std::ostream& out);
int cmd_clone(const RunConfig& config, std::ostream& out);

/// Full front end: parses `args` (without the program name), reads
/// SCHUR_CAP from the environment and dispatches. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpurify::cli
