#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hypqg::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitVerificationFailed = 2,
  kExitBudgetTruncated = 3,
  kExitConfigError = 4,
};

inline constexpr int kReportSchemaVersion = 1;

// One experiment. Values are kept as the strings the user gave; each kind
// parses the keys it understands and rejects the rest.
struct ExperimentConfig {
  std::string kind;
  std::map<std::string, std::string> values;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool timing = false;
  // Ball cache directory; defaults to $HYPQG_CACHE_DIR when unset.
  std::optional<std::filesystem::path> cache_dir;
};

struct SideOutput {
  std::filesystem::path path;
  std::string content;
};

struct Report {
  int exit_code = kExitOk;
  std::string json;  // the report document, newline-terminated
  std::vector<SideOutput> side_outputs;
};

// Experiment kinds understood by run_experiment, in help order.
const std::vector<std::string>& experiment_kinds();

// Never throws for bad input: failures become a flagged report with the
// matching exit code.
Report run_experiment(const ExperimentConfig& config);

// Writes side outputs; returns false (with a message on err) on I/O error.
bool write_side_outputs(const Report& report, std::ostream& err);

// Full command line: subcommands, --config, --threads, --seed, --timing,
// --out. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace hypqg::cli
