// Run configuration, orchestration and file output for the lagns tool.
//
// Config is a JSON object; every key is optional and unknown keys are
// rejected. See config_reference() for the full list with defaults.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lagns/core.hpp"
#include "lagns/diagnostics.hpp"
#include "lagns/integrate.hpp"
#include "lagns/verification.hpp"

namespace lagns {

/// ConfigError that remembers which key it is about ("n", "gas.mu", ...).
class ParseError : public ConfigError {
 public:
  ParseError(std::string key, const std::string& message)
      : ConfigError("config key \"" + key + "\": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct MmsConfig {
  bool steady = false;  // "solution": "standard" | "steady"
  std::vector<long long> n_list = {64, 128, 256, 512};
  double t_end = 0.1;
  double half_length = 8.0;
  double order_threshold = 1.9;
};

/// Environment variable naming the default output root.
inline constexpr const char* kOutputRootEnv = "LAGNS_OUTPUT_ROOT";

struct RunConfig {
  ProblemSetup setup;
  double half_length = 10.0;
  long long n_cells = 256;
  GasParams gas;
  StepControl control;
  InitialDataSpec initial;
  double t_end = 1.0;
  double audit_every = 0.1;     // 0: every step
  double snapshot_every = 0.0;  // 0: only initial and final snapshots
  std::filesystem::path output_dir;
  std::vector<double> excess_thresholds = kDefaultExcessThresholds;
  double truncation_threshold = 1e-2;
  MmsConfig mms;
};

/// Parses and validates a JSON document. `overrides` are "dotted.key=value"
/// assignments applied before validation; the value is read as JSON when it
/// parses, otherwise as a string.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Human-readable list of config keys and defaults (for --help).
std::string config_reference();

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitIntegrationFailure = 2,
  kExitTruncationBreach = 3,
  kExitMmsBelowThreshold = 4,
};

struct TruncationAudit {
  double max_deviation = 0.0;
  double t_at_max = 0.0;
  bool breached = false;
};

/// Largest |v-1|, |u|, |theta-1| over the outermost 5% of cells (at least one)
/// at each far-field edge.
double far_field_deviation(const FluidState& state, const ProblemSetup& setup);

struct RunOutcome {
  int exit_code = kExitOk;
  std::string status;  // "ok", "integration_failure", "truncation_breach"
  std::vector<AuditRecord> records;
  FluidState final_state;
  TruncationAudit truncation;
};

/// Runs one simulation and writes audit.csv, snap_<t>.csv, summary.json (and
/// failure.json on integration failure) into config.output_dir.
RunOutcome run(const RunConfig& config, std::ostream& log);

/// Convergence study for config.setup; writes mms_report.json.
struct MmsOutcome {
  int exit_code = kExitOk;
  ConvergenceReport report;
};
MmsOutcome run_mms(const RunConfig& config, std::ostream& log);

/// Runs the base config once per value of `key`, concurrently, each into
/// <output_dir>/<key>_<value>. Returns the largest exit code.
int sweep(const std::string& config_text, const std::vector<std::string>& overrides,
          const std::string& key, const std::vector<std::string>& values, unsigned jobs,
          std::ostream& log);

/// Snapshot CSV: x_center,v,theta,x_node,u (cell columns empty on the last row).
void write_snapshot(const std::filesystem::path& file, const FluidState& state,
                    const MassGrid& grid);

}  // namespace lagns
