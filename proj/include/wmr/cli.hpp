#pragma once

// Subcommand implementations behind the wmr-sim executable. Every command
// returns a process exit code and never throws.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wmr/controllers.hpp"
#include "wmr/metrics.hpp"
#include "wmr/simulator.hpp"
#include "wmr/verification.hpp"

namespace wmr::cli {

inline constexpr const char* kToolName = "wmr-sim";
inline constexpr const char* kToolVersion = "0.1.0";

/// Stable exit codes.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,             // I/O or unexpected internal error
  kUsage = 2,               // bad command line
  kParseError = 3,          // missing file or malformed JSON
  kValidationError = 4,     // scenario / gains / sweep violate an invariant
  kFaultDominated = 5,      // more than kMaxFaultFraction of rows hit the flatness singularity
  kVerificationFailed = 6,  // a theorem check exceeded its tolerance
};

inline constexpr double kMaxFaultFraction = 0.01;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<control::EquivalentMode> mode;
  std::optional<control::Chattering> chattering;
};

/// Applies overrides; mode and chattering affect INH-SMC controllers only
/// (chattering applies to both controllers).
void apply(const Overrides& overrides, Scenario& scenario);

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::vector<std::string> arguments;  // recorded in the manifest
};

int cmd_validate(const std::filesystem::path& scenario, const Overrides& overrides, Context& ctx);
int cmd_run(const std::filesystem::path& scenario, const std::filesystem::path& out_dir, const Overrides& overrides,
            Context& ctx);
int cmd_compare(const std::filesystem::path& scenario, const std::filesystem::path& out_dir,
                const Overrides& overrides, Context& ctx);
int cmd_verify(const std::filesystem::path& out_dir, const verify::VerificationOptions& options, Context& ctx);
int cmd_sweep(const std::filesystem::path& sweep_spec, const std::filesystem::path& out_dir,
              const Overrides& overrides, Context& ctx);

// Sweep internals, exposed for testing.

struct SweepPoint {
  double mu = 0.0;
  double beta = 0.0;
  double upsilon1 = 0.0;
  double upsilon2 = 0.0;
};

struct SweepSpec {
  std::filesystem::path scenario;
  enum class Strategy { grid, random } strategy = Strategy::grid;
  // Grid: candidate values. Random: {min, max}. Empty vector = keep scenario value.
  std::vector<double> mu, beta, upsilon1, upsilon2;
  std::size_t samples = 16;
  std::uint64_t seed = 1;
  double weight_iae = 1.0;
  double weight_p_avg = 1.0;
};

/// Throws ParseError / ScenarioInvalid.
SweepSpec load_sweep(const std::filesystem::path& path);

struct SweepResult {
  SweepPoint point;
  metrics::MetricsReport report;
  double effort = 0.0;  // metrics::virtual_effort
  double objective = 0.0;
};

/// Expands the spec into candidate points using `base` for unswept values.
/// Every point is validated against the gain invariants.
std::vector<SweepPoint> expand(const SweepSpec& spec, const control::AxisGains& base);

/// Runs all points (in parallel) and returns them ranked by objective.
std::vector<SweepResult> run_sweep(const Scenario& scenario, const SweepSpec& spec);

/// Per swept parameter: mean P_avg, virtual effort and IAE at each value, plus
/// whether P_avg and effort are nondecreasing in the parameter.
nlohmann::json sweep_trends(const std::vector<SweepResult>& results);

}  // namespace wmr::cli
