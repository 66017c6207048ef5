#pragma once

// Experiment orchestration behind the command-line tool: configuration
// parsing, the six experiment kinds, and CSV / summary emission.

#include "stationary/gauge.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace stationary::runner {

enum class Kind { ScatterBatch, EquivalenceCheck, GaugeInvariance, SimplicityAudit, LightlikeBatch, ConservationSweep };

std::string_view to_string(Kind kind);
std::optional<Kind> parse_kind(std::string_view text);

struct ManifoldSource {
  std::string label;                   // gallery name or inline name
  std::optional<std::string> gallery;  // set for gallery references
  std::optional<double> parameter;
  Spec spec;
};

/// Shooting sweep over the gallery parameter of the experiment's manifold.
struct SweepConfig {
  std::vector<double> values;
  Vector x, y;
  bool expect_transition = true;  // first value simple, last value NotSimple
};

struct ExperimentConfig {
  std::string name;
  Kind kind = Kind::ScatterBatch;
  ManifoldSource manifold;
  std::vector<double> rho;
  double m = 1.0;
  int samples = 20;
  unsigned seed = 1;
  Tolerances tol{};
  double horizon = 10.0;
  bool allow_inadmissible = false;
  std::optional<GaugeParams> gauge;  // gauge-invariance; identity when absent
  bool control = true;               // gauge-invariance: interior lapse perturbation
  int shooting_checks = 2;           // equivalence-check: entries re-derived by shooting
  BoundarySampling sampling{64, 16, 0.0};
  std::optional<SweepConfig> sweep;
};

struct RunConfig {
  std::string source;
  std::vector<ExperimentConfig> experiments;
};

/// Parses the JSON configuration. Syntax errors report line and column,
/// semantic errors the offending field path; both as ConfigError.
RunConfig parse_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Problems that would stop `run`, without integrating anything.
std::vector<std::string> validate_config(const RunConfig& config);

struct RunOptions {
  std::filesystem::path output_dir;
  std::optional<unsigned> seed;  // overrides every experiment seed
  int jobs = 1;
  std::optional<double> abs_tol, rel_tol;
};

/// $STATIONARY_OUTPUT_DIR, else ./stationary-out.
std::filesystem::path default_output_dir();

struct Assertion {
  std::string name;
  double value = 0;
  std::string relation;  // "<=", ">=", ">"
  double threshold = 0;
  bool pass = false;
};

struct ExperimentResult {
  std::string name;
  Kind kind = Kind::ScatterBatch;
  std::string manifold;
  std::vector<Assertion> assertions;
  std::vector<std::string> files;  // relative to the output directory
  std::vector<std::string> notes;
  std::string error;  // module or configuration failure, with context

  bool pass() const;
};

struct RunSummary {
  std::vector<ExperimentResult> experiments;
  bool pass() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Runs every experiment, then writes summary.json and summary.txt.
RunSummary run(const RunConfig& config, const RunOptions& options);

std::string summary_text(const RunSummary& summary);
std::string gallery_listing();

}  // namespace stationary::runner
