#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaugemode/mode_analysis.hpp"
#include "gaugemode/multidim.hpp"

namespace gaugemode {

enum class ExperimentKind { Validate, Spectrum, Modes, GapSweep, Rotation, Folding, Compare };
enum class OutputFormat { Csv, Json };
enum class VectorSelection { None, Dominant, All };

/// Subcommand / config spelling: validate, spectrum, modes, sweep, rotate, fold, compare.
std::string_view to_string(ExperimentKind kind);
std::string_view to_string(OutputFormat format);
std::string_view to_string(VectorSelection sel);
std::string_view to_string(Criterion c);

ExperimentKind parse_experiment_kind(std::string_view name);
OutputFormat parse_output_format(std::string_view name);
Criterion parse_criterion(std::string_view name);

/// "a+bi", "2i", "-i", "3-4j", "1.5". Whitespace is ignored.
cd parse_complex(std::string_view text);

struct Tolerances {
  double solver = 1e-9;  // max relative eigen-residual
  double tie = 1e-8;     // dominant-cluster tie, relative to ||H||
  double dedup = 1e-8;   // folded-energy dedup, relative to ||H||
  double match = 1e-9;   // analytic vs numeric and rotation checks, relative to ||H||

  void validate() const;
  bool operator==(const Tolerances&) const = default;
};

struct SweepRange {
  int from = 0;
  int to = 0;
  int step = 1;

  std::vector<int> sizes() const;
  bool operator==(const SweepRange&) const = default;
};

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // file stem; empty means the config file's stem
  VectorSelection vectors = VectorSelection::Dominant;

  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  std::optional<ExperimentKind> kind;  // absent: the subcommand decides
  std::string title;
  Criterion criterion = Criterion::MaxIm;
  DimensionSpec<double> dims;
  std::optional<SweepRange> sweep;
  std::optional<double> angle;  // radians
  Tolerances tolerances;
  OutputSpec output;

  bool single_axis() const { return dims.rank() == 1; }
  const GraphSpec<double>& axis() const { return dims.axes.front(); }

  /// Throws ConfigError when `kind` lacks a required block or conflicts with a declared experiment.
  void require(ExperimentKind kind) const;

  SolverOptions<double> solver_options() const;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates a YAML document. JSON is accepted too, so an embedded config reparses.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical YAML with every field explicit and complex numbers as {re, im}.
std::string to_yaml(const ExperimentConfig& cfg);

}  // namespace gaugemode
