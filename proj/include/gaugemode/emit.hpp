#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gaugemode/config.hpp"

namespace gaugemode {

using Cell = std::variant<long long, double>;

/// Column-ordered rows; CSV and JSON are two renderings of the same table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

using SummaryValue = std::variant<bool, long long, double, std::string, std::vector<long long>>;

struct NamedTable {
  std::string name;
  Table table;
};

/// Everything one experiment run produces, before formatting.
struct Document {
  ExperimentKind kind = ExperimentKind::Spectrum;
  ExperimentConfig config;
  std::vector<std::pair<std::string, SummaryValue>> summary;
  std::string table_name;  // key of the main table in JSON ("spectrum", "sweep", ...)
  Table table;
  std::vector<NamedTable> extras;  // per-mode vector blocks
  bool failed = false;             // a numerical check did not hold
  std::string headline;            // one-line summary for the terminal
};

struct OutputFile {
  std::string suffix;  // appended to the stem, extension included
  std::string bytes;
};

/// %.17g without the locale; -0 prints as 0.
std::string format_double(double v);

std::string to_csv(const Table& t);

/// One file per table for CSV (extras as <stem>_<name>.csv); a single file for JSON.
std::vector<OutputFile> render(const Document& doc, OutputFormat format);

/// JSON object of the config, keys in schema order.
std::string config_json(const ExperimentConfig& cfg);

/// The standard spectrum table with columns label,re_e,im_e,abs_e,winding,residual,dominant.
Table spectrum_table(const Spectrum<double>& s, const std::vector<int>& labels,
                     const std::vector<int>& windings, const DominanceReport<double>& rep);

/// site,re,im,abs,phase; sites are 1-based (flat x-major for several axes).
Table vector_table(const ComplexVector<double>& v);

}  // namespace gaugemode
