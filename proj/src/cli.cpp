#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "gaugemode/cli.hpp"
#include "gaugemode/experiments.hpp"

namespace gaugemode {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config_path;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::optional<std::string> out_dir;
  std::optional<std::string> criterion;
  std::optional<std::string> vectors;
  std::optional<double> solver_tol;
  std::optional<double> tie_tol;
  std::optional<double> dedup_tol;
  std::optional<double> match_tol;
};

void add_options(CLI::App& sub, Options& o) {
  sub.add_option("config", o.config_path, "Experiment config (YAML)")->required();
  sub.add_option("-f,--format", o.format, "Output format: csv or json (overrides the config)");
  sub.add_option("-o,--output", o.output, "Main output file; extra files share its stem");
  sub.add_option("-d,--out-dir", o.out_dir, "Output directory (default: $GAUGEMODE_OUT_DIR or .)");
  sub.add_option("--criterion", o.criterion, "Dominance criterion: max_im or max_abs");
  sub.add_option("--vectors", o.vectors, "Mode vectors to write: none, dominant or all");
  sub.add_option("--solver-tol", o.solver_tol, "Max relative eigen-residual (default 1e-9)");
  sub.add_option("--tie-tol", o.tie_tol, "Dominant tie tolerance relative to ||H|| (default 1e-8)");
  sub.add_option("--dedup-tol", o.dedup_tol, "Folded-energy dedup tolerance relative to ||H|| (default 1e-8)");
  sub.add_option("--match-tol", o.match_tol, "Check tolerance relative to ||H|| (default 1e-9)");
}

void apply_overrides(ExperimentConfig& cfg, const Options& o) {
  if (o.format) cfg.output.format = parse_output_format(*o.format);
  if (o.criterion) cfg.criterion = parse_criterion(*o.criterion);
  if (o.vectors) {
    if (*o.vectors == "none") cfg.output.vectors = VectorSelection::None;
    else if (*o.vectors == "dominant") cfg.output.vectors = VectorSelection::Dominant;
    else if (*o.vectors == "all") cfg.output.vectors = VectorSelection::All;
    else throw ConfigError("--vectors expects none, dominant or all");
  }
  if (o.solver_tol) cfg.tolerances.solver = *o.solver_tol;
  if (o.tie_tol) cfg.tolerances.tie = *o.tie_tol;
  if (o.dedup_tol) cfg.tolerances.dedup = *o.dedup_tol;
  if (o.match_tol) cfg.tolerances.match = *o.match_tol;
  cfg.tolerances.validate();
}

/// Output stem without extension.
fs::path output_stem(const ExperimentConfig& cfg, const Options& o) {
  if (o.output) {
    fs::path p(*o.output);
    return p.parent_path() / p.stem();
  }
  fs::path dir = ".";
  if (o.out_dir) {
    dir = *o.out_dir;
  } else if (const char* env = std::getenv("GAUGEMODE_OUT_DIR"); env && *env) {
    dir = env;
  }
  const std::string name = cfg.output.path.empty() ? fs::path(o.config_path).stem().string() : cfg.output.path;
  return dir / name;
}

std::vector<std::string> write_files(const fs::path& stem, const std::vector<OutputFile>& files) {
  std::vector<std::string> written;
  std::error_code ec;
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path(), ec);
  if (ec) throw ConfigError("cannot create directory '" + stem.parent_path().string() + "': " + ec.message());
  for (const auto& f : files) {
    const std::string path = stem.string() + f.suffix;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(f.bytes.data(), static_cast<std::streamsize>(f.bytes.size()));
    out.close();
    if (!out) throw ConfigError("cannot write '" + path + "'");
    written.push_back(path);
  }
  return written;
}

int execute(ExperimentKind kind, const Options& o, std::ostream& out) {
  ExperimentConfig cfg = load_config(o.config_path);
  apply_overrides(cfg, o);
  const Document doc = run_experiment(cfg, kind);

  std::string line = doc.headline;
  if (kind != ExperimentKind::Validate) {
    const auto written = write_files(output_stem(cfg, o), render(doc, cfg.output.format));
    line += " -> " + written.front();
    if (written.size() > 1) line += " (+" + std::to_string(written.size() - 1) + " files)";
  }
  out << line << '\n';
  return doc.failed ? kExitNumerical : kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gauged non-Hermitian ring spectra: build, solve, select and fold.", "gaugemode"};
  app.require_subcommand(1);
  Options opts;
  std::optional<ExperimentKind> chosen;
  const std::pair<ExperimentKind, const char*> commands[] = {
      {ExperimentKind::Validate, "Parse and validate a config"},
      {ExperimentKind::Spectrum, "Numeric spectrum with windings and dominance"},
      {ExperimentKind::Modes, "Spectrum plus eigenvector blocks"},
      {ExperimentKind::GapSweep, "Dominance gap over a range of site counts"},
      {ExperimentKind::Rotation, "Rotate both hoppings and check the spectrum turns with them"},
      {ExperimentKind::Folding, "All label-tuple energy sums of a multi-axis lattice"},
      {ExperimentKind::Compare, "Analytic against numeric spectrum"},
  };
  for (const auto& [kind, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(kind)), help);
    add_options(*sub, opts);
    sub->callback([&chosen, kind = kind] { chosen = kind; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  try {
    return execute(*chosen, opts, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace gaugemode
