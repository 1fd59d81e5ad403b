#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "gaugemode/config.hpp"
#include "gaugemode/emit.hpp"

namespace gaugemode {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Validate: return "validate";
    case ExperimentKind::Spectrum: return "spectrum";
    case ExperimentKind::Modes: return "modes";
    case ExperimentKind::GapSweep: return "sweep";
    case ExperimentKind::Rotation: return "rotate";
    case ExperimentKind::Folding: return "fold";
    case ExperimentKind::Compare: return "compare";
  }
  return "?";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::Csv ? "csv" : "json"; }

std::string_view to_string(VectorSelection sel) {
  switch (sel) {
    case VectorSelection::None: return "none";
    case VectorSelection::Dominant: return "dominant";
    case VectorSelection::All: return "all";
  }
  return "?";
}

std::string_view to_string(Criterion c) { return c == Criterion::MaxIm ? "max_im" : "max_abs"; }

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where.empty() ? what : where + ": " + what);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

void check_keys(const YAML::Node& map, const std::string& where, std::initializer_list<const char*> allowed) {
  std::vector<std::string> unknown;
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) unknown.push_back(key);
  }
  if (!unknown.empty()) fail(where, "unknown keys: " + join(unknown));
}

void require_map(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) fail(where, "expected a mapping");
}

std::string child(const std::string& where, const char* key) {
  return where.empty() ? std::string(key) : where + "." + key;
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& where, const char* expected) {
  if (!n.IsScalar()) fail(where, std::string("expected ") + expected);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, std::string("expected ") + expected + ", got '" + n.Scalar() + "'");
  }
}

int get_int(const YAML::Node& n, const std::string& where) { return scalar<int>(n, where, "an integer"); }
bool get_bool(const YAML::Node& n, const std::string& where) { return scalar<bool>(n, where, "true or false"); }
std::string get_string(const YAML::Node& n, const std::string& where) {
  return scalar<std::string>(n, where, "a string");
}

double get_double(const YAML::Node& n, const std::string& where) {
  const double v = scalar<double>(n, where, "a number");
  if (!std::isfinite(v)) fail(where, "expected a finite number");
  return v;
}

cd get_complex(const YAML::Node& n, const std::string& where) {
  if (n.IsScalar()) {
    try {
      return parse_complex(n.Scalar());
    } catch (const ConfigError& e) {
      fail(where, e.what());
    }
  }
  if (!n.IsMap()) fail(where, "expected a complex number");
  if (n["abs"]) {
    check_keys(n, where, {"abs", "arg", "arg_deg"});
    if (bool(n["arg"]) == bool(n["arg_deg"])) fail(where, "polar form needs exactly one of arg, arg_deg");
    const double mag = get_double(n["abs"], child(where, "abs"));
    const double arg = n["arg"] ? get_double(n["arg"], child(where, "arg"))
                                : get_double(n["arg_deg"], child(where, "arg_deg")) * pi_v<double> / 180;
    return std::polar(mag, arg);
  }
  check_keys(n, where, {"re", "im"});
  const double re = n["re"] ? get_double(n["re"], child(where, "re")) : 0.0;
  const double im = n["im"] ? get_double(n["im"], child(where, "im")) : 0.0;
  return {re, im};
}

Pattern parse_pattern(const std::string& name, const std::string& where) {
  const std::string s = lower(name);
  if (s == "fcg") return Pattern::FCG;
  if (s == "hcs") return Pattern::HCS;
  if (s == "custom") return Pattern::Custom;
  fail(where, "unknown pattern '" + name + "' (expected fcg, hcs or custom)");
}

constexpr std::initializer_list<const char*> kAxisKeys = {
    "sites", "pattern", "connectivity", "t_forward", "t_backward", "gauge", "allow_invalid"};

GraphSpec<double> parse_axis(const YAML::Node& n, const std::string& where) {
  GraphSpec<double> g;
  if (n["connectivity"]) {
    const YAML::Node c = n["connectivity"];
    if (!c.IsSequence()) fail(child(where, "connectivity"), "expected a list of 0/1 flags");
    std::vector<std::uint8_t> flags;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int f = get_int(c[i], child(where, "connectivity") + "[" + std::to_string(i) + "]");
      if (f != 0 && f != 1) fail(child(where, "connectivity"), "entries must be 0 or 1");
      flags.push_back(static_cast<std::uint8_t>(f));
    }
    g.custom = Connectivity(std::move(flags));
    g.pattern = Pattern::Custom;
    g.sites = g.custom.sites();
  }
  if (n["pattern"]) {
    const Pattern p = parse_pattern(get_string(n["pattern"], child(where, "pattern")), child(where, "pattern"));
    if (n["connectivity"] && p != Pattern::Custom) {
      fail(where, "connectivity is only allowed with pattern custom");
    }
    g.pattern = p;
  }
  if (g.pattern == Pattern::Custom && !n["connectivity"]) fail(where, "pattern custom needs a connectivity list");
  if (n["sites"]) {
    g.sites = get_int(n["sites"], child(where, "sites"));
  } else if (!n["connectivity"]) {
    fail(where, "missing required key 'sites'");
  }
  if (!n["t_forward"]) fail(where, "missing required key 't_forward'");
  g.t_forward = get_complex(n["t_forward"], child(where, "t_forward"));
  if (n["t_backward"]) g.t_backward = get_complex(n["t_backward"], child(where, "t_backward"));
  if (n["gauge"]) g.gauge = get_int(n["gauge"], child(where, "gauge"));
  if (n["allow_invalid"]) g.allow_invalid = get_bool(n["allow_invalid"], child(where, "allow_invalid"));
  try {
    g.validate();
  } catch (const ConfigError& e) {
    fail(where, e.what());
  }
  return g;
}

ExperimentConfig parse_root(const YAML::Node& root) {
  if (!root || root.IsNull()) throw ConfigError("empty config");
  require_map(root, "");

  std::vector<const char*> allowed = {"experiment", "title", "criterion", "axes", "sweep",
                                      "rotation", "tolerances", "output"};
  std::vector<std::string> unknown;
  bool flat_axis = false;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    bool axis_key = false;
    for (const char* a : kAxisKeys) axis_key = axis_key || key == a;
    flat_axis = flat_axis || axis_key;
    if (!known && !axis_key) unknown.push_back(key);
  }
  if (!unknown.empty()) throw ConfigError("unknown keys: " + join(unknown));

  ExperimentConfig cfg;
  if (root["experiment"]) cfg.kind = parse_experiment_kind(get_string(root["experiment"], "experiment"));
  if (root["title"]) cfg.title = get_string(root["title"], "title");
  if (root["criterion"]) {
    try {
      cfg.criterion = parse_criterion(get_string(root["criterion"], "criterion"));
    } catch (const ConfigError& e) {
      fail("criterion", e.what());
    }
  }

  if (root["axes"]) {
    if (flat_axis) throw ConfigError("give either an axes list or top-level axis keys, not both");
    const YAML::Node axes = root["axes"];
    if (!axes.IsSequence() || axes.size() == 0) fail("axes", "expected a non-empty list of axis blocks");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const std::string where = "axes[" + std::to_string(i) + "]";
      require_map(axes[i], where);
      check_keys(axes[i], where, kAxisKeys);
      cfg.dims.axes.push_back(parse_axis(axes[i], where));
    }
  } else {
    if (!flat_axis) throw ConfigError("no axis given (expected 'sites' and 't_forward' or an 'axes' list)");
    cfg.dims.axes.push_back(parse_axis(root, ""));
  }
  try {
    cfg.dims.validate();
  } catch (const ConfigError& e) {
    fail("axes", e.what());
  }

  if (root["sweep"]) {
    const YAML::Node s = root["sweep"];
    require_map(s, "sweep");
    check_keys(s, "sweep", {"from", "to", "step"});
    if (!s["from"] || !s["to"]) fail("sweep", "needs 'from' and 'to'");
    SweepRange r;
    r.from = get_int(s["from"], "sweep.from");
    r.to = get_int(s["to"], "sweep.to");
    if (s["step"]) r.step = get_int(s["step"], "sweep.step");
    if (r.from < 2) fail("sweep.from", "must be at least 2");
    if (r.to < r.from) fail("sweep.to", "must not be below sweep.from");
    if (r.step < 1) fail("sweep.step", "must be positive");
    cfg.sweep = r;
  }

  if (root["rotation"]) {
    const YAML::Node r = root["rotation"];
    require_map(r, "rotation");
    check_keys(r, "rotation", {"angle", "angle_deg"});
    if (bool(r["angle"]) == bool(r["angle_deg"])) fail("rotation", "needs exactly one of angle, angle_deg");
    cfg.angle = r["angle"] ? get_double(r["angle"], "rotation.angle")
                           : get_double(r["angle_deg"], "rotation.angle_deg") * pi_v<double> / 180;
  }

  if (root["tolerances"]) {
    const YAML::Node t = root["tolerances"];
    require_map(t, "tolerances");
    check_keys(t, "tolerances", {"solver", "tie", "dedup", "match"});
    if (t["solver"]) cfg.tolerances.solver = get_double(t["solver"], "tolerances.solver");
    if (t["tie"]) cfg.tolerances.tie = get_double(t["tie"], "tolerances.tie");
    if (t["dedup"]) cfg.tolerances.dedup = get_double(t["dedup"], "tolerances.dedup");
    if (t["match"]) cfg.tolerances.match = get_double(t["match"], "tolerances.match");
  }
  cfg.tolerances.validate();

  if (root["output"]) {
    const YAML::Node o = root["output"];
    require_map(o, "output");
    check_keys(o, "output", {"format", "path", "vectors"});
    if (o["format"]) cfg.output.format = parse_output_format(get_string(o["format"], "output.format"));
    if (o["path"]) cfg.output.path = get_string(o["path"], "output.path");
    if (o["vectors"]) {
      const std::string v = lower(get_string(o["vectors"], "output.vectors"));
      if (v == "none") cfg.output.vectors = VectorSelection::None;
      else if (v == "dominant") cfg.output.vectors = VectorSelection::Dominant;
      else if (v == "all") cfg.output.vectors = VectorSelection::All;
      else fail("output.vectors", "expected none, dominant or all");
    }
  }

  if (cfg.kind) cfg.require(*cfg.kind);
  return cfg;
}

void emit_complex(YAML::Emitter& e, cd z) {
  e << YAML::Flow << YAML::BeginMap;
  e << YAML::Key << "re" << YAML::Value << format_double(z.real());
  e << YAML::Key << "im" << YAML::Value << format_double(z.imag());
  e << YAML::EndMap;
}

}  // namespace

ExperimentKind parse_experiment_kind(std::string_view name) {
  const std::string s = lower(name);
  for (auto k : {ExperimentKind::Validate, ExperimentKind::Spectrum, ExperimentKind::Modes,
                 ExperimentKind::GapSweep, ExperimentKind::Rotation, ExperimentKind::Folding,
                 ExperimentKind::Compare}) {
    if (s == to_string(k)) return k;
  }
  throw ConfigError("unknown experiment '" + std::string(name) +
                    "' (expected validate, spectrum, modes, sweep, rotate, fold or compare)");
}

OutputFormat parse_output_format(std::string_view name) {
  const std::string s = lower(name);
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

Criterion parse_criterion(std::string_view name) {
  const std::string s = lower(name);
  if (s == "max_im") return Criterion::MaxIm;
  if (s == "max_abs") return Criterion::MaxAbs;
  throw ConfigError("unknown criterion '" + std::string(name) + "' (expected max_im or max_abs)");
}

void Tolerances::validate() const {
  const std::pair<const char*, double> all[] = {{"solver", solver}, {"tie", tie}, {"dedup", dedup}, {"match", match}};
  for (const auto& [name, v] : all) {
    if (!(v > 0) || !std::isfinite(v)) {
      throw ConfigError(std::string("tolerances.") + name + " must be positive and finite");
    }
  }
}

std::vector<int> SweepRange::sizes() const {
  std::vector<int> out;
  for (int n = from; n <= to; n += step) out.push_back(n);
  return out;
}

void ExperimentConfig::require(ExperimentKind k) const {
  if (kind && k != ExperimentKind::Validate && *kind != k) {
    throw ConfigError("config declares experiment '" + std::string(to_string(*kind)) + "' but '" +
                      std::string(to_string(k)) + "' was requested");
  }
  const auto single = [&] {
    if (!single_axis()) {
      throw ConfigError(std::string(to_string(k)) + " works on a single axis, config has " +
                        std::to_string(dims.rank()));
    }
  };
  switch (k) {
    case ExperimentKind::GapSweep:
      single();
      if (!sweep) throw ConfigError("sweep experiment needs a 'sweep' block");
      for (int n : sweep->sizes()) {
        GraphSpec<double> g = axis();
        g.sites = n;
        try {
          g.validate();
        } catch (const ConfigError& e) {
          throw ConfigError("sweep: at sites = " + std::to_string(n) + ": " + e.what());
        }
      }
      break;
    case ExperimentKind::Rotation:
      single();
      if (!angle) throw ConfigError("rotate experiment needs a 'rotation' block");
      break;
    default:
      break;
  }
}

SolverOptions<double> ExperimentConfig::solver_options() const {
  SolverOptions<double> o;
  o.tolerance = tolerances.solver;
  return o;
}

ExperimentConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  try {
    return parse_root(root);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_yaml(const ExperimentConfig& cfg) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  if (cfg.kind) e << YAML::Key << "experiment" << YAML::Value << std::string(to_string(*cfg.kind));
  if (!cfg.title.empty()) e << YAML::Key << "title" << YAML::Value << YAML::DoubleQuoted << cfg.title;
  e << YAML::Key << "criterion" << YAML::Value << std::string(to_string(cfg.criterion));
  e << YAML::Key << "axes" << YAML::Value << YAML::BeginSeq;
  for (const auto& a : cfg.dims.axes) {
    e << YAML::BeginMap;
    e << YAML::Key << "sites" << YAML::Value << a.sites;
    e << YAML::Key << "pattern" << YAML::Value << std::string(to_string(a.pattern));
    if (a.pattern == Pattern::Custom) {
      e << YAML::Key << "connectivity" << YAML::Value << YAML::Flow << YAML::BeginSeq;
      for (auto f : a.custom.flags()) e << int(f);
      e << YAML::EndSeq;
    }
    e << YAML::Key << "t_forward" << YAML::Value;
    emit_complex(e, a.t_forward);
    e << YAML::Key << "t_backward" << YAML::Value;
    emit_complex(e, a.t_backward);
    e << YAML::Key << "gauge" << YAML::Value << a.gauge;
    e << YAML::Key << "allow_invalid" << YAML::Value << a.allow_invalid;
    e << YAML::EndMap;
  }
  e << YAML::EndSeq;
  if (cfg.sweep) {
    e << YAML::Key << "sweep" << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "from" << YAML::Value << cfg.sweep->from;
    e << YAML::Key << "to" << YAML::Value << cfg.sweep->to;
    e << YAML::Key << "step" << YAML::Value << cfg.sweep->step;
    e << YAML::EndMap;
  }
  if (cfg.angle) {
    e << YAML::Key << "rotation" << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "angle" << YAML::Value << format_double(*cfg.angle);
    e << YAML::EndMap;
  }
  e << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "solver" << YAML::Value << format_double(cfg.tolerances.solver);
  e << YAML::Key << "tie" << YAML::Value << format_double(cfg.tolerances.tie);
  e << YAML::Key << "dedup" << YAML::Value << format_double(cfg.tolerances.dedup);
  e << YAML::Key << "match" << YAML::Value << format_double(cfg.tolerances.match);
  e << YAML::EndMap;
  e << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "format" << YAML::Value << std::string(to_string(cfg.output.format));
  if (!cfg.output.path.empty()) e << YAML::Key << "path" << YAML::Value << YAML::DoubleQuoted << cfg.output.path;
  e << YAML::Key << "vectors" << YAML::Value << std::string(to_string(cfg.output.vectors));
  e << YAML::EndMap;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

}  // namespace gaugemode
