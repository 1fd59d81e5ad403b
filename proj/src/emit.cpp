#include <charconv>

#include <nlohmann/json.hpp>

#include "gaugemode/emit.hpp"

namespace gaugemode {

using Json = nlohmann::ordered_json;

namespace {

double tidy(double v) { return v == 0.0 ? 0.0 : v; }

Json complex_json(cd z) {
  Json j;
  j["re"] = tidy(z.real());
  j["im"] = tidy(z.imag());
  return j;
}

Json config_object(const ExperimentConfig& cfg) {
  Json j;
  if (cfg.kind) j["experiment"] = to_string(*cfg.kind);
  if (!cfg.title.empty()) j["title"] = cfg.title;
  j["criterion"] = to_string(cfg.criterion);
  Json axes = Json::array();
  for (const auto& a : cfg.dims.axes) {
    Json ax;
    ax["sites"] = a.sites;
    ax["pattern"] = to_string(a.pattern);
    if (a.pattern == Pattern::Custom) {
      Json flags = Json::array();
      for (auto f : a.custom.flags()) flags.push_back(int(f));
      ax["connectivity"] = flags;
    }
    ax["t_forward"] = complex_json(a.t_forward);
    ax["t_backward"] = complex_json(a.t_backward);
    ax["gauge"] = a.gauge;
    ax["allow_invalid"] = a.allow_invalid;
    axes.push_back(ax);
  }
  j["axes"] = axes;
  if (cfg.sweep) j["sweep"] = {{"from", cfg.sweep->from}, {"to", cfg.sweep->to}, {"step", cfg.sweep->step}};
  if (cfg.angle) j["rotation"] = {{"angle", *cfg.angle}};
  j["tolerances"] = {{"solver", cfg.tolerances.solver},
                     {"tie", cfg.tolerances.tie},
                     {"dedup", cfg.tolerances.dedup},
                     {"match", cfg.tolerances.match}};
  Json out;
  out["format"] = to_string(cfg.output.format);
  if (!cfg.output.path.empty()) out["path"] = cfg.output.path;
  out["vectors"] = to_string(cfg.output.vectors);
  j["output"] = out;
  return j;
}

Json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  return tidy(std::get<double>(c));
}

Json table_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r;
    for (std::size_t c = 0; c < t.columns.size(); ++c) r[t.columns[c]] = cell_json(row[c]);
    rows.push_back(r);
  }
  return rows;
}

Json summary_json(const SummaryValue& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) return tidy(x);
        else return x;
      },
      v);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, tidy(v), std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (const auto* i = std::get_if<long long>(&row[c])) out += std::to_string(*i);
      else out += format_double(std::get<double>(row[c]));
    }
    out += '\n';
  }
  return out;
}

std::string config_json(const ExperimentConfig& cfg) { return config_object(cfg).dump(2) + "\n"; }

std::vector<OutputFile> render(const Document& doc, OutputFormat format) {
  std::vector<OutputFile> files;
  if (format == OutputFormat::Csv) {
    files.push_back({".csv", to_csv(doc.table)});
    for (const auto& x : doc.extras) files.push_back({"_" + x.name + ".csv", to_csv(x.table)});
    return files;
  }
  Json j;
  j["experiment"] = to_string(doc.kind);
  j["config"] = config_object(doc.config);
  Json summary = Json::object();
  for (const auto& [key, value] : doc.summary) summary[key] = summary_json(value);
  j["summary"] = summary;
  j[doc.table_name] = table_json(doc.table);
  if (!doc.extras.empty()) {
    Json vectors;
    for (const auto& x : doc.extras) vectors[x.name] = table_json(x.table);
    j["vectors"] = vectors;
  }
  files.push_back({".json", j.dump(2) + "\n"});
  return files;
}

Table spectrum_table(const Spectrum<double>& s, const std::vector<int>& labels,
                     const std::vector<int>& windings, const DominanceReport<double>& rep) {
  Table t;
  t.columns = {"label", "re_e", "im_e", "abs_e", "winding", "residual", "dominant"};
  for (std::size_t i = 0; i < s.size(); ++i) {
    const cd e = s.pairs[i].value;
    t.rows.push_back({Cell(static_cast<long long>(labels[i])), Cell(e.real()), Cell(e.imag()),
                      Cell(std::abs(e)), Cell(static_cast<long long>(windings[i])),
                      Cell(s.pairs[i].residual), Cell(rep.is_dominant(i) ? 1LL : 0LL)});
  }
  return t;
}

Table vector_table(const ComplexVector<double>& v) {
  Table t;
  t.columns = {"site", "re", "im", "abs", "phase"};
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    t.rows.push_back({Cell(static_cast<long long>(m + 1)), Cell(v(m).real()), Cell(v(m).imag()),
                      Cell(std::abs(v(m))), Cell(std::arg(v(m)))});
  }
  return t;
}

}  // namespace gaugemode
