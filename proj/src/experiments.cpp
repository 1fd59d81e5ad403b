#include <cstdio>
#include <numeric>

#include "gaugemode/experiments.hpp"

namespace gaugemode {

namespace {

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::vector<long long> as_ll(const std::vector<int>& v) { return {v.begin(), v.end()}; }

std::string list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

std::vector<int> iota(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

std::vector<int> windings_of(const Spectrum<double>& s) {
  std::vector<int> w;
  for (const auto& p : s.pairs) w.push_back(p.label);
  return w;
}

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

Spectrum<double> numeric(const ExperimentConfig& cfg) {
  Spectrum<double> s = cfg.single_axis() ? numeric_spectrum(cfg.axis(), cfg.solver_options())
                                         : numeric_spectrum(cfg.dims, cfg.solver_options());
  sort_spectrum(s, Ordering::ByWinding);
  return s;
}

std::string shape(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& a : cfg.dims.axes) {
    out += (out.empty() ? "" : " x ") + std::string(to_string(a.pattern)) + " N=" + std::to_string(a.sites);
    if (a.gauge) out += " k=" + std::to_string(a.gauge);
  }
  return out;
}

void add_dominance(Document& doc, const DominanceReport<double>& rep, const std::vector<int>& ids,
                   const char* ids_key = "dominant_windings") {
  doc.summary.emplace_back("criterion", std::string(to_string(rep.criterion)));
  doc.summary.emplace_back("dominant_count", static_cast<long long>(rep.dominant.size()));
  doc.summary.emplace_back(ids_key, as_ll(ids));
  doc.summary.emplace_back("top", rep.top);
  doc.summary.emplace_back("runner_up", rep.runner_up);
  doc.summary.emplace_back("gap", rep.gap);
  doc.summary.emplace_back("cluster_spread", rep.cluster_spread);
}

std::vector<int> dominant_windings(const Spectrum<double>& s, const DominanceReport<double>& rep) {
  std::vector<int> w;
  for (auto pos : rep.dominant) w.push_back(s.pairs[pos].label);
  return w;
}

Document spectrum_doc(const ExperimentConfig& cfg, ExperimentKind kind) {
  Document doc;
  doc.kind = kind;
  doc.config = cfg;
  doc.table_name = "spectrum";
  const Spectrum<double> s = numeric(cfg);
  const auto rep = dominance_report(s, cfg.criterion, cfg.tolerances.tie);
  const auto dom_w = dominant_windings(s, rep);
  doc.table = spectrum_table(s, iota(s.size()), windings_of(s), rep);
  doc.summary.emplace_back("sites", static_cast<long long>(s.size()));
  doc.summary.emplace_back("scale", s.scale);
  doc.summary.emplace_back("max_residual", s.max_residual());
  add_dominance(doc, rep, dom_w);

  if (kind == ExperimentKind::Modes && cfg.output.vectors != VectorSelection::None) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (cfg.output.vectors == VectorSelection::Dominant && !rep.is_dominant(i)) continue;
      doc.extras.push_back({"mode" + std::to_string(i), vector_table(s.pairs[i].vector)});
    }
    if (cfg.single_axis()) {
      doc.summary.emplace_back("decay_ratio", std::abs(cfg.axis().decay_root()));
      double dev = 0;
      for (auto pos : rep.dominant) dev = std::max(dev, amplitude_profile<double>(s.pairs[pos].vector).deviation);
      doc.summary.emplace_back("dominant_profile_deviation", dev);
    }
  }
  doc.headline = std::string(to_string(kind)) + " " + shape(cfg) + ": " + std::to_string(s.size()) +
                 " eigenvalues, " + std::to_string(rep.dominant.size()) + " dominant (winding " +
                 list(dom_w) + "), gap " + num(rep.gap) + ", max residual " + num(s.max_residual(), 3);
  if (kind == ExperimentKind::Modes) doc.headline += ", " + std::to_string(doc.extras.size()) + " vectors";
  return doc;
}

Document sweep_doc(const ExperimentConfig& cfg) {
  Document doc;
  doc.kind = ExperimentKind::GapSweep;
  doc.config = cfg;
  doc.table_name = "sweep";
  const auto sizes = cfg.sweep->sizes();
  const auto table = gap_sweep(cfg.axis(), sizes, cfg.criterion, cfg.tolerances.tie, cfg.solver_options());
  doc.table.columns = {"sites", "gap", "top", "runner_up"};
  bool monotone = true;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& p = table[i];
    doc.table.rows.push_back({Cell(static_cast<long long>(p.sites)), Cell(p.gap), Cell(p.top), Cell(p.runner_up)});
    if (i > 0 && !(p.gap > table[i - 1].gap)) monotone = false;
  }
  doc.summary.emplace_back("criterion", std::string(to_string(cfg.criterion)));
  doc.summary.emplace_back("points", static_cast<long long>(table.size()));
  doc.summary.emplace_back("first_gap", table.front().gap);
  doc.summary.emplace_back("last_gap", table.back().gap);
  doc.summary.emplace_back("strictly_increasing", monotone);
  doc.headline = "sweep " + std::string(to_string(cfg.axis().pattern)) + " N=" + std::to_string(sizes.front()) +
                 ".." + std::to_string(sizes.back()) + ": " + std::to_string(table.size()) + " points, gap " +
                 num(table.front().gap) + " -> " + num(table.back().gap) +
                 (monotone ? ", strictly increasing" : ", not monotone");
  return doc;
}

Document rotation_doc(const ExperimentConfig& cfg) {
  Document doc;
  doc.kind = ExperimentKind::Rotation;
  doc.config = cfg;
  doc.table_name = "spectrum";
  const double angle = *cfg.angle;
  auto rep = rotation_check(cfg.axis(), angle, cfg.criterion, cfg.tolerances.tie, cfg.solver_options());
  Spectrum<double> rotated = rep.rotated;
  sort_spectrum(rotated, Ordering::ByWinding);
  // dominance on the rotated spectrum is judged in the unrotated frame
  Spectrum<double> unturned = rotated;
  for (auto& p : unturned.pairs) p.value /= std::polar(1.0, angle);
  const auto dom = dominance_report(unturned, cfg.criterion, cfg.tolerances.tie);
  doc.table = spectrum_table(rotated, iota(rotated.size()), windings_of(rotated), dom);

  const double tol = cfg.tolerances.match * rotated.scale;
  const bool within = rep.max_deviation <= tol;
  doc.summary.emplace_back("angle", angle);
  doc.summary.emplace_back("max_deviation", rep.max_deviation);
  doc.summary.emplace_back("tolerance", tol);
  doc.summary.emplace_back("within_tolerance", within);
  doc.summary.emplace_back("dominance_preserved", rep.dominance_preserved);
  doc.summary.emplace_back("original_dominant", as_ll(rep.original_dominant));
  doc.summary.emplace_back("rotated_dominant", as_ll(rep.rotated_dominant));
  add_dominance(doc, dom, dominant_windings(rotated, dom));
  doc.failed = !within || !rep.dominance_preserved;
  doc.headline = "rotate " + shape(cfg) + " by " + num(angle) + " rad: max deviation " + num(rep.max_deviation, 3) +
                 " (tolerance " + num(tol, 3) + "), dominance " +
                 (rep.dominance_preserved ? "preserved" : "changed") + " (winding " + list(rep.rotated_dominant) + ")";
  return doc;
}

std::string axis_column(std::size_t a) {
  static const char* names[] = {"w_x", "w_y", "w_z"};
  return a < 3 ? names[a] : "w_" + std::to_string(a);
}

Document folding_doc(const ExperimentConfig& cfg) {
  Document doc;
  doc.kind = ExperimentKind::Folding;
  doc.config = cfg;
  doc.table_name = "folding";
  const auto rep = folded_spectrum(cfg.dims, cfg.tolerances.dedup);
  const auto s = folded_as_spectrum(cfg.dims, rep);
  const auto dom = dominance_report(s, cfg.criterion, cfg.tolerances.tie);

  doc.table.columns = {"label"};
  for (std::size_t a = 0; a < cfg.dims.rank(); ++a) doc.table.columns.push_back(axis_column(a));
  for (const char* c : {"re_e", "im_e", "abs_e", "class", "multiplicity", "dominant"}) doc.table.columns.push_back(c);
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    const auto& e = rep.entries[i];
    std::vector<Cell> row{Cell(static_cast<long long>(i))};
    for (int w : e.labels) row.emplace_back(static_cast<long long>(w));
    row.emplace_back(e.energy.real());
    row.emplace_back(e.energy.imag());
    row.emplace_back(std::abs(e.energy));
    row.emplace_back(static_cast<long long>(e.value_class));
    row.emplace_back(static_cast<long long>(rep.multiplicity[e.value_class]));
    row.emplace_back(dom.is_dominant(i) ? 1LL : 0LL);
    doc.table.rows.push_back(std::move(row));
  }
  const auto labels = sorted(dom.dominant_labels);
  doc.summary.emplace_back("extents", as_ll(rep.extents));
  doc.summary.emplace_back("pair_count", static_cast<long long>(rep.entries.size()));
  doc.summary.emplace_back("distinct_count", static_cast<long long>(rep.distinct_count));
  doc.summary.emplace_back("lcm", static_cast<long long>(rep.lcm));
  doc.summary.emplace_back("distinct_equals_lcm", static_cast<long>(rep.distinct_count) == rep.lcm);
  doc.summary.emplace_back("scale", rep.scale);
  add_dominance(doc, dom, labels, "dominant_labels");
  doc.headline = "fold " + shape(cfg) + ": " + std::to_string(rep.entries.size()) + " pair energies, " +
                 std::to_string(rep.distinct_count) + " distinct (lcm " + std::to_string(rep.lcm) + "), " +
                 std::to_string(dom.dominant.size()) + " dominant (labels " + list(labels) + ")";
  return doc;
}

Document compare_doc(const ExperimentConfig& cfg) {
  Document doc;
  doc.kind = ExperimentKind::Compare;
  doc.config = cfg;
  doc.table_name = "compare";

  const ComplexMatrix<double> h = cfg.single_axis() ? assemble_hamiltonian(cfg.axis()) : assemble_hamiltonian(cfg.dims);
  const double scale = h.norm();
  Spectrum<double> analytic;
  if (cfg.single_axis()) {
    analytic = full_analytic_spectrum(cfg.axis());
  } else {
    analytic = folded_as_spectrum(cfg.dims, folded_spectrum(cfg.dims, cfg.tolerances.dedup), true);
    for (auto& p : analytic.pairs) p.residual = residual(h, p);
  }
  Spectrum<double> num_s = eigendecompose(h, cfg.solver_options());
  const auto match = match_spectra(analytic, num_s);

  doc.table.columns = {"label", "re_analytic", "im_analytic", "re_numeric", "im_numeric", "distance",
                       "analytic_residual", "numeric_residual"};
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const auto& a = analytic.pairs[i];
    const auto& b = num_s.pairs[match.assignment[i]];
    doc.table.rows.push_back({Cell(static_cast<long long>(a.label)), Cell(a.value.real()), Cell(a.value.imag()),
                              Cell(b.value.real()), Cell(b.value.imag()), Cell(std::abs(a.value - b.value)),
                              Cell(a.residual), Cell(b.residual)});
  }
  const double tol = cfg.tolerances.match * scale;
  const bool pass = match.max_distance <= tol && analytic.max_residual() <= cfg.tolerances.match;
  doc.summary.emplace_back("sites", static_cast<long long>(analytic.size()));
  doc.summary.emplace_back("scale", scale);
  doc.summary.emplace_back("max_distance", match.max_distance);
  doc.summary.emplace_back("mean_distance", match.mean_distance);
  doc.summary.emplace_back("lower_bound", match.lower_bound);
  doc.summary.emplace_back("exact_matching", match.exact);
  doc.summary.emplace_back("tolerance", tol);
  doc.summary.emplace_back("max_analytic_residual", analytic.max_residual());
  doc.summary.emplace_back("max_numeric_residual", num_s.max_residual());
  doc.summary.emplace_back("pass", pass);
  doc.failed = !pass;
  doc.headline = "compare " + shape(cfg) + ": max matched distance " + num(match.max_distance, 3) + " (tolerance " +
                 num(tol, 3) + "), analytic residual " + num(analytic.max_residual(), 3) + (pass ? ", ok" : ", FAILED");
  return doc;
}

Document validate_doc(const ExperimentConfig& cfg) {
  Document doc;
  doc.kind = ExperimentKind::Validate;
  doc.config = cfg;
  doc.summary.emplace_back("axes", static_cast<long long>(cfg.dims.rank()));
  doc.summary.emplace_back("total_sites", static_cast<long long>(cfg.dims.total_sites()));
  bool pure = true;
  for (const auto& a : cfg.dims.axes) pure = pure && validate_pure_decay(a.connectivity()).valid;
  doc.summary.emplace_back("pure_decay", pure);
  if (cfg.kind) {
    cfg.require(*cfg.kind);
    doc.summary.emplace_back("experiment", std::string(to_string(*cfg.kind)));
  }
  doc.headline = "valid: " + shape(cfg) + (pure ? "" : " (pure-decay rule overridden)") +
                 (cfg.kind ? ", experiment " + std::string(to_string(*cfg.kind)) : "");
  return doc;
}

}  // namespace

Document run_experiment(const ExperimentConfig& cfg, ExperimentKind kind) {
  cfg.require(kind);
  switch (kind) {
    case ExperimentKind::Validate: return validate_doc(cfg);
    case ExperimentKind::Spectrum:
    case ExperimentKind::Modes: return spectrum_doc(cfg, kind);
    case ExperimentKind::GapSweep: return sweep_doc(cfg);
    case ExperimentKind::Rotation: return rotation_doc(cfg);
    case ExperimentKind::Folding: return folding_doc(cfg);
    case ExperimentKind::Compare: return compare_doc(cfg);
  }
  throw UsageError("unknown experiment kind");
}

}  // namespace gaugemode
