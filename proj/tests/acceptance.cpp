// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "gaugemode/cli.hpp"
#include "gaugemode/experiments.hpp"
#include "test_support.hpp"

using namespace gaugemode;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const DominanceReport<double> dominance(const Spectrum<double>& s, Criterion c) { return dominance_report(s, c); }

std::vector<int> sorted_labels(const DominanceReport<double>& rep) {
  auto l = rep.dominant_labels;
  std::sort(l.begin(), l.end());
  return l;
}

Verdict reciprocal_limit() {
  double worst = 0;
  for (int n = 3; n <= 12; ++n) {
    std::vector<cd> expected(static_cast<std::size_t>(n), -1.0);
    expected[0] = n - 1.0;
    const auto s = eigendecompose(assemble_hamiltonian(GraphSpec<>::fcg(n, 1.0, 1.0)));
    worst = std::max(worst, match_values(s.values(), expected).max_distance);
  }
  return {worst <= 1e-12, "FCG t=1, N=3..12: max deviation from {N-1, -1 x (N-1)} " + sci(worst) + " (tol 1e-12)"};
}

Verdict oracle_equivalence() {
  std::mt19937_64 rng(20240601);
  double worst_match = 0, worst_residual = 0;
  int patterns[3] = {0, 0, 0};
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = gaugemode::testing::random_spec(rng, 2, 24);
    ++patterns[static_cast<int>(spec.pattern)];
    const auto analytic = full_analytic_spectrum(spec);
    const auto numeric = eigendecompose(assemble_hamiltonian(spec));
    worst_match = std::max(worst_match, match_spectra(analytic, numeric).max_distance / analytic.scale);
    worst_residual = std::max(worst_residual, analytic.max_residual());
  }
  const bool pass = worst_match <= 1e-9 && worst_residual <= 1e-10;
  return {pass, "50 random specs (fcg " + std::to_string(patterns[0]) + ", hcs " + std::to_string(patterns[1]) +
                    ", custom " + std::to_string(patterns[2]) + "): matched distance " + sci(worst_match) +
                    "·||H|| (tol 1e-9), analytic residual " + sci(worst_residual) + "·||H|| (tol 1e-10)"};
}

Verdict closed_form_identity() {
  // relative to the magnitude of the summed terms, so large N and |t| are judged fairly
  double worst = 0;
  long checks = 0, fallbacks = 0;
  const cd ratios[] = {1.0, -1.0, 2.0, 0.5, -2.0, cd(0, 1.7), cd(-1.2, 0.7), cd(0.3, -0.25)};
  for (int n = 2; n <= 40; ++n) {
    for (cd t : ratios) {
      for (Pattern p : {Pattern::FCG, Pattern::HCS}) {
        if (p == Pattern::HCS && n % 2) continue;
        GraphSpec<> spec = p == Pattern::FCG ? GraphSpec<>::fcg(n, t * 0.8, 0.8) : GraphSpec<>::hcs(n, t * 0.8, 0.8);
        const cd r = spec.decay_root();
        for (int k = 0; k < n; ++k) {
          spec.gauge = k;
          double mag = 0;
          const Connectivity a = spec.connectivity();
          for (int q = 1; q < n; ++q) mag += a(q) * std::abs(spec.t_backward * t * std::pow(r, q));
          for (int w = 0; w < n; ++w) {
            const cd direct = analytic_eigenvalue(spec, w);
            const cd closed = p == Pattern::FCG ? closed_form_fcg(spec, w) : closed_form_hcs(spec, w);
            const cd y = r * detail::unit_root<double>(w - k, n);
            if (std::abs(p == Pattern::FCG ? 1.0 - y : 1.0 - y * y) < kClosedFormEpsilon) ++fallbacks;
            worst = std::max(worst, std::abs(closed - direct) / std::max(1.0, mag));
            ++checks;
          }
        }
      }
    }
  }
  return {worst <= 1e-12 && fallbacks > 0,
          std::to_string(checks) + " (N, t, k, w) cases up to N=40, " + std::to_string(fallbacks) +
              " on the fallback branch: max relative difference " + sci(worst) + " (tol 1e-12)"};
}

Verdict gauge_selection() {
  double worst_spectrum = 0, worst_profile = 0;
  int wrong_winding = 0, cases = 0;
  for (int n : {6, 12, 20}) {
    const auto base = GraphSpec<>::fcg(n, cd(0, 2), cd(0, 1));
    const auto s0 = numeric_spectrum(base);
    const auto rep0 = dominance(s0, Criterion::MaxIm);
    const VectorXcd v0 = s0.pairs[rep0.dominant.front()].vector.cwiseAbs();
    for (int k = 0; k < n; ++k) {
      const auto sk = numeric_spectrum(base.with_gauge(k));
      worst_spectrum = std::max(worst_spectrum, match_spectra(sk, s0).max_distance / s0.scale);
      const auto rep = dominance(sk, Criterion::MaxIm);
      const auto& dom = sk.pairs[rep.dominant.front()];
      if (rep.dominant.size() != 1 || dom.label != k) ++wrong_winding;
      worst_profile = std::max(worst_profile, (dom.vector.cwiseAbs() - v0).cwiseAbs().maxCoeff());
      ++cases;
    }
  }
  const bool pass = worst_spectrum <= 1e-10 && wrong_winding == 0 && worst_profile <= 1e-10;
  return {pass, "FCG 2i/i, N in {6,12,20}, all " + std::to_string(cases) + " gauges: spectrum shift " +
                    sci(worst_spectrum) + "·||H||, winding != k in " + std::to_string(wrong_winding) +
                    " cases, profile deviation " + sci(worst_profile) + " (tol 1e-10)"};
}

Verdict gap_growth() {
  std::vector<int> sizes;
  for (int n = 6; n <= 60; n += 2) sizes.push_back(n);
  const auto table = gap_sweep(GraphSpec<>::fcg(6, cd(0, 2), cd(0, 1)), sizes, Criterion::MaxIm);
  int drops = 0;
  for (std::size_t i = 1; i < table.size(); ++i) drops += !(table[i].gap > table[i - 1].gap);
  return {drops == 0, "FCG 2i/i, N=6..60 step 2: gap " + sci(table.front().gap) + " -> " + sci(table.back().gap) +
                          ", " + std::to_string(drops) + " non-increasing steps"};
}

Verdict double_mode() {
  int bad = 0, cases = 0;
  double worst_split = 0;
  for (int n = 6; n <= 24; n += 2) {
    for (int k = 0; k < n; ++k) {
      const auto s = numeric_spectrum(GraphSpec<>::hcs(n, 2.0, 1.0, k));
      const auto rep = dominance(s, Criterion::MaxAbs);
      std::vector<int> expected{k, (k + n / 2) % n};
      std::sort(expected.begin(), expected.end());
      if (sorted_labels(rep) != expected) {
        ++bad;
      } else {
        worst_split = std::max(worst_split, std::abs(std::abs(s.pairs[rep.dominant[0]].value) -
                                                     std::abs(s.pairs[rep.dominant[1]].value)));
      }
      ++cases;
    }
  }
  const auto fig3 = numeric_spectrum(GraphSpec<>::hcs(20, 2.0, 1.0));
  const auto rep = dominance(fig3, Criterion::MaxAbs);
  const bool fig_ok = rep.dominant.size() == 2 && rep.gap > 1e-3 * rep.top &&
                      std::abs(fig3.pairs[rep.dominant[0]].value - fig3.pairs[rep.dominant[1]].value) > rep.gap;
  return {bad == 0 && worst_split <= 1e-10 && fig_ok,
          "HCS t=2, even N=6..24, all k (" + std::to_string(cases) + " cases): label set != {k, k+N/2} in " +
              std::to_string(bad) + ", |E| split " + sci(worst_split) + " (tol 1e-10); N=20 caption config: " +
              std::to_string(rep.dominant.size()) + " dominant, |E| gap " + sci(rep.gap)};
}

Verdict negative_quadruplet() {
  const auto spec = GraphSpec<>::hcs(20, -2.0, 1.0);
  const auto an = full_analytic_spectrum(spec);
  auto e = [&](int w) { return an.pairs[static_cast<std::size_t>(w)].value; };
  const double d01 = std::abs(e(0) - std::conj(e(1)));
  const double d109 = std::abs(e(10) - std::conj(e(9)));
  const double d019 = std::abs(e(0) - std::conj(e(19)));

  const auto s = numeric_spectrum(spec);
  std::vector<double> im;
  for (const auto& p : s.pairs) im.push_back(p.value.imag());
  std::sort(im.begin(), im.end());
  // two strictly below and two strictly above a gap wider than the spread inside each pair
  const bool quadruplet = im[2] - im[1] > 100 * (im[1] - im[0] + 1e-12) &&
                          im[18] - im[17] > 100 * (im[19] - im[18] + 1e-12);

  const bool pass = d01 <= 1e-9 && d109 <= 1e-9 && quadruplet;
  return {pass, "HCS t=-2, N=20: |E(0)-conj E(1)| = " + sci(d01) + ", |E(10)-conj E(9)| = " + sci(d109) +
                    " (tol 1e-9); principal-branch partner of w=0 is w=19 at " + sci(d019) +
                    "; quadruplet " + (quadruplet ? "present" : "absent") + " (Im " + sci(im[0]) + ", " +
                    sci(im[1]) + " | " + sci(im[18]) + ", " + sci(im[19]) + ")"};
}

Verdict rotation() {
  const auto rep = rotation_check(GraphSpec<>::fcg(6, 2.0, 1.0), pi_v<double> / 3, Criterion::MaxAbs);
  return {rep.max_deviation <= 1e-12 && rep.dominance_preserved,
          "FCG N=6, t=2/1 times e^{i pi/3}: max deviation " + sci(rep.max_deviation) + " (tol 1e-12), dominance " +
              (rep.dominance_preserved ? "preserved" : "changed")};
}

Verdict real_axis() {
  std::mt19937_64 rng(7);
  double worst_pair = 0, worst_im = 0;
  int unpaired = 0, missing = 0, cases = 0;
  std::uniform_real_distribution<double> mag(0.2, 5.0);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 4 + 2 * static_cast<int>(rng() % 10);
    const double tb = mag(rng);
    GraphSpec<> spec;
    switch (trial % 3) {
      case 0: spec = GraphSpec<>::fcg(n, mag(rng), tb); break;
      case 1: spec = GraphSpec<>::hcs(n, mag(rng), tb); break;
      default: spec = GraphSpec<>::with_connectivity(gaugemode::testing::random_symmetric_connectivity(rng, n), mag(rng), tb);
    }
    spec.gauge = static_cast<int>(rng() % static_cast<unsigned>(n));
    const auto s = numeric_spectrum(spec);
    const auto pr = conjugation_pairing(s, 1e-10 * std::max(1.0, s.scale));
    unpaired += !pr.fully_paired();
    for (const auto& p : pr.pairs) worst_pair = std::max(worst_pair, p.distance);
    const auto rep = dominance(s, Criterion::MaxAbs);
    bool has_k = false;
    for (auto pos : rep.dominant) {
      has_k = has_k || s.pairs[pos].label == spec.gauge;
      worst_im = std::max(worst_im, std::abs(s.pairs[pos].value.imag()));
    }
    missing += !has_k;
    ++cases;
  }
  return {unpaired == 0 && missing == 0 && worst_pair <= 1e-10 && worst_im <= 1e-10,
          std::to_string(cases) + " real-hopping specs (fcg/hcs/custom, random k): unpaired in " +
              std::to_string(unpaired) + ", max |E - conj E'| " + sci(worst_pair) + ", w=k dominant missing in " +
              std::to_string(missing) + ", max |Im E_dom| " + sci(worst_im) + " (tol 1e-10)"};
}

Verdict folding() {
  std::mt19937_64 rng(4242);
  double worst_residual = 0, worst_match = 0;
  std::string counts;
  for (int trial = 0; trial < 10; ++trial) {
    DimensionSpec<double> d;
    d.axes = {GraphSpec<>::fcg(4, gaugemode::testing::random_complex(rng, 0.2, 5),
                               gaugemode::testing::random_complex(rng, 0.2, 5)),
              GraphSpec<>::fcg(6, gaugemode::testing::random_complex(rng, 0.2, 5),
                               gaugemode::testing::random_complex(rng, 0.2, 5))};
    const MatrixXcd h = assemble_hamiltonian(d);
    const double norm = h.norm();
    std::vector<cd> sums;
    for (int wx = 0; wx < 4; ++wx) {
      for (int wy = 0; wy < 6; ++wy) {
        const VectorXcd v = separable_mode(d, {wx, wy}).normalized();
        const cd e = separable_energy(d, {wx, wy});
        worst_residual = std::max(worst_residual, (h * v - e * v).norm() / norm);
        sums.push_back(e);
      }
    }
    worst_match = std::max(worst_match, match_values(eigendecompose(h).values(), sums).max_distance / norm);
    counts += (counts.empty() ? "" : ",") + std::to_string(folded_spectrum(d).distinct_count);
  }
  return {worst_residual <= 1e-9 && worst_match <= 1e-9,
          "4 x 6, 10 random draws: product residual " + sci(worst_residual) + "·||H||, pair-sum match " +
              sci(worst_match) + "·||H|| (tol 1e-9); distinct counts " + counts + " vs lcm 12 (reported only)"};
}

Verdict multimode() {
  DimensionSpec<double> d;
  d.axes = {GraphSpec<>::fcg(12, cd(0, 1.5), cd(0, 1)),
            GraphSpec<>::fcg(3, std::polar(1.0, pi_v<double> / 5), std::polar(1.0, -pi_v<double> / 5))};
  const auto rep = folded_spectrum(d);
  const auto s = folded_as_spectrum(d, rep);
  const auto dom = dominance(s, Criterion::MaxIm);
  double im_spread = 0, min_re_gap = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < dom.dominant.size(); ++a) {
    for (std::size_t b = a + 1; b < dom.dominant.size(); ++b) {
      const cd ea = s.pairs[dom.dominant[a]].value, eb = s.pairs[dom.dominant[b]].value;
      im_spread = std::max(im_spread, std::abs(ea.imag() - eb.imag()));
      min_re_gap = std::min(min_re_gap, std::abs(ea.real() - eb.real()));
    }
  }
  const auto numeric = dominance(numeric_spectrum(d), Criterion::MaxIm);
  const bool pass = dom.dominant.size() == 3 && im_spread <= 1e-9 && min_re_gap > 1e-6 * rep.scale &&
                    numeric.dominant.size() == 3;
  return {pass, "12 x 3 (x: 1.5i/i, y: e^{+-i pi/5}): " + std::to_string(dom.dominant.size()) +
                    " dominant (numeric " + std::to_string(numeric.dominant.size()) + "), Im spread " +
                    sci(im_spread) + " (tol 1e-9), smallest Re separation " + sci(min_re_gap)};
}

Verdict determinism() {
  const fs::path configs = fs::path(GAUGEMODE_SOURCE_DIR) / "configs";
  const fs::path scratch = fs::temp_directory_path() / "gaugemode_acceptance";
  fs::remove_all(scratch);
  int differing = 0, files = 0, roundtrip_bad = 0, configs_seen = 0, nonzero = 0;
  for (const char* name : {"fig1b", "fig1d", "fig1e", "fig2c", "fig2d", "fig3b", "fig3f", "fig4c"}) {
    const std::string path = (configs / (std::string(name) + ".yaml")).string();
    const ExperimentConfig cfg = load_config(path);
    const std::string kind(to_string(*cfg.kind));
    ++configs_seen;
    if (parse_config(to_yaml(cfg)) != cfg || parse_config(config_json(cfg)) != cfg) ++roundtrip_bad;
    for (const char* format : {"csv", "json"}) {
      for (const char* run_dir : {"a", "b"}) {
        std::ostringstream out, err;
        nonzero += run({kind, path, "-f", format, "-d", (scratch / run_dir).string()}, out, err) != 0;
      }
    }
  }
  for (const auto& entry : fs::directory_iterator(scratch / "a")) {
    ++files;
    differing += read_file(entry.path()) != read_file(scratch / "b" / entry.path().filename());
  }
  fs::remove_all(scratch);
  return {differing == 0 && roundtrip_bad == 0 && nonzero == 0 && files > 0,
          std::to_string(configs_seen) + " figure configs x csv/json, two runs each: " + std::to_string(files) +
              " files, " + std::to_string(differing) + " differ, " + std::to_string(nonzero) + " nonzero exits; " +
              "parse(emit(config)) mismatches " + std::to_string(roundtrip_bad)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Verdict()>> criteria[] = {
      {"A1  reciprocal limit", reciprocal_limit},
      {"A2  oracle equivalence", oracle_equivalence},
      {"A3  closed-form identity", closed_form_identity},
      {"A4  gauge selection", gauge_selection},
      {"A5  gap growth", gap_growth},
      {"A6  double-mode selection", double_mode},
      {"A7  negative-t quadruplet", negative_quadruplet},
      {"A8  spectrum rotation", rotation},
      {"A9  real-axis symmetry", real_axis},
      {"A10 2D folding", folding},
      {"A11 multi-mode placement", multimode},
      {"A12 determinism and I/O", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << std::endl;
  }
  std::cout << (std::size(criteria) - failed) << "/" << std::size(criteria) << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
