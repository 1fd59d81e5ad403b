#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "gaugemode/analytic.hpp"
#include "gaugemode/eigensolver.hpp"
#include "gaugemode/graph.hpp"

namespace gaugemode {

enum class Criterion { MaxIm, MaxAbs };

template <typename Real>
Real dominance_metric(Complex<Real> e, Criterion c) {
  return c == Criterion::MaxIm ? e.imag() : std::abs(e);
}

namespace detail {

template <typename Real>
void require_nonzero_entries(const ComplexVector<Real>& v, const char* what) {
  if (v.size() == 0) throw UsageError(std::string(what) + ": empty vector");
  for (Eigen::Index m = 0; m < v.size(); ++m) {
    if (v(m) == Complex<Real>(0)) {
      throw UsageError(std::string(what) + ": zero entry at site " + std::to_string(m + 1));
    }
  }
}

}  // namespace detail

/// Index w of the dominant discrete Fourier component sum_m v_m e^{-i m w theta}, in [0, N-1].
/// Summing principal-arg increments instead is ambiguous when the step is exactly pi.
template <typename Real>
int winding_number(const ComplexVector<Real>& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw UsageError("winding_number: empty vector");
  int best = 0;
  Real best_weight = -1;
  for (Eigen::Index w = 0; w < n; ++w) {
    Complex<Real> c(0);
    for (Eigen::Index m = 0; m < n; ++m) {
      c += v(m) * detail::unit_root<Real>(-static_cast<long long>(m) * w, static_cast<int>(n));
    }
    // strict comparison with a relative margin keeps ties on the lowest index
    const Real weight = std::abs(c);
    if (weight > best_weight * (Real(1) + Real(64) * std::numeric_limits<Real>::epsilon())) {
      best = static_cast<int>(w);
      best_weight = weight;
    }
  }
  return best;
}

/// Winding after dividing out the radial factor r^{m-1}; needed when r is complex.
template <typename Real>
int winding_number(const ComplexVector<Real>& v, Complex<Real> r) {
  ComplexVector<Real> u = v;
  Complex<Real> power(1);
  for (Eigen::Index m = 0; m < u.size(); ++m) {
    u(m) /= power;
    power *= r;
  }
  return winding_number<Real>(u);
}

/// Labels every pair of a numeric spectrum of `spec` with its winding.
template <typename Real>
void assign_windings(Spectrum<Real>& s, const GraphSpec<Real>& spec) {
  const Complex<Real> r = spec.decay_root();
  for (auto& p : s.pairs) p.label = winding_number<Real>(p.vector, r);
}

template <typename Real = double>
struct AmplitudeProfile {
  std::vector<Real> ratios;  // |v_{m+1}| / |v_m|
  Real deviation = 0;        // max ratio - min ratio
};

template <typename Real>
AmplitudeProfile<Real> amplitude_profile(const ComplexVector<Real>& v) {
  detail::require_nonzero_entries(v, "amplitude_profile");
  AmplitudeProfile<Real> out;
  for (Eigen::Index m = 0; m + 1 < v.size(); ++m) {
    out.ratios.push_back(std::abs(v(m + 1)) / std::abs(v(m)));
  }
  if (!out.ratios.empty()) {
    const auto [lo, hi] = std::minmax_element(out.ratios.begin(), out.ratios.end());
    out.deviation = *hi - *lo;
  }
  return out;
}

template <typename Real = double>
struct DominanceReport {
  Criterion criterion = Criterion::MaxIm;
  std::vector<std::size_t> dominant;  // positions in the spectrum
  std::vector<int> dominant_labels;   // their labels (-1 where unassigned)
  Real top = 0;                       // metric of the dominant set
  Real runner_up = 0;                 // best metric outside it
  Real gap = 0;                       // top - runner_up
  Real cluster_spread = 0;            // diameter of the non-dominant eigenvalues

  bool is_dominant(std::size_t pos) const {
    return std::find(dominant.begin(), dominant.end(), pos) != dominant.end();
  }
};

/// Modes within tie_tol * scale of the best metric form the dominant set.
template <typename Real>
DominanceReport<Real> dominance_report(const Spectrum<Real>& s, Criterion criterion,
                                       Real tie_tol = Real(1e-8)) {
  if (s.empty()) throw UsageError("dominance_report: empty spectrum");
  DominanceReport<Real> rep;
  rep.criterion = criterion;

  Real scale = s.scale;
  if (!(scale > Real(0))) {
    scale = 0;
    for (const auto& p : s.pairs) scale = std::max(scale, std::abs(p.value));
    if (!(scale > Real(0))) scale = 1;
  }
  const Real tie = tie_tol * scale;

  std::vector<Real> metric;
  metric.reserve(s.size());
  for (const auto& p : s.pairs) metric.push_back(dominance_metric(p.value, criterion));
  rep.top = *std::max_element(metric.begin(), metric.end());

  rep.runner_up = -std::numeric_limits<Real>::infinity();
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < metric.size(); ++i) {
    if (metric[i] >= rep.top - tie) {
      rep.dominant.push_back(i);
      rep.dominant_labels.push_back(s.pairs[i].label);
    } else {
      rest.push_back(i);
      rep.runner_up = std::max(rep.runner_up, metric[i]);
    }
  }
  if (rest.empty()) {
    rep.runner_up = rep.top;
    rep.gap = 0;
  } else {
    rep.gap = rep.top - rep.runner_up;
  }
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (std::size_t b = a + 1; b < rest.size(); ++b) {
      rep.cluster_spread = std::max(
          rep.cluster_spread, std::abs(s.pairs[rest[a]].value - s.pairs[rest[b]].value));
    }
  }
  return rep;
}

template <typename Real = double>
struct PairingReport {
  struct Pair {
    int label_a;
    int label_b;
    Real distance;  // |E_a - conj(E_b)|
  };
  std::vector<Pair> pairs;
  std::vector<int> unpaired;

  bool fully_paired() const { return unpaired.empty(); }
};

/// Greedy minimal-distance pairing of each E with a conj(E') partner; a real E may pair with itself.
/// Labels default to positions when the spectrum carries none.
template <typename Real>
PairingReport<Real> conjugation_pairing(const Spectrum<Real>& s, Real tol) {
  const std::size_t n = s.size();
  auto label = [&](std::size_t i) { return s.pairs[i].label >= 0 ? s.pairs[i].label : int(i); };
  struct Candidate {
    Real dist;
    std::size_t i, j;
  };
  std::vector<Candidate> cand;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Real d = std::abs(s.pairs[i].value - std::conj(s.pairs[j].value));
      if (d <= tol) cand.push_back({d, i, j});
    }
  }
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<char> used(n, 0);
  PairingReport<Real> rep;
  for (const auto& c : cand) {
    if (used[c.i] || used[c.j]) continue;
    used[c.i] = used[c.j] = 1;
    rep.pairs.push_back({label(c.i), label(c.j), c.dist});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) rep.unpaired.push_back(label(i));
  }
  return rep;
}

/// Numeric spectrum of a single ring with winding labels.
template <typename Real>
Spectrum<Real> numeric_spectrum(const GraphSpec<Real>& spec, const SolverOptions<Real>& opts = {}) {
  Spectrum<Real> s = eigendecompose(assemble_hamiltonian(spec), opts);
  assign_windings(s, spec);
  return s;
}

template <typename Real = double>
struct GapPoint {
  int sites;
  Real gap;
  Real top;
  Real runner_up;
};

/// Dominance gap per site count through the full numeric pipeline, sorted by N.
template <typename Real>
std::vector<GapPoint<Real>> gap_sweep(const GraphSpec<Real>& base, std::vector<int> sizes,
                                      Criterion criterion, Real tie_tol = Real(1e-8),
                                      const SolverOptions<Real>& opts = {}) {
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<GapPoint<Real>> table;
  table.reserve(sizes.size());
  for (int n : sizes) {
    GraphSpec<Real> spec = base;
    spec.sites = n;
    if (spec.gauge >= n) spec.gauge = 0;
    const auto rep = dominance_report(numeric_spectrum(spec, opts), criterion, tie_tol);
    table.push_back({n, rep.gap, rep.top, rep.runner_up});
  }
  return table;
}

template <typename Real = double>
struct RotationReport {
  Real angle = 0;
  Real max_deviation = 0;        // matched |E_rot - e^{i phi} E|
  bool dominance_preserved = false;
  std::vector<int> original_dominant;
  std::vector<int> rotated_dominant;
  Spectrum<Real> rotated;        // numeric spectrum of the rotated spec
};

/// Multiplies both hoppings by e^{i phi} and compares against the rotated original spectrum.
/// Dominance of the rotated spectrum is judged on e^{-i phi} E.
template <typename Real>
RotationReport<Real> rotation_check(const GraphSpec<Real>& spec, Real angle,
                                    Criterion criterion = Criterion::MaxAbs,
                                    Real tie_tol = Real(1e-8),
                                    const SolverOptions<Real>& opts = {}) {
  const Complex<Real> turn = std::polar(Real(1), angle);
  const Spectrum<Real> base = numeric_spectrum(spec, opts);
  RotationReport<Real> rep;
  rep.angle = angle;
  rep.rotated = numeric_spectrum(spec.scaled(turn), opts);

  std::vector<Complex<Real>> expected = base.values();
  for (auto& e : expected) e *= turn;
  rep.max_deviation = match_values(rep.rotated.values(), expected).max_distance;

  Spectrum<Real> unturned = rep.rotated;
  for (auto& p : unturned.pairs) p.value /= turn;
  const auto before = dominance_report(base, criterion, tie_tol);
  const auto after = dominance_report(unturned, criterion, tie_tol);
  rep.original_dominant = before.dominant_labels;
  rep.rotated_dominant = after.dominant_labels;
  std::sort(rep.original_dominant.begin(), rep.original_dominant.end());
  std::sort(rep.rotated_dominant.begin(), rep.rotated_dominant.end());
  rep.dominance_preserved = rep.original_dominant == rep.rotated_dominant;
  return rep;
}

}  // namespace gaugemode
