#pragma once

#include <vector>

#include "gaugemode/graph.hpp"
#include "gaugemode/spectrum.hpp"

namespace gaugemode {

/// Below this |denominator| the closed forms fall back to the direct sum.
inline constexpr double kClosedFormEpsilon = 1e-9;

/// Closed-form eigenpair of winding w built from the decay-mode ansatz.
template <typename Real = double>
struct AnalyticMode {
  int winding = 0;
  Real phase_step = 0;          // w * theta
  Complex<Real> eigenvalue{};   // absolute units (t_backward multiplied back in)
  std::vector<Real> amplitudes;           // |psi_m| = |r|^{m-1}
  ComplexVector<Real> site_values;        // psi_m = r^{m-1} e^{i (m-1) w theta}, psi_1 = 1
};

namespace detail {

template <typename Real>
void check_winding(const GraphSpec<Real>& spec, int w) {
  if (w < 0 || w >= spec.sites) {
    throw UsageError("winding label must lie in [0, " + std::to_string(spec.sites - 1) +
                     "], got " + std::to_string(w));
  }
}

}  // namespace detail

/// Direct sum t_bwd * sum_q a_q t^{(N-q)/N} e^{i q (w-k) theta} over the reference row.
template <typename Real>
Complex<Real> analytic_eigenvalue(const GraphSpec<Real>& spec, int w) {
  spec.validate();
  detail::check_winding(spec, w);
  const int n = spec.sites;
  const Connectivity a = spec.connectivity();
  // t^{(N-q)/N} taken as t r^q on the branch of decay_root()
  const Complex<Real> t = spec.ratio();
  const Complex<Real> log_inv = spec.log_inverse_ratio();
  Complex<Real> sum(0);
  for (int q = 1; q < n; ++q) {
    if (a(q) == 0) continue;
    const Complex<Real> power = t * std::exp(log_inv * (Real(q) / Real(n)));
    sum += power * detail::unit_root<Real>(static_cast<long long>(q) * (w - spec.gauge), n);
  }
  return spec.t_backward * sum;
}

/// Geometric-series closed form for the fully connected ring (gauged).
template <typename Real>
Complex<Real> closed_form_fcg(const GraphSpec<Real>& spec, int w) {
  if (spec.pattern != Pattern::FCG) throw UsageError("closed_form_fcg needs an FCG spec");
  spec.validate();
  detail::check_winding(spec, w);
  const Complex<Real> t = spec.ratio();
  const Complex<Real> y =
      spec.decay_root() * detail::unit_root<Real>(w - spec.gauge, spec.sites);
  const Complex<Real> denom = Real(1) - y;
  if (std::abs(denom) < Real(kClosedFormEpsilon)) return analytic_eigenvalue(spec, w);
  // r^N = 1/t
  return spec.t_backward * t * (Real(-1) + (Real(1) - Real(1) / t) / denom);
}

/// Odd-distance geometric series y (1 - y^N) / (1 - y^2) for the half-connected ring.
template <typename Real>
Complex<Real> closed_form_hcs(const GraphSpec<Real>& spec, int w) {
  if (spec.pattern != Pattern::HCS) throw UsageError("closed_form_hcs needs an HCS spec");
  spec.validate();
  detail::check_winding(spec, w);
  const Complex<Real> t = spec.ratio();
  const Complex<Real> y =
      spec.decay_root() * detail::unit_root<Real>(w - spec.gauge, spec.sites);
  const Complex<Real> denom = Real(1) - y * y;
  if (std::abs(denom) < Real(kClosedFormEpsilon)) return analytic_eigenvalue(spec, w);
  return spec.t_forward * y * (Real(1) - Real(1) / t) / denom;
}

/// Closed form where one exists for the pattern, direct sum otherwise.
template <typename Real>
Complex<Real> analytic_energy(const GraphSpec<Real>& spec, int w) {
  switch (spec.pattern) {
    case Pattern::FCG: return closed_form_fcg(spec, w);
    case Pattern::HCS: return closed_form_hcs(spec, w);
    case Pattern::Custom: return analytic_eigenvalue(spec, w);
  }
  return analytic_eigenvalue(spec, w);
}

/// psi_m = r^{m-1} e^{i (m-1) w theta}. Eigenvector of the (gauged) Hamiltonian for any k.
template <typename Real>
ComplexVector<Real> analytic_mode_vector(const GraphSpec<Real>& spec, int w) {
  detail::check_winding(spec, w);
  const int n = spec.sites;
  const Complex<Real> log_r = spec.log_inverse_ratio() / Real(n);
  ComplexVector<Real> psi(n);
  for (int m = 0; m < n; ++m) {
    psi(m) = std::exp(log_r * Real(m)) *
             detail::unit_root<Real>(static_cast<long long>(m) * w, n);
  }
  return psi;
}

template <typename Real>
AnalyticMode<Real> analytic_mode(const GraphSpec<Real>& spec, int w) {
  AnalyticMode<Real> mode;
  mode.winding = w;
  mode.phase_step = Real(w) * spec.theta();
  mode.eigenvalue = analytic_energy(spec, w);
  mode.site_values = analytic_mode_vector(spec, w);
  mode.amplitudes.reserve(static_cast<std::size_t>(spec.sites));
  for (Eigen::Index m = 0; m < mode.site_values.size(); ++m) {
    mode.amplitudes.push_back(std::abs(mode.site_values(m)));
  }
  return mode;
}

/// Columns are the N ansatz vectors w = 0..N-1.
template <typename Real>
ComplexMatrix<Real> analytic_mode_matrix(const GraphSpec<Real>& spec) {
  ComplexMatrix<Real> v(spec.sites, spec.sites);
  for (int w = 0; w < spec.sites; ++w) v.col(w) = analytic_mode_vector(spec, w);
  return v;
}

/// All N modes with residuals against the assembled matrix, labelled by winding.
template <typename Real>
Spectrum<Real> full_analytic_spectrum(const GraphSpec<Real>& spec) {
  const ComplexMatrix<Real> h = assemble_hamiltonian(spec);
  const Real scale = h.norm();
  Spectrum<Real> s;
  s.source = SpectrumSource::Analytic;
  s.ordering = Ordering::ByWinding;
  s.scale = scale;
  s.pairs.reserve(static_cast<std::size_t>(spec.sites));
  for (int w = 0; w < spec.sites; ++w) {
    EigenPair<Real> p;
    p.value = analytic_energy(spec, w);
    p.vector = phase_fixed<Real>(analytic_mode_vector(spec, w));
    p.residual = scale > 0 ? (h * p.vector - p.value * p.vector).norm() / scale : Real(0);
    p.label = w;
    s.pairs.push_back(std::move(p));
  }
  return s;
}

/// |det| of the column-normalized mode matrix; nonzero certifies a complete basis.
template <typename Real>
Real basis_determinant(const GraphSpec<Real>& spec) {
  ComplexMatrix<Real> v = analytic_mode_matrix(spec);
  v.colwise().normalize();
  return std::abs(v.fullPivLu().determinant());
}

}  // namespace gaugemode
