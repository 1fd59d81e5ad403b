#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "gaugemode/analytic.hpp"
#include "gaugemode/eigensolver.hpp"
#include "gaugemode/mode_analysis.hpp"

namespace gaugemode {

/// Dense assembly cap on the product of axis sizes.
inline constexpr long kMaxFoldedSites = 4096;

/// One ring per axis. Sites are flattened x-major: the first axis varies slowest.
template <typename Real = double>
struct DimensionSpec {
  std::vector<GraphSpec<Real>> axes;

  std::size_t rank() const { return axes.size(); }

  long total_sites() const {
    long n = 1;
    for (const auto& a : axes) n *= a.sites;
    return n;
  }

  std::vector<int> extents() const {
    std::vector<int> e;
    for (const auto& a : axes) e.push_back(a.sites);
    return e;
  }

  void validate() const {
    if (axes.empty()) throw ConfigError("at least one axis is required");
    for (const auto& a : axes) a.validate();
    if (total_sites() > kMaxFoldedSites) {
      throw ConfigError("product of axis sizes " + std::to_string(total_sites()) +
                        " exceeds the dense cap " + std::to_string(kMaxFoldedSites));
    }
  }

  bool operator==(const DimensionSpec&) const = default;
};

/// Flat x-major index of a label or site tuple.
inline std::size_t flat_index(const std::vector<int>& extents, const std::vector<int>& idx) {
  if (idx.size() != extents.size()) throw UsageError("index rank does not match axis count");
  std::size_t flat = 0;
  for (std::size_t a = 0; a < extents.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= extents[a]) {
      throw UsageError("index " + std::to_string(idx[a]) + " out of range for axis " +
                       std::to_string(a) + " of size " + std::to_string(extents[a]));
    }
    flat = flat * static_cast<std::size_t>(extents[a]) + static_cast<std::size_t>(idx[a]);
  }
  return flat;
}

inline std::vector<int> unflatten(const std::vector<int>& extents, std::size_t flat) {
  std::vector<int> idx(extents.size());
  for (std::size_t a = extents.size(); a-- > 0;) {
    idx[a] = static_cast<int>(flat % static_cast<std::size_t>(extents[a]));
    flat /= static_cast<std::size_t>(extents[a]);
  }
  return idx;
}

/// H_1 (+) H_2 (+) ... with A (+) B = A (x) I_B + I_A (x) B.
template <typename Real>
ComplexMatrix<Real> kronecker_sum(std::span<const ComplexMatrix<Real>> hs) {
  if (hs.empty()) throw UsageError("kronecker_sum: empty matrix list");
  for (const auto& h : hs) {
    if (h.rows() != h.cols()) throw UsageError("kronecker_sum: every matrix must be square");
  }
  ComplexMatrix<Real> acc = hs.front();
  for (std::size_t k = 1; k < hs.size(); ++k) {
    const ComplexMatrix<Real>& b = hs[k];
    const Eigen::Index na = acc.rows();
    const Eigen::Index nb = b.rows();
    ComplexMatrix<Real> next = ComplexMatrix<Real>::Zero(na * nb, na * nb);
    for (Eigen::Index i = 0; i < na; ++i) {
      for (Eigen::Index j = 0; j < na; ++j) {
        if (acc(i, j) == Complex<Real>(0)) continue;
        next.block(i * nb, j * nb, nb, nb).diagonal().setConstant(acc(i, j));
      }
      next.block(i * nb, i * nb, nb, nb) += b;
    }
    acc = std::move(next);
  }
  return acc;
}

template <typename Real>
ComplexMatrix<Real> kronecker_sum(const std::vector<ComplexMatrix<Real>>& hs) {
  return kronecker_sum(std::span<const ComplexMatrix<Real>>(hs));
}

/// ||H_1 (+) ... (+) H_d||_F without assembling the sum.
template <typename Real>
Real kronecker_sum_norm(const std::vector<ComplexMatrix<Real>>& hs) {
  // <A (x) I, I (x) B>_F = conj(tr A) tr B, so the cross terms only involve traces.
  const std::size_t d = hs.size();
  std::vector<Real> size(d);
  for (std::size_t a = 0; a < d; ++a) size[a] = Real(hs[a].rows());
  auto others = [&](std::size_t skip1, std::size_t skip2) {
    Real p = 1;
    for (std::size_t c = 0; c < d; ++c) {
      if (c != skip1 && c != skip2) p *= size[c];
    }
    return p;
  };
  Real sq = 0;
  for (std::size_t a = 0; a < d; ++a) {
    sq += hs[a].squaredNorm() * others(a, a);
    for (std::size_t b = a + 1; b < d; ++b) {
      sq += Real(2) * (std::conj(hs[a].trace()) * hs[b].trace()).real() * others(a, b);
    }
  }
  return std::sqrt(std::max(sq, Real(0)));
}

template <typename Real>
std::vector<ComplexMatrix<Real>> axis_hamiltonians(const DimensionSpec<Real>& dims) {
  std::vector<ComplexMatrix<Real>> hs;
  for (const auto& a : dims.axes) hs.push_back(assemble_hamiltonian(a));
  return hs;
}

template <typename Real>
ComplexMatrix<Real> assemble_hamiltonian(const DimensionSpec<Real>& dims) {
  dims.validate();
  return kronecker_sum(axis_hamiltonians(dims));
}

/// Product of the per-axis ansatz vectors; eigenvalue is the sum of the axis energies.
template <typename Real>
ComplexVector<Real> separable_mode(const DimensionSpec<Real>& dims, const std::vector<int>& labels) {
  const std::vector<int> ext = dims.extents();
  flat_index(ext, labels);  // range check
  ComplexVector<Real> v = ComplexVector<Real>::Ones(1);
  for (std::size_t a = 0; a < dims.rank(); ++a) {
    const ComplexVector<Real> psi = analytic_mode_vector(dims.axes[a], labels[a]);
    ComplexVector<Real> next(v.size() * psi.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) next.segment(i * psi.size(), psi.size()) = v(i) * psi;
    v = std::move(next);
  }
  return v;
}

template <typename Real>
Complex<Real> separable_energy(const DimensionSpec<Real>& dims, const std::vector<int>& labels) {
  flat_index(dims.extents(), labels);
  Complex<Real> e(0);
  for (std::size_t a = 0; a < dims.rank(); ++a) e += analytic_energy(dims.axes[a], labels[a]);
  return e;
}

/// Fiber of a separable vector along one axis, through its largest-magnitude entry.
template <typename Real>
ComplexVector<Real> axis_factor(const ComplexVector<Real>& v, const std::vector<int>& extents,
                                std::size_t axis) {
  if (axis >= extents.size()) throw UsageError("axis_factor: axis out of range");
  Eigen::Index best = 0;
  v.cwiseAbs().maxCoeff(&best);
  std::vector<int> idx = unflatten(extents, static_cast<std::size_t>(best));
  ComplexVector<Real> fiber(extents[axis]);
  for (int m = 0; m < extents[axis]; ++m) {
    idx[axis] = m;
    fiber(m) = v(static_cast<Eigen::Index>(flat_index(extents, idx)));
  }
  return fiber;
}

/// Per-axis windings of a separable vector (complex r of each axis divided out).
template <typename Real>
std::vector<int> axis_windings(const ComplexVector<Real>& v, const DimensionSpec<Real>& dims) {
  const std::vector<int> ext = dims.extents();
  std::vector<int> w;
  for (std::size_t a = 0; a < dims.rank(); ++a) {
    w.push_back(winding_number<Real>(axis_factor(v, ext, a), dims.axes[a].decay_root()));
  }
  return w;
}

template <typename Real = double>
struct FoldedEnergy {
  std::vector<int> labels;
  Complex<Real> energy{};
  std::size_t value_class = 0;  // index into FoldingReport::distinct
};

template <typename Real = double>
struct FoldingReport {
  std::vector<int> extents;
  std::vector<FoldedEnergy<Real>> entries;  // x-major over label tuples
  std::vector<Complex<Real>> distinct;      // representatives in first-appearance order
  std::vector<std::size_t> multiplicity;    // per distinct value
  std::size_t distinct_count = 0;
  long lcm = 1;                             // lcm of the axis sizes, for comparison only
  Real scale = 0;                           // ||H||_F of the Kronecker sum
};

/// All label-tuple energy sums, deduplicated within dedup_tol * ||H||.
template <typename Real>
FoldingReport<Real> folded_spectrum(const DimensionSpec<Real>& dims, Real dedup_tol = Real(1e-8)) {
  dims.validate();
  FoldingReport<Real> rep;
  rep.extents = dims.extents();
  rep.scale = kronecker_sum_norm(axis_hamiltonians(dims));
  for (int n : rep.extents) rep.lcm = std::lcm(rep.lcm, long(n));

  std::vector<std::vector<Complex<Real>>> axis_e(dims.rank());
  for (std::size_t a = 0; a < dims.rank(); ++a) {
    for (int w = 0; w < dims.axes[a].sites; ++w) axis_e[a].push_back(analytic_energy(dims.axes[a], w));
  }

  const Real tol = dedup_tol * (rep.scale > Real(0) ? rep.scale : Real(1));
  const auto total = static_cast<std::size_t>(dims.total_sites());
  rep.entries.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    FoldedEnergy<Real> fe;
    fe.labels = unflatten(rep.extents, flat);
    for (std::size_t a = 0; a < dims.rank(); ++a) {
      fe.energy += axis_e[a][static_cast<std::size_t>(fe.labels[a])];
    }
    std::size_t cls = rep.distinct.size();
    for (std::size_t c = 0; c < rep.distinct.size(); ++c) {
      if (std::abs(rep.distinct[c] - fe.energy) <= tol) {
        cls = c;
        break;
      }
    }
    if (cls == rep.distinct.size()) {
      rep.distinct.push_back(fe.energy);
      rep.multiplicity.push_back(0);
    }
    ++rep.multiplicity[cls];
    fe.value_class = cls;
    rep.entries.push_back(std::move(fe));
  }
  rep.distinct_count = rep.distinct.size();
  return rep;
}

/// Folded energies as an analytic spectrum, labelled by flat x-major label index.
template <typename Real>
Spectrum<Real> folded_as_spectrum(const DimensionSpec<Real>& dims, const FoldingReport<Real>& rep,
                                  bool with_vectors = false) {
  Spectrum<Real> s;
  s.source = SpectrumSource::Analytic;
  s.ordering = Ordering::ByWinding;
  s.scale = rep.scale;
  for (std::size_t i = 0; i < rep.entries.size(); ++i) {
    EigenPair<Real> p;
    p.value = rep.entries[i].energy;
    p.label = static_cast<int>(i);
    if (with_vectors) p.vector = phase_fixed<Real>(separable_mode(dims, rep.entries[i].labels));
    s.pairs.push_back(std::move(p));
  }
  return s;
}

/// Dominant set of the folded spectrum. Labels are flat x-major label indices.
template <typename Real>
DominanceReport<Real> multimode_select(const DimensionSpec<Real>& dims, Criterion criterion,
                                       Real tie_tol = Real(1e-8)) {
  const FoldingReport<Real> rep = folded_spectrum(dims);
  return dominance_report(folded_as_spectrum(dims, rep), criterion, tie_tol);
}

/// Numeric spectrum of the Kronecker sum; labels are flat x-major per-axis windings.
template <typename Real>
Spectrum<Real> numeric_spectrum(const DimensionSpec<Real>& dims, const SolverOptions<Real>& opts = {}) {
  Spectrum<Real> s = eigendecompose(assemble_hamiltonian(dims), opts);
  const std::vector<int> ext = dims.extents();
  for (auto& p : s.pairs) p.label = static_cast<int>(flat_index(ext, axis_windings(p.vector, dims)));
  return s;
}

}  // namespace gaugemode
