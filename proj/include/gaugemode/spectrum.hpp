#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "gaugemode/types.hpp"

namespace gaugemode {

enum class SpectrumSource { Analytic, Numeric };
enum class Ordering { None, ByIm, ByAbs, ByRe, ByWinding };

template <typename Real = double>
struct EigenPair {
  Complex<Real> value{};
  ComplexVector<Real> vector;  // unit 2-norm, largest-magnitude entry real positive
  Real residual = 0;           // ||H v - lambda v|| / ||H||_F
  int label = -1;              // winding label; -1 when not assigned
};

template <typename Real = double>
struct Spectrum {
  std::vector<EigenPair<Real>> pairs;
  SpectrumSource source = SpectrumSource::Numeric;
  Ordering ordering = Ordering::None;
  Real scale = 0;  // Frobenius norm of the matrix the spectrum belongs to

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }

  std::vector<Complex<Real>> values() const {
    std::vector<Complex<Real>> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(p.value);
    return out;
  }

  Real max_residual() const {
    Real r = 0;
    for (const auto& p : pairs) r = std::max(r, p.residual);
    return r;
  }
};

/// Scale to unit norm and rotate so that the largest-magnitude entry is real positive.
template <typename Real>
ComplexVector<Real> phase_fixed(ComplexVector<Real> v) {
  const Real norm = v.norm();
  if (norm == Real(0)) return v;
  v /= norm;
  Eigen::Index best = 0;
  Real best_abs = -1;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Real a = std::abs(v(i));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  v *= std::conj(v(best)) / best_abs;
  v(best) = Complex<Real>(best_abs, 0);
  return v;
}

/// Stable sort. ByIm/ByAbs/ByRe put the largest metric first; ByWinding sorts labels ascending.
template <typename Real>
void sort_spectrum(Spectrum<Real>& s, Ordering ordering) {
  auto key = [ordering](const EigenPair<Real>& p) -> Real {
    switch (ordering) {
      case Ordering::ByIm: return -p.value.imag();
      case Ordering::ByAbs: return -std::abs(p.value);
      case Ordering::ByRe: return -p.value.real();
      case Ordering::ByWinding: return Real(p.label);
      case Ordering::None: return Real(0);
    }
    return Real(0);
  };
  std::stable_sort(s.pairs.begin(), s.pairs.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  s.ordering = ordering;
}

}  // namespace gaugemode
