#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "gaugemode/spectrum.hpp"
#include "gaugemode/types.hpp"

namespace gaugemode {

template <typename Real = double>
struct SolverOptions {
  Real tolerance = Real(1e-9);          // max accepted eigenpair residual
  Real deflation = Real(1e-14);         // subdiagonal deflation threshold, relative to ||H||
  Real cluster = Real(1e-7);            // eigenvalues closer than this * ||H|| share a cluster
  int max_size = 512;
  int iterations_per_eigenvalue = 60;
  int inverse_iterations = 6;
};

/// QR iteration ran out of budget. Carries the state of the deflation at the point of failure.
class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& what, std::vector<std::complex<double>> converged,
                   int active_lo, int active_hi, int iterations)
      : SolverError(what),
        converged_(std::move(converged)),
        active_lo_(active_lo),
        active_hi_(active_hi),
        iterations_(iterations) {}

  /// Eigenvalues already deflated (trailing part of the Schur form).
  const std::vector<std::complex<double>>& converged() const { return converged_; }
  int active_lo() const { return active_lo_; }
  int active_hi() const { return active_hi_; }
  int iterations() const { return iterations_; }

 private:
  std::vector<std::complex<double>> converged_;
  int active_lo_;
  int active_hi_;
  int iterations_;
};

namespace detail {

/// Householder reduction to upper Hessenberg form, in place.
template <typename Real>
void reduce_to_hessenberg(ComplexMatrix<Real>& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    ComplexVector<Real> v = a.col(k).segment(k + 1, m);
    const Real xnorm = v.norm();
    if (xnorm == Real(0)) continue;
    const Real tail = v.tail(m - 1).norm();
    if (tail == Real(0)) continue;

    const Real x0abs = std::abs(v(0));
    const Complex<Real> phase = x0abs == Real(0) ? Complex<Real>(1) : v(0) / x0abs;
    const Complex<Real> alpha = -phase * xnorm;
    v(0) -= alpha;
    v.normalize();

    // A <- P A P with P = I - 2 v v^H acting on rows/cols k+1..n-1.
    auto rows = a.bottomRows(m);
    const Eigen::Matrix<Complex<Real>, 1, Eigen::Dynamic> vh_rows = v.adjoint() * rows;
    rows.noalias() -= Real(2) * v * vh_rows;
    auto cols = a.rightCols(m);
    const ComplexVector<Real> cols_v = cols * v;
    cols.noalias() -= Real(2) * cols_v * v.adjoint();

    a(k + 1, k) = alpha;
    a.col(k).segment(k + 2, m - 1).setZero();
  }
}

/// Rotation G = [c s; -conj(s) c] with G [x; y] = [rho; 0].
template <typename Real>
struct Givens {
  Real c = 1;
  Complex<Real> s{};

  static Givens make(Complex<Real> x, Complex<Real> y) {
    Givens g;
    const Real ay = std::abs(y);
    if (ay == Real(0)) return g;
    const Real ax = std::abs(x);
    if (ax == Real(0)) {
      g.c = 0;
      g.s = std::conj(y) / ay;
      return g;
    }
    const Real norm = std::hypot(ax, ay);
    g.c = ax / norm;
    g.s = (x / ax) * std::conj(y) / norm;
    return g;
  }
};

template <typename Real>
Complex<Real> wilkinson_shift(const ComplexMatrix<Real>& t, Eigen::Index hi) {
  const Complex<Real> a = t(hi - 1, hi - 1);
  const Complex<Real> b = t(hi - 1, hi);
  const Complex<Real> c = t(hi, hi - 1);
  const Complex<Real> d = t(hi, hi);
  const Complex<Real> mean = (a + d) / Real(2);
  const Complex<Real> half = (a - d) / Real(2);
  const Complex<Real> disc = std::sqrt(half * half + b * c);
  const Complex<Real> e1 = mean + disc;
  const Complex<Real> e2 = mean - disc;
  return std::abs(e1 - d) <= std::abs(e2 - d) ? e1 : e2;
}

/// LU with partial pivoting whose tiny pivots are replaced by `floor`, so that the
/// nearly singular shifted systems of inverse iteration stay solvable.
template <typename Real>
class GuardedLu {
 public:
  GuardedLu(ComplexMatrix<Real> a, Real floor) : lu_(std::move(a)), perm_(lu_.rows()) {
    const Eigen::Index n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), Eigen::Index(0));
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index p = k;
      Real best = std::abs(lu_(k, k));
      for (Eigen::Index i = k + 1; i < n; ++i) {
        const Real v = std::abs(lu_(i, k));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      if (p != k) {
        lu_.row(k).swap(lu_.row(p));
        std::swap(perm_[static_cast<std::size_t>(k)], perm_[static_cast<std::size_t>(p)]);
      }
      if (std::abs(lu_(k, k)) < floor) lu_(k, k) = Complex<Real>(floor);
      const Complex<Real> pivot = lu_(k, k);
      for (Eigen::Index i = k + 1; i < n; ++i) {
        lu_(i, k) /= pivot;
        const Complex<Real> f = lu_(i, k);
        if (f == Complex<Real>(0)) continue;
        lu_.row(i).tail(n - k - 1) -= f * lu_.row(k).tail(n - k - 1);
      }
    }
  }

  ComplexVector<Real> solve(const ComplexVector<Real>& b) const {
    const Eigen::Index n = lu_.rows();
    ComplexVector<Real> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = b(perm_[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) x(i) -= lu_(i, j) * x(j);
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      for (Eigen::Index j = i + 1; j < n; ++j) x(i) -= lu_(i, j) * x(j);
      x(i) /= lu_(i, i);
    }
    return x;
  }

 private:
  ComplexMatrix<Real> lu_;
  std::vector<Eigen::Index> perm_;
};

}  // namespace detail

/// Eigenvalues by Hessenberg reduction followed by single-shift complex QR with
/// Wilkinson shifts. Deterministic for identical input bits.
template <typename Real>
std::vector<Complex<Real>> hessenberg_qr_eigenvalues(const ComplexMatrix<Real>& h,
                                                      const SolverOptions<Real>& opts = {}) {
  if (h.rows() != h.cols()) throw UsageError("eigenvalue problem needs a square matrix");
  const Eigen::Index n = h.rows();
  std::vector<Complex<Real>> eig(static_cast<std::size_t>(n));
  if (n == 0) return eig;

  ComplexMatrix<Real> t = h;
  detail::reduce_to_hessenberg(t);
  const Real norm = h.norm();
  const Real small = std::max(opts.deflation * norm, std::numeric_limits<Real>::min());
  const Real eps = std::numeric_limits<Real>::epsilon();

  Eigen::Index hi = n - 1;
  int iter = 0;
  int total = 0;
  const int budget = opts.iterations_per_eigenvalue * static_cast<int>(n);
  while (hi >= 0) {
    Eigen::Index lo = hi;
    while (lo > 0) {
      const Real sub = std::abs(t(lo, lo - 1));
      const Real diag = std::abs(t(lo - 1, lo - 1)) + std::abs(t(lo, lo));
      if (sub <= small || sub <= eps * diag) {
        t(lo, lo - 1) = Complex<Real>(0);
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[static_cast<std::size_t>(hi)] = t(hi, hi);
      --hi;
      iter = 0;
      continue;
    }

    ++iter;
    ++total;
    if (iter > opts.iterations_per_eigenvalue || total > budget) {
      std::vector<std::complex<double>> done;
      for (auto i = hi + 1; i < n; ++i) {
        const auto& e = eig[static_cast<std::size_t>(i)];
        done.emplace_back(static_cast<double>(e.real()), static_cast<double>(e.imag()));
      }
      throw ConvergenceError("QR iteration did not converge for the block [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]",
                             std::move(done), static_cast<int>(lo), static_cast<int>(hi), total);
    }

    Complex<Real> shift;
    if (iter % 11 == 0) {
      // exceptional shift to break cycles
      const Real bump = std::abs(t(hi, hi - 1).real()) +
                        (hi - 2 >= lo ? std::abs(t(hi - 1, hi - 2).real()) : Real(0));
      shift = t(hi, hi) + Complex<Real>(Real(0.75) * bump, Real(0.3) * bump);
    } else {
      shift = detail::wilkinson_shift(t, hi);
    }

    Complex<Real> x = t(lo, lo) - shift;
    Complex<Real> y = t(lo + 1, lo);
    for (Eigen::Index k = lo; k < hi; ++k) {
      if (k > lo) {
        x = t(k, k - 1);
        y = t(k + 1, k - 1);
      }
      const auto g = detail::Givens<Real>::make(x, y);
      const Eigen::Index c0 = k > lo ? k - 1 : lo;
      for (Eigen::Index j = c0; j <= hi; ++j) {
        const Complex<Real> u = t(k, j);
        const Complex<Real> v = t(k + 1, j);
        t(k, j) = g.c * u + g.s * v;
        t(k + 1, j) = -std::conj(g.s) * u + g.c * v;
      }
      if (k > lo) t(k + 1, k - 1) = Complex<Real>(0);
      const Eigen::Index r1 = std::min(k + 2, hi);
      for (Eigen::Index i = lo; i <= r1; ++i) {
        const Complex<Real> u = t(i, k);
        const Complex<Real> v = t(i, k + 1);
        t(i, k) = g.c * u + std::conj(g.s) * v;
        t(i, k + 1) = -g.s * u + g.c * v;
      }
    }
  }
  return eig;
}

/// ||H v - lambda v||_2 / ||H||_F
template <typename Real>
Real residual(const ComplexMatrix<Real>& h, const EigenPair<Real>& pair) {
  if (h.cols() != pair.vector.size()) throw UsageError("residual: dimension mismatch");
  const Real norm = h.norm();
  const Real r = (h * pair.vector - pair.value * pair.vector).norm();
  return norm > Real(0) ? r / norm : r;
}

/// Index groups whose eigenvalues chain together within `tol` (single linkage).
template <typename Real>
std::vector<std::vector<std::size_t>> eigenvalue_clusters(const std::vector<Complex<Real>>& values,
                                                          Real tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t(0));
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(values[i] - values[j]) <= tol) parent[find(j)] = find(i);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<long> slot(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[root])].push_back(i);
  }
  return groups;
}

/// Dense eigendecomposition: QR eigenvalues, then inverse iteration on the original matrix
/// with the converged shifts. Vectors within one degenerate cluster are orthogonalized
/// against each other so that the cluster spans its eigenspace.
template <typename Real>
Spectrum<Real> eigendecompose(const ComplexMatrix<Real>& h, const SolverOptions<Real>& opts = {}) {
  if (h.rows() != h.cols()) throw UsageError("eigendecompose needs a square matrix");
  const Eigen::Index n = h.rows();
  if (n > opts.max_size) {
    throw UsageError("matrix size " + std::to_string(n) + " exceeds the solver cap " +
                     std::to_string(opts.max_size));
  }
  Spectrum<Real> out;
  out.source = SpectrumSource::Numeric;
  out.scale = h.norm();
  if (n == 0) return out;

  const std::vector<Complex<Real>> values = hessenberg_qr_eigenvalues(h, opts);
  const Real norm = out.scale;
  const Real unit = norm > Real(0) ? norm : Real(1);
  const Real floor = std::numeric_limits<Real>::epsilon() * unit;

  std::vector<std::size_t> cluster_of(static_cast<std::size_t>(n));
  const auto clusters = eigenvalue_clusters(values, opts.cluster * unit);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (auto i : clusters[c]) cluster_of[i] = c;
  }

  out.pairs.resize(static_cast<std::size_t>(n));
  // orthonormal basis of the eigenvectors found so far in each cluster
  std::vector<std::vector<ComplexVector<Real>>> spans(clusters.size());
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    const Complex<Real> lambda = values[i];
    auto& span = spans[cluster_of[i]];
    auto project_out = [&](ComplexVector<Real>& v) {
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& s : span) v -= s.dot(v) * s;
      }
    };

    const detail::GuardedLu<Real> lu(h - lambda * ComplexMatrix<Real>::Identity(n, n), floor);
    auto iterate = [&](bool deflate) {
      ComplexVector<Real> v(n);
      for (Eigen::Index m = 0; m < n; ++m) {
        v(m) = Complex<Real>(Real(1) + Real(m % 7) / Real(7), Real((m * 3) % 5) / Real(5));
      }
      if (deflate) project_out(v);
      v.normalize();
      for (int it = 0; it < opts.inverse_iterations; ++it) {
        ComplexVector<Real> next = lu.solve(v);
        if (deflate) project_out(next);
        const Real nn = next.norm();
        if (!(nn > Real(0)) || !std::isfinite(nn)) break;
        v = next / nn;
        if ((h * v - lambda * v).norm() / unit <= opts.tolerance * Real(1e-3)) break;
      }
      return v;
    };

    ComplexVector<Real> v = iterate(false);
    if (!span.empty()) {
      ComplexVector<Real> rest = v;
      project_out(rest);
      // A repeat of an eigenvector already found: search the orthogonal complement instead.
      if (rest.norm() < Real(0.5)) v = iterate(true);
    }

    EigenPair<Real> pair;
    pair.value = lambda;
    pair.vector = phase_fixed<Real>(v);
    pair.residual = (h * pair.vector - lambda * pair.vector).norm() / unit;
    if (!(pair.residual <= opts.tolerance)) {
      throw SolverError("inverse iteration left residual " + std::to_string(double(pair.residual)) +
                        " above tolerance for eigenvalue " + std::to_string(idx));
    }
    if (clusters[cluster_of[i]].size() > 1) {
      ComplexVector<Real> q = v;
      project_out(q);
      const Real qn = q.norm();
      if (qn > Real(1e-8)) span.push_back(q / qn);
    }
    out.pairs[i] = std::move(pair);
  }
  return out;
}

/// Optimal (bottleneck) assignment between two eigenvalue multisets.
template <typename Real = double>
struct MatchReport {
  std::vector<std::size_t> assignment;  // a[i] is matched with b[assignment[i]]
  Real max_distance = 0;
  Real mean_distance = 0;
  Real lower_bound = 0;  // max over points of the distance to their nearest partner
  bool exact = true;
};

namespace detail {

inline bool augment(std::size_t u, const std::vector<std::vector<std::size_t>>& adj,
                    std::vector<long>& match_b, std::vector<char>& seen) {
  for (auto v : adj[u]) {
    if (seen[v]) continue;
    seen[v] = 1;
    if (match_b[v] < 0 || augment(static_cast<std::size_t>(match_b[v]), adj, match_b, seen)) {
      match_b[v] = static_cast<long>(u);
      return true;
    }
  }
  return false;
}

/// Perfect matching using only edges with d <= threshold, or empty if none exists.
template <typename Real>
std::vector<std::size_t> threshold_matching(const std::vector<std::vector<Real>>& d, Real threshold) {
  const std::size_t n = d.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] <= threshold) adj[i].push_back(j);
    }
    std::sort(adj[i].begin(), adj[i].end(), [&](auto x, auto y) { return d[i][x] < d[i][y]; });
  }
  std::vector<long> match_b(n, -1);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<char> seen(n, 0);
    if (!augment(u, adj, match_b, seen)) return {};
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t v = 0; v < n; ++v) assignment[static_cast<std::size_t>(match_b[v])] = v;
  return assignment;
}

}  // namespace detail

/// Exact bottleneck assignment up to `exact_limit` points, greedy nearest-pair above it.
template <typename Real>
MatchReport<Real> match_values(const std::vector<Complex<Real>>& a,
                               const std::vector<Complex<Real>>& b, std::size_t exact_limit = 64) {
  if (a.size() != b.size()) {
    throw UsageError("match_spectra: lengths differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  const std::size_t n = a.size();
  MatchReport<Real> report;
  if (n == 0) return report;

  std::vector<std::vector<Real>> d(n, std::vector<Real>(n));
  std::vector<Real> row_min(n, std::numeric_limits<Real>::infinity());
  std::vector<Real> col_min(n, std::numeric_limits<Real>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      d[i][j] = std::abs(a[i] - b[j]);
      row_min[i] = std::min(row_min[i], d[i][j]);
      col_min[j] = std::min(col_min[j], d[i][j]);
    }
  }
  report.lower_bound = std::max(*std::max_element(row_min.begin(), row_min.end()),
                                *std::max_element(col_min.begin(), col_min.end()));

  if (n <= exact_limit) {
    std::vector<Real> levels;
    levels.reserve(n * n);
    for (const auto& row : d) levels.insert(levels.end(), row.begin(), row.end());
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    // smallest level admitting a perfect matching; never below the lower bound
    std::size_t lo = static_cast<std::size_t>(
        std::lower_bound(levels.begin(), levels.end(), report.lower_bound) - levels.begin());
    std::size_t hi = levels.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (detail::threshold_matching(d, levels[mid]).empty()) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    report.assignment = detail::threshold_matching(d, levels[lo]);
    report.exact = true;
  } else {
    struct Edge {
      Real dist;
      std::size_t i, j;
    };
    std::vector<Edge> edges;
    edges.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) edges.push_back({d[i][j], i, j});
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
      if (x.dist != y.dist) return x.dist < y.dist;
      if (x.i != y.i) return x.i < y.i;
      return x.j < y.j;
    });
    std::vector<char> used_a(n, 0), used_b(n, 0);
    report.assignment.assign(n, 0);
    std::size_t matched = 0;
    for (const auto& e : edges) {
      if (used_a[e.i] || used_b[e.j]) continue;
      used_a[e.i] = used_b[e.j] = 1;
      report.assignment[e.i] = e.j;
      if (++matched == n) break;
    }
    report.exact = false;
  }

  Real sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Real dist = d[i][report.assignment[i]];
    report.max_distance = std::max(report.max_distance, dist);
    sum += dist;
  }
  report.mean_distance = sum / Real(n);
  return report;
}

template <typename Real>
MatchReport<Real> match_spectra(const Spectrum<Real>& a, const Spectrum<Real>& b,
                                std::size_t exact_limit = 64) {
  return match_values(a.values(), b.values(), exact_limit);
}

/// Frobenius distance between the orthogonal projectors onto span(A) and span(B).
template <typename Real>
Real projector_distance(const ComplexMatrix<Real>& a, const ComplexMatrix<Real>& b) {
  if (a.rows() != b.rows()) throw UsageError("projector_distance: row counts differ");
  auto projector = [](const ComplexMatrix<Real>& m) {
    Eigen::HouseholderQR<ComplexMatrix<Real>> qr(m);
    const ComplexMatrix<Real> q =
        qr.householderQ() * ComplexMatrix<Real>::Identity(m.rows(), m.cols());
    return ComplexMatrix<Real>(q * q.adjoint());
  };
  return (projector(a) - projector(b)).norm();
}

}  // namespace gaugemode
