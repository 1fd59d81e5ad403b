#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gaugemode/types.hpp"

namespace gaugemode {

enum class Pattern { FCG, HCS, Custom };

inline std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::FCG: return "fcg";
    case Pattern::HCS: return "hcs";
    case Pattern::Custom: return "custom";
  }
  return "?";
}

/// On/off flags a_1 ... a_{N-1}, indexed by hop distance.
class Connectivity {
 public:
  Connectivity() = default;
  explicit Connectivity(std::vector<std::uint8_t> flags) : flags_(std::move(flags)) {}

  /// Number of sites implied by the vector (length + 1).
  int sites() const { return static_cast<int>(flags_.size()) + 1; }
  bool empty() const { return flags_.empty(); }

  /// a_q for hop distance q in [1, N-1].
  int operator()(int q) const { return flags_[static_cast<std::size_t>(q - 1)]; }

  const std::vector<std::uint8_t>& flags() const { return flags_; }

  bool operator==(const Connectivity&) const = default;

 private:
  std::vector<std::uint8_t> flags_;
};

struct PureDecayReport {
  bool valid = true;
  std::vector<int> violations;  // every q with a_q != a_{N-q}
};

/// True iff a_q = a_{N-q} for every q; never throws.
inline PureDecayReport validate_pure_decay(const Connectivity& conn) {
  PureDecayReport report;
  const int n = conn.sites();
  for (int q = 1; q < n; ++q) {
    if (conn(q) != conn(n - q)) report.violations.push_back(q);
  }
  report.valid = report.violations.empty();
  return report;
}

inline Connectivity expand_pattern(Pattern pattern, int sites, const Connectivity& custom = {}) {
  if (sites < 2) throw ConfigError("site count must be at least 2, got " + std::to_string(sites));
  const auto len = static_cast<std::size_t>(sites - 1);
  switch (pattern) {
    case Pattern::FCG:
      return Connectivity(std::vector<std::uint8_t>(len, 1));
    case Pattern::HCS: {
      if (sites % 2 != 0) {
        throw ConfigError("HCS requires even site count (got " + std::to_string(sites) + ")");
      }
      std::vector<std::uint8_t> a(len, 0);
      for (std::size_t q = 1; q <= len; q += 2) a[q - 1] = 1;
      return Connectivity(std::move(a));
    }
    case Pattern::Custom: {
      if (custom.flags().size() != len) {
        throw ConfigError("custom connectivity must have " + std::to_string(len) +
                          " entries for " + std::to_string(sites) + " sites, got " +
                          std::to_string(custom.flags().size()));
      }
      bool any = false;
      for (auto f : custom.flags()) {
        if (f > 1) throw ConfigError("connectivity entries must be 0 or 1");
        any = any || f == 1;
      }
      if (!any) throw ConfigError("connectivity must switch on at least one hop distance");
      return custom;
    }
  }
  throw ConfigError("unknown pattern");
}

/// One ring dimension: N sites, a connectivity pattern, the two hopping amplitudes and the
/// gauge index k. t_forward sits on the upper triangle (j > i), t_backward on the lower.
template <typename Real = double>
struct GraphSpec {
  int sites = 2;
  Pattern pattern = Pattern::FCG;
  Connectivity custom;
  Complex<Real> t_forward{1};
  Complex<Real> t_backward{1};
  int gauge = 0;
  /// Exploration override: assemble even when a_q != a_{N-q}.
  bool allow_invalid = false;

  static GraphSpec fcg(int n, Complex<Real> tf, Complex<Real> tb = Complex<Real>(1), int k = 0) {
    return GraphSpec{n, Pattern::FCG, {}, tf, tb, k, false};
  }
  static GraphSpec hcs(int n, Complex<Real> tf, Complex<Real> tb = Complex<Real>(1), int k = 0) {
    return GraphSpec{n, Pattern::HCS, {}, tf, tb, k, false};
  }
  static GraphSpec with_connectivity(Connectivity a, Complex<Real> tf,
                                     Complex<Real> tb = Complex<Real>(1), int k = 0) {
    const int n = a.sites();
    return GraphSpec{n, Pattern::Custom, std::move(a), tf, tb, k, false};
  }

  Connectivity connectivity() const { return expand_pattern(pattern, sites, custom); }

  /// Hopping ratio t = t_forward / t_backward.
  Complex<Real> ratio() const { return t_forward / t_backward; }

  Real theta() const { return Real(2) * pi_v<Real> / Real(sites); }

  /// Principal log of 1/t; a negative real 1/t takes the +i pi side of the cut.
  Complex<Real> log_inverse_ratio() const {
    Complex<Real> inv = Real(1) / ratio();
    if (inv.imag() == Real(0)) inv = Complex<Real>(inv.real(), Real(0));
    return std::log(inv);
  }

  /// Principal N-th root of 1/t, so that r^N = 1/t.
  Complex<Real> decay_root() const { return std::exp(log_inverse_ratio() / Real(sites)); }

  GraphSpec with_gauge(int k) const {
    GraphSpec copy = *this;
    copy.gauge = k;
    return copy;
  }

  GraphSpec scaled(Complex<Real> c) const {
    GraphSpec copy = *this;
    copy.t_forward *= c;
    copy.t_backward *= c;
    return copy;
  }

  /// Throws ConfigError describing the first violated invariant.
  void validate() const {
    const Connectivity a = connectivity();
    if (t_backward == Complex<Real>(0)) throw ConfigError("t_backward must be nonzero");
    if (t_forward == Complex<Real>(0)) throw ConfigError("t_forward must be nonzero");
    const Complex<Real> t = ratio();
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
      throw ConfigError("hopping ratio t_forward/t_backward is not finite");
    }
    if (gauge < 0 || gauge >= sites) {
      throw ConfigError("gauge index must lie in [0, " + std::to_string(sites - 1) + "], got " +
                        std::to_string(gauge));
    }
    if (!allow_invalid) {
      const PureDecayReport report = validate_pure_decay(a);
      if (!report.valid) {
        throw ConfigError("connectivity violates the pure-decay rule a_q = a_{N-q} at q = " +
                          std::to_string(report.violations.front()));
      }
    }
  }

  bool operator==(const GraphSpec&) const = default;
};

namespace detail {

/// e^{i 2 pi m / n} with m reduced mod n first.
template <typename Real>
Complex<Real> unit_root(long long m, int n) {
  long long red = m % n;
  if (red < 0) red += n;
  return std::polar(Real(1), Real(2) * pi_v<Real> * Real(red) / Real(n));
}

}  // namespace detail

/// Gauged ring-Toeplitz Hamiltonian: H_ij = a_d t_forward e^{-i d theta k} for j > i and
/// H_ij = a_d t_backward e^{+i d theta k} for j < i, with d = |j - i| and a zero diagonal.
template <typename Real>
ComplexMatrix<Real> assemble_hamiltonian(const GraphSpec<Real>& spec) {
  spec.validate();
  const int n = spec.sites;
  const Connectivity a = spec.connectivity();
  const int k = spec.gauge;

  std::vector<Complex<Real>> upper(static_cast<std::size_t>(n), Complex<Real>(0));
  std::vector<Complex<Real>> lower(static_cast<std::size_t>(n), Complex<Real>(0));
  for (int d = 1; d < n; ++d) {
    if (a(d) == 0) continue;
    const long long dk = static_cast<long long>(d) * k;
    upper[static_cast<std::size_t>(d)] = spec.t_forward * detail::unit_root<Real>(-dk, n);
    lower[static_cast<std::size_t>(d)] = spec.t_backward * detail::unit_root<Real>(dk, n);
  }

  ComplexMatrix<Real> h = ComplexMatrix<Real>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j > i) h(i, j) = upper[static_cast<std::size_t>(j - i)];
      if (j < i) h(i, j) = lower[static_cast<std::size_t>(i - j)];
    }
  }
  return h;
}

/// D with D_mm = e^{+i (m-1) theta k}; assemble(k) = D assemble(0) D^{-1}.
template <typename Real = double>
ComplexMatrix<Real> gauge_diagonal(int sites, int k) {
  if (sites < 1) throw UsageError("gauge_diagonal needs at least one site");
  ComplexMatrix<Real> d = ComplexMatrix<Real>::Zero(sites, sites);
  for (int m = 0; m < sites; ++m) {
    d(m, m) = detail::unit_root<Real>(static_cast<long long>(m) * k, sites);
  }
  return d;
}

}  // namespace gaugemode
