#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gaugemode {

template <typename Real>
using Complex = std::complex<Real>;

/// Dense complex matrix holding an assembled Hamiltonian (column-major, Eigen storage).
template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cd = Complex<double>;
using MatrixXcd = ComplexMatrix<double>;
using VectorXcd = ComplexVector<double>;

/// Invalid graph or experiment configuration (bad pattern/N combination, zero hopping, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Caller passed arguments outside an operation's domain.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure (non-convergence, residual above tolerance).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Real>
inline constexpr Real pi_v = Real(3.141592653589793238462643383279502884L);

}  // namespace gaugemode
