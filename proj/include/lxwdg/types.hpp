#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lxwdg {

inline constexpr int kMaxEqn = 3;
inline constexpr int kMaxModes = 5;
inline constexpr int kMaxSpaceTimeModes = 15;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Conservative or primitive point state; at most three components, stack storage.
using StateVector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxEqn, 1>;
using PrimitiveVector = StateVector;
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxEqn, kMaxEqn>;

/// Per-element Legendre coefficients, row = mode, column = equation.
using CoeffBlock =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxModes, kMaxEqn>;
/// Per-element space-time coefficients of the predicted primitive solution.
using SpaceTimeBlock = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                                     kMaxSpaceTimeModes, kMaxEqn>;

/// A state left the set where a formula is defined (h <= 0, rho <= 0, ...).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A limiter precondition (admissible cell mean) was violated.
class LimiterFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lxwdg
