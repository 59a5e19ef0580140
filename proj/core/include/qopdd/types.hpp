#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qopdd {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex I{0.0, 1.0};
inline constexpr double PI = 3.141592653589793238462643383279502884;

/// Invalid user-supplied configuration (bad node counts, malformed config files, ...).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Geometry the solver does not support (touching interfaces, infeasible cuts, ...).
class geometry_error : public std::runtime_error {
 public:
  explicit geometry_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: singular interior system, ill-posed configuration, singular point.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace qopdd
