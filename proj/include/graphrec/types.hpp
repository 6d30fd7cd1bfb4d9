#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace graphrec {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Scalar field of the graph matrix and measurements. Real-mode data is kept
// in complex containers with every imaginary part equal to zero.
enum class Field { Real, Complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid user input or configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Malformed input file; the message carries the file and line number.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Numerical failure (CLI exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// A combinatorial routine refused an input that exceeds its enumeration
// budget (CLI exit code 4).
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

inline void require_config(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace graphrec
