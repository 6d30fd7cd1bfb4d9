#pragma once

#include <doctest.h>

#include "graphrec/types.hpp"

namespace testing {

inline double max_abs_diff(const graphrec::CMatrix& a, const graphrec::CMatrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
