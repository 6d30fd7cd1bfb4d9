#pragma once

#include "graphrec/types.hpp"

namespace graphrec {

// Brute-force matrix diagnostics. All of them enumerate column subsets and
// refuse inputs beyond their guards with SizeGuardError.

inline constexpr int kSparkMaxColumns = 20;
inline constexpr int kRicMaxColumns = 20;
inline constexpr int kXiMaxColumns = 14;
inline constexpr int kXiMaxK = 3;

/// Relative singular-value cutoff for rank decisions.
inline constexpr double kRankTolerance = 1e-9;

/// Smallest number of linearly dependent columns; n + 1 when all columns are
/// independent.
int spark(const CMatrix& B);

/// Restricted isometry constant: the largest deviation of sigma(B_S)^2 from 1
/// over column subsets with |S| <= mu.
double ric(const CMatrix& B, int mu);

struct XiResult {
  double value = 0.0;        // +inf when a singular K x K block was met
  long long singular_blocks = 0;
};

/// max over column sets Sbar (|Sbar| = K) and row sets R (|R| = K) of
/// ||B_S||_2 * ||(B_{R, Sbar})^{-1}||_2, with S the complement of Sbar.
XiResult xi(const CMatrix& B, int K);

}  // namespace graphrec
