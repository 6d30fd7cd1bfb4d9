#include "graphrec/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "graphrec/combinations.hpp"

namespace graphrec {

namespace {

CMatrix pick(const CMatrix& B, const std::vector<int>& rows, const std::vector<int>& cols) {
  CMatrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r)
      out(static_cast<Index>(r), static_cast<Index>(c)) = B(rows[r], cols[c]);
  return out;
}

std::vector<int> all_rows(const CMatrix& B) {
  std::vector<int> r(static_cast<std::size_t>(B.rows()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<int>(i);
  return r;
}

void guard(bool ok, const std::string& what) {
  if (!ok) throw SizeGuardError(what);
}

}  // namespace

int spark(const CMatrix& B) {
  const int n = static_cast<int>(B.cols());
  const int m = static_cast<int>(B.rows());
  guard(n <= kSparkMaxColumns, "spark: at most " + std::to_string(kSparkMaxColumns) + " columns");
  const auto rows = all_rows(B);
  for (int k = 1; k <= n; ++k) {
    if (k > m) return k;
    bool dependent = false;
    for_each_combination(n, k, [&](const std::vector<int>& cols) {
      Eigen::JacobiSVD<CMatrix> svd(pick(B, rows, cols));
      const auto& sv = svd.singularValues();
      double smax = sv(0);
      double smin = sv(sv.size() - 1);
      dependent = smax == 0.0 || smin < kRankTolerance * smax;
      return !dependent;
    });
    if (dependent) return k;
  }
  return n + 1;
}

double ric(const CMatrix& B, int mu) {
  const int n = static_cast<int>(B.cols());
  guard(n <= kRicMaxColumns, "ric: at most " + std::to_string(kRicMaxColumns) + " columns");
  require_config(mu >= 1 && mu <= n, "ric: mu must lie in [1, n]");
  // Extreme eigenvalues of Gram matrices are monotone under column inclusion,
  // so subsets of size exactly mu attain the maximum.
  const auto rows = all_rows(B);
  double delta = 0.0;
  for_each_combination(n, mu, [&](const std::vector<int>& cols) {
    CMatrix bs = pick(B, rows, cols);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(bs.adjoint() * bs, Eigen::EigenvaluesOnly);
    const auto& ev = eig.eigenvalues();
    double lo = std::max(0.0, ev(0));
    double hi = ev(ev.size() - 1);
    delta = std::max({delta, hi - 1.0, 1.0 - lo});
    return true;
  });
  return delta;
}

XiResult xi(const CMatrix& B, int K) {
  const int n = static_cast<int>(B.cols());
  const int m = static_cast<int>(B.rows());
  guard(n <= kXiMaxColumns, "xi: at most " + std::to_string(kXiMaxColumns) + " columns");
  guard(K <= kXiMaxK, "xi: K must not exceed " + std::to_string(kXiMaxK));
  require_config(K >= 1 && K <= n && K <= m, "xi: K must lie in [1, min(m, n)]");
  const auto rows = all_rows(B);
  XiResult out;
  for_each_combination(n, K, [&](const std::vector<int>& sbar) {
    auto s = complement(n, sbar);
    double norm_s = 0.0;
    if (!s.empty()) {
      Eigen::JacobiSVD<CMatrix> svd(pick(B, rows, s));
      norm_s = svd.singularValues()(0);
    }
    for_each_combination(m, K, [&](const std::vector<int>& r) {
      Eigen::JacobiSVD<CMatrix> svd(pick(B, r, sbar));
      const auto& sv = svd.singularValues();
      double smin = sv(sv.size() - 1);
      if (sv(0) == 0.0 || smin < kRankTolerance * sv(0)) {
        ++out.singular_blocks;
        out.value = std::numeric_limits<double>::infinity();
      } else {
        out.value = std::max(out.value, norm_s / smin);
      }
      return true;
    });
    return true;
  });
  return out;
}

}  // namespace graphrec
