#include "graphrec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <type_traits>

namespace graphrec {

namespace {

template <typename S>
constexpr bool kComplex = !std::is_same_v<S, double>;

template <typename S>
double re_part(S v) {
  if constexpr (kComplex<S>) return v.real(); else return v;
}

template <typename S>
double im_part(S v) {
  if constexpr (kComplex<S>) return v.imag(); else return 0.0;
}

template <typename S>
S make_scalar(double re, double im) {
  if constexpr (kComplex<S>) {
    return S(re, im);
  } else {
    (void)im;
    return re;
  }
}

template <typename S>
S conj_of(S v) {
  if constexpr (kComplex<S>) return std::conj(v); else return v;
}

double clamp_rule(double v, SignRule r) {
  switch (r) {
    case SignRule::NonNeg: return std::max(v, 0.0);
    case SignRule::NonPos: return std::min(v, 0.0);
    case SignRule::Free: break;
  }
  return v;
}

// Projection onto the polar of the one-dimensional cone given by `r`.
double polar_rule(double v, SignRule r) {
  switch (r) {
    case SignRule::NonNeg: return std::min(v, 0.0);
    case SignRule::NonPos: return std::max(v, 0.0);
    case SignRule::Free: break;
  }
  return 0.0;
}

template <typename S>
S project_cone(S v, const SignCone& c) {
  return make_scalar<S>(clamp_rule(re_part(v), c.re), clamp_rule(im_part(v), c.im));
}

template <typename S>
S project_polar(S v, const SignCone& c) {
  return make_scalar<S>(polar_rule(re_part(v), c.re), polar_rule(im_part(v), c.im));
}

// Projection onto the normal cone of the sign cone at a non-zero point x.
template <typename S>
S project_normal(S d, S x, const SignCone& c, double zero) {
  double re = c.re != SignRule::Free && std::abs(re_part(x)) <= zero ? polar_rule(re_part(d), c.re) : 0.0;
  double im = c.im != SignRule::Free && std::abs(im_part(x)) <= zero ? polar_rule(im_part(d), c.im) : 0.0;
  return make_scalar<S>(re, im);
}

template <typename S>
bool on_cone_boundary(S x, const SignCone& c, double zero) {
  return (c.re != SignRule::Free && std::abs(re_part(x)) <= zero) ||
         (kComplex<S> && c.im != SignRule::Free && std::abs(im_part(x)) <= zero);
}

// Distance from g to the subdifferential of |.| + cone indicator at x.
template <typename S>
double subgradient_distance(S g, S x, const SignCone& c, double zero) {
  if (std::abs(x) <= zero) return std::max(0.0, std::abs(g - project_polar(g, c)) - 1.0);
  S d = g - x / std::abs(x);
  return std::abs(d - project_normal(d, x, c, zero));
}

template <typename S>
S unit_phase(S v) {
  return v / std::abs(v);
}

SignCone cone_at(const SolverOptions& o, Index i) {
  return o.cones.empty() ? SignCone{} : o.cones[static_cast<std::size_t>(i)];
}

template <typename S>
Vec<S> shrink(const Vec<S>& v, double kappa, const SolverOptions& o) {
  Vec<S> z(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    S w = o.cones.empty() ? v(i) : project_cone(v(i), o.cones[static_cast<std::size_t>(i)]);
    double mag = std::abs(w);
    z(i) = mag <= kappa ? S(0.0) : S(w * (1.0 - kappa / mag));
  }
  return z;
}

template <typename S>
Mat<S> select_columns(const Mat<S>& B, const std::vector<Index>& cols) {
  Mat<S> out(B.rows(), static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = B.col(cols[k]);
  return out;
}

template <typename S>
std::vector<Index> support_of(const Vec<S>& x, double zero) {
  std::vector<Index> s;
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) > zero) s.push_back(i);
  return s;
}

// Euclidean projection onto {x : ||B x - a|| <= gamma} given B = U diag(sigma) V^H.
template <typename S>
class BallProjector {
 public:
  BallProjector(const Mat<S>& U, const Eigen::VectorXd& sigma, const Mat<S>& V, const Vec<S>& a,
                double gamma)
      : sigma_(sigma), V_(V), c_(U.adjoint() * a) {
    double perp = (a - U * c_).norm();
    double slack = 1e-9 * a.norm() + 1e-300;
    if (gamma == 0.0) {
      feasible_ = perp <= slack;
      radius_ = 0.0;
    } else {
      feasible_ = perp <= gamma + slack;
      radius_ = std::sqrt(std::max(0.0, gamma * gamma - perp * perp));
    }
  }

  bool feasible() const { return feasible_; }

  Vec<S> project(const Vec<S>& v) const {
    const Index r = sigma_.size();
    if (r == 0) return v;
    Vec<S> p = V_.adjoint() * v;
    Vec<S> t = sigma_.cast<S>().cwiseProduct(p) - c_;
    double phi0 = t.squaredNorm();
    if (phi0 <= radius_ * radius_) return v;
    Vec<S> y(r);
    if (radius_ == 0.0) {
      for (Index i = 0; i < r; ++i) y(i) = c_(i) / sigma_(i);
    } else {
      double lambda = secular_root(t);
      for (Index i = 0; i < r; ++i) {
        y(i) = (p(i) + lambda * sigma_(i) * c_(i)) / (1.0 + lambda * sigma_(i) * sigma_(i));
      }
    }
    return v + V_ * (y - p);
  }

 private:
  // Root of sum_i |t_i|^2 / (1 + lambda s_i^2)^2 = radius^2 by Newton on the
  // reciprocal norm, which is concave and increasing in lambda.
  double secular_root(const Vec<S>& t) const {
    double lambda = 0.0;
    const double target = 1.0 / radius_;
    for (int it = 0; it < 100; ++it) {
      double phi = 0.0, dphi = 0.0;
      for (Index i = 0; i < t.size(); ++i) {
        double s2 = sigma_(i) * sigma_(i);
        double q = 1.0 + lambda * s2;
        double t2 = std::norm(S(t(i)));
        phi += t2 / (q * q);
        dphi += -2.0 * t2 * s2 / (q * q * q);
      }
      double psi = 1.0 / std::sqrt(phi) - target;
      double dpsi = -0.5 * dphi / (phi * std::sqrt(phi));
      if (dpsi <= 0.0) break;
      double step = psi / dpsi;
      lambda = std::max(0.0, lambda - step);
      if (std::abs(step) <= 1e-15 * std::max(1.0, lambda)) break;
    }
    return lambda;
  }

  const Eigen::VectorXd& sigma_;
  const Mat<S>& V_;
  Vec<S> c_;
  double radius_ = 0.0;
  bool feasible_ = true;
};

template <typename S>
double max_violation(const Vec<S>& g, const Vec<S>& x, const SolverOptions& o, double zero) {
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    worst = std::max(worst, subgradient_distance(S(g(i)), S(x(i)), cone_at(o, i), zero));
  }
  return worst;
}

// Lawson iteration for min_w max_i |d_i + (C w)_i|.
template <typename S>
Vec<S> lawson_minimax(const Mat<S>& C, const Vec<S>& d) {
  const Index rows = C.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(rows, 1.0 / static_cast<double>(rows));
  Vec<S> best = Vec<S>::Zero(C.cols());
  double best_max = d.cwiseAbs().maxCoeff();
  for (int it = 0; it < 60; ++it) {
    Eigen::VectorXd sw = w.cwiseSqrt();
    Mat<S> wc = sw.cast<S>().asDiagonal() * C;
    Vec<S> wd = sw.cast<S>().cwiseProduct(d);
    Vec<S> sol = wc.completeOrthogonalDecomposition().solve(-wd);
    Eigen::VectorXd e = (d + C * sol).cwiseAbs();
    double emax = e.maxCoeff();
    if (emax < best_max) {
      best_max = emax;
      best = sol;
    }
    double total = w.dot(e);
    if (!(total > 0.0)) break;
    w = w.cwiseProduct(e) / total;
  }
  return best;
}

template <typename S>
bool certify_impl(const Mat<S>& B, const Vec<S>& a, const Vec<S>& x, const SolverOptions& o,
                  const Vec<S>* nu_hint) {
  const Index n = B.cols();
  const double gamma = o.gamma;
  Vec<S> r = a - B * x;
  const double rn = r.norm();
  const double anorm = a.norm();
  if (rn > gamma * (1.0 + 1e-7) + 1e-8 * std::max(1.0, anorm)) return false;

  const double xmax = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  const double zero = 1e-10 * xmax;
  for (Index i = 0; i < n; ++i) {
    S xi = x(i);
    if (std::abs(xi - project_cone(xi, cone_at(o, i))) > 1e-10 * std::max(1.0, xmax)) return false;
  }
  if (xmax == 0.0) {
    // x = 0 is optimal exactly when it is feasible.
    return true;
  }

  std::vector<Index> interior;
  for (Index i = 0; i < n; ++i) {
    if (std::abs(x(i)) > zero && !on_cone_boundary(S(x(i)), cone_at(o, i), zero)) interior.push_back(i);
  }

  const double tol = o.certificate_tol;
  auto passes = [&](const Vec<S>& nu) {
    Vec<S> g = B.adjoint() * nu;
    return max_violation<S>(g, x, o, zero) <= tol;
  };

  if (gamma > 0.0) {
    if (rn < gamma * (1.0 - 1e-6)) return false;  // inactive ball forces x = 0
    Vec<S> g = B.adjoint() * r;
    double num = 0.0, den = 0.0;
    for (Index i : interior) {
      S gi = g(i);
      num += re_part(S(conj_of(gi) * unit_phase(S(x(i)))));
      den += std::norm(gi);
    }
    if (den <= 0.0 || num <= 0.0) return false;
    Vec<S> nu = (num / den) * r;
    return passes(nu);
  }

  const Index m = B.rows();
  if (interior.empty()) return passes(Vec<S>::Zero(m));

  Mat<S> bt = select_columns<S>(B, interior).adjoint();
  Vec<S> phase(static_cast<Index>(interior.size()));
  for (std::size_t k = 0; k < interior.size(); ++k) phase(static_cast<Index>(k)) = unit_phase(S(x(interior[k])));

  Eigen::JacobiSVD<Mat<S>> svd(bt, Eigen::ComputeFullV | Eigen::ComputeFullU);
  svd.setThreshold(1e-12);
  Vec<S> nu0 = svd.solve(phase);
  if (passes(nu0)) return true;

  const Index rank = svd.rank();
  if (rank >= m) return false;
  Mat<S> null = svd.matrixV().rightCols(m - rank);

  if (nu_hint != nullptr) {
    Vec<S> w = null.adjoint() * (*nu_hint - nu0);
    if (passes(Vec<S>(nu0 + null * w))) return true;
  }

  std::vector<Index> off;
  for (Index i = 0; i < n; ++i)
    if (std::find(interior.begin(), interior.end(), i) == interior.end()) off.push_back(i);
  if (off.empty()) return false;
  Mat<S> boff = select_columns<S>(B, off).adjoint();
  Mat<S> C = boff * null;
  Vec<S> d = boff * nu0;
  Vec<S> w = lawson_minimax<S>(C, d);
  return passes(Vec<S>(nu0 + null * w));
}

// Refinement on the support of an ADMM iterate: exact solve on the support
// for gamma = 0, the minimizer of the linearized objective over the ball for
// gamma > 0.
template <typename S>
std::optional<Vec<S>> polish(const Mat<S>& B, const Vec<S>& a, const Vec<S>& z, const SolverOptions& o,
                             Index rank) {
  const Index n = B.cols();
  std::vector<Index> supp = support_of<S>(z, 0.0);
  if (supp.empty()) return Vec<S>::Zero(n);
  if (static_cast<Index>(supp.size()) > rank) return std::nullopt;

  auto solve_on = [&](const std::vector<Index>& s) -> std::optional<Vec<S>> {
    Mat<S> bs = select_columns<S>(B, s);
    Eigen::ColPivHouseholderQR<Mat<S>> qr(bs);
    qr.setThreshold(1e-11);
    if (qr.rank() < static_cast<Index>(s.size())) return std::nullopt;
    Vec<S> xs = qr.solve(a);
    if (o.gamma > 0.0) {
      double rls = (bs * xs - a).norm();
      double rad2 = o.gamma * o.gamma - rls * rls;
      if (rad2 <= 0.0) return std::nullopt;
      Vec<S> phase(static_cast<Index>(s.size()));
      for (std::size_t k = 0; k < s.size(); ++k) phase(static_cast<Index>(k)) = unit_phase(S(z(s[k])));
      Mat<S> gram = bs.adjoint() * bs;
      Vec<S> y = gram.ldlt().solve(phase);
      double q = re_part(S(phase.dot(y)));
      if (!(q > 0.0)) return std::nullopt;
      xs -= (std::sqrt(rad2) / std::sqrt(q)) * y;
    }
    Vec<S> x = Vec<S>::Zero(n);
    for (std::size_t k = 0; k < s.size(); ++k) x(s[k]) = xs(static_cast<Index>(k));
    return x;
  };

  auto x = solve_on(supp);
  if (!x) return std::nullopt;
  double xmax = x->cwiseAbs().maxCoeff();
  std::vector<Index> trimmed = support_of<S>(*x, 1e-10 * xmax);
  if (trimmed.size() < supp.size()) {
    x = trimmed.empty() ? std::optional<Vec<S>>(Vec<S>::Zero(n)) : solve_on(trimmed);
    if (!x) return std::nullopt;
    xmax = x->size() > 0 ? x->cwiseAbs().maxCoeff() : 0.0;
  }
  if (!o.cones.empty()) {
    for (Index i = 0; i < n; ++i) {
      S xi = (*x)(i);
      S pi = project_cone(xi, o.cones[static_cast<std::size_t>(i)]);
      if (std::abs(xi - pi) > 1e-9 * std::max(1.0, xmax)) return std::nullopt;
      (*x)(i) = pi;
    }
  }
  return x;
}

template <typename S>
double l1_norm(const Vec<S>& x) {
  return x.cwiseAbs().sum();
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::MaxIters: return "max_iters";
    case SolveStatus::Infeasible: return "infeasible";
  }
  return "?";
}

void SolverOptions::validate(Index n) const {
  require_config(gamma >= 0.0, "solver: gamma must be non-negative");
  require_config(max_iters >= 1, "solver: max_iters must be positive");
  require_config(tol > 0.0 && certificate_tol > 0.0, "solver: tolerances must be positive");
  require_config(relaxation > 0.0 && relaxation < 2.0, "solver: relaxation must lie in (0, 2)");
  require_config(rho >= 0.0, "solver: rho must be non-negative");
  require_config(polish_every >= 1, "solver: polish_every must be positive");
  require_config(cones.empty() || static_cast<Index>(cones.size()) == n,
                 "solver: one sign cone per entry is required");
}

template <typename S>
L1Solver<S>::L1Solver(Mat<S> B) : B_(std::move(B)) {
  if (B_.rows() == 0 || B_.cols() == 0) throw ShapeError("L1Solver: empty matrix");
  Eigen::BDCSVD<Mat<S>> svd(B_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Index r = 0;
  const double cutoff = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  U_ = svd.matrixU().leftCols(r);
  V_ = svd.matrixV().leftCols(r);
  sigma_ = sv.head(r);
}

template <typename S>
SolveReport<S> L1Solver<S>::solve(const Vec<S>& a, const SolverOptions& opts) const {
  const Index n = B_.cols();
  opts.validate(n);
  if (a.size() != B_.rows()) throw ShapeError("solve_l1: right-hand side length must equal m");

  SolveReport<S> rep;
  auto finish = [&](Vec<S> x, SolveStatus st, int iters, bool polished) {
    rep.residual = (B_ * x - a).norm();
    rep.objective = l1_norm<S>(x);
    rep.x = std::move(x);
    rep.status = st;
    rep.iterations = iters;
    rep.polished = polished;
    return rep;
  };

  if (a.norm() <= opts.gamma) return finish(Vec<S>::Zero(n), SolveStatus::Optimal, 0, false);

  BallProjector<S> proj(U_, sigma_, V_, a, opts.gamma);
  Vec<S> x = proj.project(Vec<S>::Zero(n));
  if (!proj.feasible()) return finish(x, SolveStatus::Infeasible, 0, false);

  double rho = opts.rho;
  if (rho <= 0.0) {
    double scale = l1_norm<S>(x) / static_cast<double>(n);
    rho = scale > 0.0 ? 1.0 / scale : 1.0;
  }
  const double alpha = opts.relaxation;
  Vec<S> z = x;
  Vec<S> u = Vec<S>::Zero(n);
  Vec<S> z_old;
  std::vector<Index> last_support;
  bool tried_support = false;

  auto try_certify = [&](const Vec<S>& cand) {
    Vec<S> nu_hint;
    const Vec<S>* hint = nullptr;
    if (opts.gamma == 0.0 && sigma_.size() > 0) {
      Vec<S> g = rho * u;
      nu_hint = U_ * (V_.adjoint() * g).cwiseQuotient(sigma_.cast<S>());
      hint = &nu_hint;
    }
    return certify_impl<S>(B_, a, cand, opts, hint);
  };

  const double abs_floor = 1e-14 * std::sqrt(static_cast<double>(n)) * std::max(1.0, x.norm());
  int k = 0;
  for (k = 1; k <= opts.max_iters; ++k) {
    x = proj.project(z - u);
    Vec<S> xh = alpha * x + (1.0 - alpha) * z;
    z_old = z;
    z = shrink<S>(xh + u, 1.0 / rho, opts);
    u += xh - z;

    const double r_norm = (x - z).norm();
    const double s_norm = rho * (z - z_old).norm();
    const double eps_pri = opts.tol * std::max(x.norm(), z.norm()) + abs_floor;
    const double eps_dual = opts.tol * rho * u.norm() + abs_floor;
    const bool converged = r_norm <= eps_pri && s_norm <= eps_dual;

    if (converged || k % opts.polish_every == 0 || k == 10) {
      std::vector<Index> supp = support_of<S>(z, 0.0);
      bool fresh = !tried_support || supp != last_support || opts.gamma > 0.0;
      if (fresh || converged || k % (20 * opts.polish_every) == 0) {
        last_support = supp;
        tried_support = true;
        if (auto p = polish<S>(B_, a, z, opts, sigma_.size())) {
          if (try_certify(*p)) return finish(std::move(*p), SolveStatus::Optimal, k, true);
        }
        if (converged && try_certify(z)) return finish(z, SolveStatus::Optimal, k, false);
      }
    }

    if (k % 10 == 0) {
      if (r_norm > 10.0 * s_norm) {
        rho *= 2.0;
        u /= 2.0;
      } else if (s_norm > 10.0 * r_norm) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }

  const double gap = (x - z).norm();
  if (!opts.cones.empty() && gap > 1e-6 * std::max(1.0, z.norm())) {
    return finish(x, SolveStatus::Infeasible, opts.max_iters, false);
  }
  return finish(z, SolveStatus::MaxIters, opts.max_iters, false);
}

template <typename S>
SolveReport<S> solve_l1(const Mat<S>& B, const Vec<S>& a, const SolverOptions& opts) {
  return L1Solver<S>(B).solve(a, opts);
}

template <typename S>
bool certify_l1(const Mat<S>& B, const Vec<S>& a, const Vec<S>& x, const SolverOptions& opts) {
  if (a.size() != B.rows() || x.size() != B.cols()) throw ShapeError("certify_l1: shape mismatch");
  opts.validate(B.cols());
  return certify_impl<S>(B, a, x, opts, nullptr);
}

template <typename S>
SquareSolution<S> solve_square(const Mat<S>& Bsq, const Vec<S>& rhs) {
  if (Bsq.rows() != Bsq.cols()) throw ShapeError("solve_square: matrix must be square");
  if (rhs.size() != Bsq.rows()) throw ShapeError("solve_square: right-hand side has wrong length");
  SquareSolution<S> out;
  if (Bsq.rows() == 0) return out;
  Eigen::PartialPivLU<Mat<S>> lu(Bsq);
  double rcond = lu.rcond();
  out.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(out.condition <= kSingularCondition)) {
    throw SingularError("solve_square: matrix is numerically singular (condition estimate " +
                        std::to_string(out.condition) + ")");
  }
  out.x = lu.solve(rhs);
  return out;
}

template class L1Solver<double>;
template class L1Solver<cplx>;
template SolveReport<double> solve_l1(const Mat<double>&, const Vec<double>&, const SolverOptions&);
template SolveReport<cplx> solve_l1(const Mat<cplx>&, const Vec<cplx>&, const SolverOptions&);
template bool certify_l1(const Mat<double>&, const Vec<double>&, const Vec<double>&, const SolverOptions&);
template bool certify_l1(const Mat<cplx>&, const Vec<cplx>&, const Vec<cplx>&, const SolverOptions&);
template SquareSolution<double> solve_square(const Mat<double>&, const Vec<double>&);
template SquareSolution<cplx> solve_square(const Mat<cplx>&, const Vec<cplx>&);

}  // namespace graphrec
