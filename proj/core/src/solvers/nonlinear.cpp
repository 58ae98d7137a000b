#include "porohom/solvers/nonlinear.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/timer.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace porohom::solvers {

struct SparseInverse::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

SparseInverse::SparseInverse(const Eigen::SparseMatrix<double>& A) : impl_(std::make_unique<Impl>()), n_(A.rows()) {
  if (A.rows() != A.cols()) throw ShapeMismatch("tangent must be square");
  Eigen::SparseMatrix<double> M = A;
  M.makeCompressed();
  impl_->lu.compute(M);
  if (impl_->lu.info() != Eigen::Success) throw SingularTangent("tangent factorization failed: " + impl_->lu.lastErrorMessage());
}

SparseInverse::~SparseInverse() = default;

Eigen::VectorXd SparseInverse::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success || !x.allFinite()) throw SingularTangent("tangent solve failed");
  return x;
}

double SolveReport::relative_residual() const {
  if (residual_history.empty()) return 0.0;
  const double r0 = residual_history.front();
  return r0 > 0.0 ? residual_history.back() / r0 : 0.0;
}

// ---------------------------------------------------------------------------

BfgsInverse::BfgsInverse(std::shared_ptr<const SparseInverse> H0, int memory) : H0_(std::move(H0)), memory_(memory) {}

Eigen::VectorXd BfgsInverse::apply(const Eigen::VectorXd& v) const {
  // Two-loop recursion over the stored pairs.
  const std::size_t m = s_.size();
  std::vector<double> a(m);
  Eigen::VectorXd q = v;
  for (std::size_t k = m; k-- > 0;) {
    a[k] = rho_[k] * s_[k].dot(q);
    q -= a[k] * y_[k];
  }
  Eigen::VectorXd r = H0_ ? H0_->solve(q) : q;
  for (std::size_t k = 0; k < m; ++k) {
    const double b = rho_[k] * y_[k].dot(r);
    r += (a[k] - b) * s_[k];
  }
  return r;
}

bool BfgsInverse::update(const Eigen::VectorXd& s, const Eigen::VectorXd& y) {
  const double sy = s.dot(y);
  if (!(sy > 1e-12 * s.norm() * y.norm())) return false;
  if (memory_ > 0 && static_cast<int>(s_.size()) >= memory_) {
    s_.erase(s_.begin());
    y_.erase(y_.begin());
    rho_.erase(rho_.begin());
  }
  s_.push_back(s);
  y_.push_back(y);
  rho_.push_back(1.0 / sy);
  return true;
}

Eigen::MatrixXd BfgsInverse::dense(Eigen::Index n) const {
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index j = 0; j < n; ++j) H.col(j) = apply(Eigen::VectorXd::Unit(n, j));
  return H;
}

// ---------------------------------------------------------------------------

namespace {

struct Trial {
  double alpha = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
  Eigen::VectorXd R;
};

bool converged(double rn, double r0, const SolverConfig& c) {
  return r0 == 0.0 || rn <= c.rel_residual_tol * r0 || rn <= c.abs_residual_tol;
}

Eigen::VectorXd eval_residual(const NonlinearProblem& p, const Eigen::VectorXd& u, SolveReport& rep) {
  ScopedTimer t(rep.seconds_residual);
  ++rep.residual_evaluations;
  return p.residual(u);
}

// Wolfe search on phi(a) = 0.5 ||R(u + a p)||^2. The slope uses the secant model
// K p ~ -R0, so phi'(a) ~ -R(a).R0; evaluations that throw count as phi = inf.
class LineSearch {
 public:
  LineSearch(const NonlinearProblem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& p,
             const Eigen::VectorXd& R0, const WolfeParams& w, SolveReport& rep)
      : problem_(problem), u_(u), p_(p), R0_(R0), w_(w), rep_(rep) {
    phi0_ = 0.5 * R0.squaredNorm();
    dphi0_ = -R0.squaredNorm();
  }

  Trial run(WolfeRecord& record) {
    Trial prev{0.0, phi0_, dphi0_, R0_};
    double a = 1.0;
    bool first = true;
    Trial result;
    while (true) {
      Trial t = eval(a);
      if (!armijo(t) || (!first && t.phi >= prev.phi)) {
        result = zoom(prev, t);
        break;
      }
      if (std::abs(t.dphi) <= -w_.c2 * dphi0_) {
        result = t;
        break;
      }
      if (t.dphi >= 0.0) {
        result = zoom(t, prev);
        break;
      }
      prev = t;
      if (a >= w_.max_step) throw LineSearchFailed("line search: step limit reached without curvature condition");
      a = std::min(2.0 * a, w_.max_step);
      first = false;
    }
    record = {result.alpha, phi0_, dphi0_, result.phi, result.dphi, evaluations_};
    return result;
  }

 private:
  bool armijo(const Trial& t) const { return std::isfinite(t.phi) && t.phi <= phi0_ + w_.c1 * t.alpha * dphi0_; }

  Trial eval(double a) {
    if (++evaluations_ > w_.max_evaluations) {
      throw LineSearchFailed("line search: no Wolfe step within " + std::to_string(w_.max_evaluations) +
                             " evaluations");
    }
    Trial t;
    t.alpha = a;
    try {
      t.R = eval_residual(problem_, u_ + a * p_, rep_);
    } catch (const Error&) {
      t.phi = std::numeric_limits<double>::infinity();
      return t;
    }
    if (!t.R.allFinite()) {
      t.phi = std::numeric_limits<double>::infinity();
      return t;
    }
    t.phi = 0.5 * t.R.squaredNorm();
    t.dphi = -t.R.dot(R0_);
    return t;
  }

  Trial zoom(Trial lo, Trial hi) {
    while (true) {
      const double d = hi.alpha - lo.alpha;
      double a = lo.alpha + 0.5 * d;
      if (std::isfinite(hi.phi)) {
        const double c = (hi.phi - lo.phi - lo.dphi * d) / (d * d);
        if (c > 0.0) {
          const double x = -lo.dphi / (2.0 * c);
          const double lo_b = std::min(0.1 * d, 0.9 * d);
          const double hi_b = std::max(0.1 * d, 0.9 * d);
          a = lo.alpha + std::clamp(x, lo_b, hi_b);
        }
      }
      Trial t = eval(a);
      if (!armijo(t) || t.phi >= lo.phi) {
        hi = std::move(t);
        continue;
      }
      if (std::abs(t.dphi) <= -w_.c2 * dphi0_) return t;
      if (t.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = std::move(t);
    }
  }

  const NonlinearProblem& problem_;
  const Eigen::VectorXd& u_;
  const Eigen::VectorXd& p_;
  const Eigen::VectorXd& R0_;
  const WolfeParams& w_;
  SolveReport& rep_;
  double phi0_ = 0.0;
  double dphi0_ = 0.0;
  int evaluations_ = 0;
};

void check_problem(const NonlinearProblem& p) {
  if (!p.residual) throw ValidationError("nonlinear problem has no residual");
}

}  // namespace

SolveReport bfgs_solve(const NonlinearProblem& problem, Eigen::VectorXd u0, const SolverConfig& config,
                       std::shared_ptr<const SparseInverse> H0) {
  config.validate();
  check_problem(problem);
  SolveReport rep;
  rep.u = std::move(u0);
  const Eigen::Index n = rep.u.size();

  Eigen::VectorXd R = eval_residual(problem, rep.u, rep);
  if (R.size() != n) throw ShapeMismatch("residual size differs from the unknown vector");
  if (!R.allFinite()) throw ConstitutiveError("non-finite residual at the initial guess");
  const double r0 = R.norm();
  rep.residual_history.push_back(r0);
  if (converged(r0, r0, config)) {
    rep.converged = true;
    return rep;
  }

  if (!H0 && problem.tangent) {
    Eigen::SparseMatrix<double> K;
    {
      ScopedTimer t(rep.seconds_tangent);
      K = problem.tangent(rep.u);
    }
    ScopedTimer t(rep.seconds_linear);
    H0 = std::make_shared<const SparseInverse>(K);
  }
  if (H0 && H0->size() != n) throw ShapeMismatch("initial inverse has the wrong size");

  const int memory = n <= config.dense_limit ? 0 : config.lbfgs_memory;
  BfgsInverse H(H0, memory);

  while (rep.iterations < config.max_iterations) {
    Trial step;
    WolfeRecord record;
    Eigen::VectorXd p;
    for (int attempt = 0;; ++attempt) {
      {
        ScopedTimer t(rep.seconds_linear);
        p = -H.apply(R);
      }
      try {
        step = LineSearch(problem, rep.u, p, R, config.wolfe, rep).run(record);
        break;
      } catch (const LineSearchFailed&) {
        // A stale quasi-Newton history can give poor directions; retry once from H0.
        if (attempt > 0 || H.pairs() == 0) throw;
        H = BfgsInverse(H0, memory);
      }
    }
    const Eigen::VectorXd s = step.alpha * p;
    const Eigen::VectorXd y = step.R - R;
    rep.u += s;
    R = std::move(step.R);
    rep.line_search.push_back(record);
    ++rep.iterations;
    rep.residual_history.push_back(R.norm());
    if (converged(rep.residual_history.back(), r0, config)) {
      rep.converged = true;
      return rep;
    }
    if (!H.update(s, y)) ++rep.skipped_updates;
  }
  throw MaxIterations("BFGS did not converge in " + std::to_string(config.max_iterations) +
                      " iterations (relative residual " + std::to_string(rep.relative_residual()) + ")");
}

SolveReport newton_solve(const NonlinearProblem& problem, Eigen::VectorXd u0, const SolverConfig& config) {
  config.validate();
  check_problem(problem);
  if (!problem.tangent) throw MissingTangent("Newton's method needs a tangent");
  SolveReport rep;
  rep.u = std::move(u0);
  Eigen::VectorXd R = eval_residual(problem, rep.u, rep);
  if (R.size() != rep.u.size()) throw ShapeMismatch("residual size differs from the unknown vector");
  if (!R.allFinite()) throw ConstitutiveError("non-finite residual at the initial guess");
  const double r0 = R.norm();
  rep.residual_history.push_back(r0);
  while (!converged(rep.residual_history.back(), r0, config)) {
    if (rep.iterations >= config.max_iterations) {
      throw MaxIterations("Newton did not converge in " + std::to_string(config.max_iterations) +
                          " iterations (relative residual " + std::to_string(rep.relative_residual()) + ")");
    }
    Eigen::SparseMatrix<double> K;
    {
      ScopedTimer t(rep.seconds_tangent);
      K = problem.tangent(rep.u);
    }
    Eigen::VectorXd du;
    {
      ScopedTimer t(rep.seconds_linear);
      du = SparseInverse(K).solve(-R);
    }
    rep.u += du;
    R = eval_residual(problem, rep.u, rep);
    if (!R.allFinite()) throw ConstitutiveError("non-finite residual after a Newton step");
    ++rep.iterations;
    rep.residual_history.push_back(R.norm());
  }
  rep.converged = true;
  return rep;
}

SolveReport solve(const NonlinearProblem& problem, Eigen::VectorXd u0, const SolverConfig& config,
                  std::shared_ptr<const SparseInverse> H0) {
  if (config.method == Method::newton) return newton_solve(problem, std::move(u0), config);
  return bfgs_solve(problem, std::move(u0), config, std::move(H0));
}

}  // namespace porohom::solvers
