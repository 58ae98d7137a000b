#include "porohom/solvers/load_stepper.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/timer.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>

namespace porohom::solvers {

std::vector<int> LoadStepReport::accepted_iterations() const {
  std::vector<int> out;
  for (const auto& s : steps) {
    if (s.accepted) out.push_back(s.iterations);
  }
  return out;
}

double LoadStepReport::mean_iterations() const {
  const auto it = accepted_iterations();
  if (it.empty()) return 0.0;
  return static_cast<double>(std::accumulate(it.begin(), it.end(), 0)) / static_cast<double>(it.size());
}

int LoadStepReport::cutbacks() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(), [](const LoadStep& s) { return !s.accepted; }));
}

std::string LoadStepReport::to_json(int indent) const {
  nlohmann::json j;
  j["converged"] = converged;
  j["mean_iterations"] = mean_iterations();
  j["cutbacks"] = cutbacks();
  j["timing"] = {{"total_s", seconds_total},
                 {"residual_s", seconds_residual},
                 {"tangent_s", seconds_tangent},
                 {"linear_s", seconds_linear}};
  auto& arr = j["steps"] = nlohmann::json::array();
  for (const auto& s : steps) {
    nlohmann::json e{{"lambda_start", s.lambda_start},
                     {"lambda_end", s.lambda_end},
                     {"accepted", s.accepted},
                     {"iterations", s.iterations},
                     {"residual_history", s.residual_history}};
    if (!s.failure.empty()) e["failure"] = s.failure;
    if (!s.line_search.empty()) {
      auto& ls = e["line_search"] = nlohmann::json::array();
      for (const auto& w : s.line_search) {
        ls.push_back({{"alpha", w.alpha}, {"phi0", w.phi0}, {"dphi0", w.dphi0}, {"phi", w.phi}, {"dphi", w.dphi},
                      {"evaluations", w.evaluations}});
      }
    }
    arr.push_back(std::move(e));
  }
  return j.dump(indent);
}

LoadStepReport run_load_steps(const SteppedProblem& problem, Eigen::VectorXd u, const LoadStepPolicy& policy) {
  if (!problem.set_load || !problem.solve) throw ValidationError("stepped problem is incomplete");
  if (policy.initial_steps < 1 || !(policy.min_fraction > 0.0) || policy.grow_after < 1) {
    throw ValidationError("invalid load-step policy");
  }
  const auto t0 = std::chrono::steady_clock::now();
  LoadStepReport rep;
  const double initial = 1.0 / policy.initial_steps;
  double increment = initial;
  double lambda = 0.0;
  int streak = 0;
  // Tolerance so that repeated halving of 1/steps lands exactly on the limit.
  const double floor = policy.min_fraction * (1.0 - 1e-12);

  while (lambda < 1.0) {
    const double target = std::min(1.0, lambda + increment);
    LoadStep step;
    step.lambda_start = lambda;
    step.lambda_end = target;
    Eigen::VectorXd trial = u;
    try {
      problem.set_load(target, trial);
      SolveReport r = problem.solve(trial);
      rep.seconds_residual += r.seconds_residual;
      rep.seconds_tangent += r.seconds_tangent;
      rep.seconds_linear += r.seconds_linear;
      step.iterations = r.iterations;
      step.residual_history = std::move(r.residual_history);
      step.line_search = std::move(r.line_search);
      if (!r.converged) throw MaxIterations("inner solve did not converge");
      step.accepted = true;
      u = std::move(r.u);
    } catch (const Error& e) {
      step.failure = e.what();
    }
    const bool ok = step.accepted;
    rep.steps.push_back(std::move(step));
    if (ok) {
      lambda = target;
      if (++streak >= policy.grow_after) {
        increment = std::min(2.0 * increment, initial);
        streak = 0;
      }
    } else {
      streak = 0;
      increment *= 0.5;
      if (increment < floor) {
        rep.u = u;
        rep.seconds_total = seconds_since(t0);
        throw StepTooSmall("load increment fell below " + std::to_string(policy.min_fraction) + " at lambda " +
                           std::to_string(lambda) + ": " + rep.steps.back().failure);
      }
    }
  }
  rep.converged = true;
  rep.u = std::move(u);
  rep.seconds_total = seconds_since(t0);
  return rep;
}

}  // namespace porohom::solvers
