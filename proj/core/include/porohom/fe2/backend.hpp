#pragma once

#include "porohom/common/tensor.hpp"
#include "porohom/fem/assembler.hpp"
#include "porohom/micro/micro_solver.hpp"
#include "porohom/nn/mlp.hpp"

#include <atomic>
#include <functional>
#include <string>

namespace porohom::fe2 {

/// Microscale response used at every macroscopic quadrature point.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual Tensor2 stress(const Tensor2& F) const = 0;
  virtual Eigen::MatrixXd tangent(const Tensor2& F) const = 0;

  std::uint64_t stress_calls() const { return stress_calls_.load(); }
  std::uint64_t tangent_calls() const { return tangent_calls_.load(); }

 protected:
  mutable std::atomic<std::uint64_t> stress_calls_{0};
  mutable std::atomic<std::uint64_t> tangent_calls_{0};
};

/// Beam RVE solve per evaluation; tangent by central differences (2 d^2 solves).
class BeamBackend final : public Backend {
 public:
  explicit BeamBackend(rve::BeamNetwork network, double fd_epsilon = 1e-6);
  int dim() const override { return solver_.dim(); }
  std::string name() const override { return "beam"; }
  Tensor2 stress(const Tensor2& F) const override;
  Eigen::MatrixXd tangent(const Tensor2& F) const override;
  const micro::MicroSolver& solver() const { return solver_; }

 private:
  micro::MicroSolver solver_;
  double fd_epsilon_;
};

/// Surrogate evaluation with the exact network Jacobian as tangent.
class NnBackend final : public Backend {
 public:
  explicit NnBackend(nn::MlpModel model);
  int dim() const override { return model_.dim(); }
  std::string name() const override { return "nn"; }
  Tensor2 stress(const Tensor2& F) const override;
  Eigen::MatrixXd tangent(const Tensor2& F) const override;
  const nn::MlpModel& model() const { return model_; }

 private:
  nn::MlpModel model_;
};

/// Observer of the (F, P) pairs produced during residual assembly.
using StressSink = std::function<void(const Tensor2& F, const Tensor2& P)>;

/// Callback for the assembler. The sink sees stress evaluations only, not the
/// perturbed states used inside finite-difference tangents.
fem::ConstitutiveCallback make_callback(const Backend& backend, StressSink sink = {});

}  // namespace porohom::fe2
