#include "porohom/fe2/backend.hpp"

#include "porohom/common/error.hpp"
#include "porohom/solvers/fd_tangent.hpp"

namespace porohom::fe2 {

BeamBackend::BeamBackend(rve::BeamNetwork network, double fd_epsilon)
    : solver_(std::move(network)), fd_epsilon_(fd_epsilon) {}

Tensor2 BeamBackend::stress(const Tensor2& F) const {
  ++stress_calls_;
  return solver_.stress(F);
}

Eigen::MatrixXd BeamBackend::tangent(const Tensor2& F) const {
  ++tangent_calls_;
  return solvers::fd_constitutive_tangent([this](const Tensor2& G) { return solver_.stress(G); }, F, fd_epsilon_);
}

NnBackend::NnBackend(nn::MlpModel model) : model_(std::move(model)) { model_.validate(); }

Tensor2 NnBackend::stress(const Tensor2& F) const {
  ++stress_calls_;
  return model_.forward(F);
}

Eigen::MatrixXd NnBackend::tangent(const Tensor2& F) const {
  ++tangent_calls_;
  return model_.jacobian(F);
}

fem::ConstitutiveCallback make_callback(const Backend& backend, StressSink sink) {
  fem::ConstitutiveCallback cb;
  if (sink) {
    cb.stress = [&backend, sink = std::move(sink)](const Tensor2& F) {
      Tensor2 P = backend.stress(F);
      sink(F, P);
      return P;
    };
  } else {
    cb.stress = [&backend](const Tensor2& F) { return backend.stress(F); };
  }
  cb.tangent = [&backend](const Tensor2& F) { return backend.tangent(F); };
  return cb;
}

}  // namespace porohom::fe2
