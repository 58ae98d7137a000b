#include "common.hpp"

#include "porohom/app/vtk.hpp"
#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"
#include "porohom/micro/micro_solver.hpp"
#include "porohom/rve/network_io.hpp"

#include <algorithm>
#include <iostream>

namespace porohom::cli {
namespace {

struct MicroArgs {
  std::string net;
  std::string F;
  std::string vtk;
  std::string out;
};

void micro_solve(const MicroArgs& a) {
  const auto network = rve::load_network(a.net);
  const auto F = parse_tensor(a.F);
  if (F.dim() != network.dim)
    throw ValidationError("--F has dimension " + std::to_string(F.dim()) + " but the network is " +
                          std::to_string(network.dim) + "D");
  const micro::MicroSolver solver(network);
  const auto sol = solver.solve(F);
  const auto P = solver.average_stress(sol);
  std::cout << P.to_string(10) << "\n";

  const auto vm = solver.beam_von_mises(sol);
  if (!a.vtk.empty() || !a.out.empty()) {
    Eigen::MatrixXd pos(network.node_count(), 3);
    for (std::size_t n = 0; n < network.node_count(); ++n) {
      pos.row(n) = network.nodes[n].transpose();
      pos.row(n).head(network.dim) += sol.displacements.row(n);
    }
    Eigen::MatrixXd disp = Eigen::MatrixXd::Zero(network.node_count(), 3);
    disp.leftCols(network.dim) = sol.displacements;
    const Eigen::VectorXd vmv = Eigen::Map<const Eigen::VectorXd>(vm.data(), static_cast<Eigen::Index>(vm.size()));
    const auto text = app::vtk_network(network, {{"displacement", disp}}, {{"von_mises", vmv}}, &pos);
    if (!a.vtk.empty()) {
      fs::path p(a.vtk);
      if (p.is_relative() && !a.out.empty()) p = fs::path(a.out) / p;
      if (p.has_parent_path()) fs::create_directories(p.parent_path());
      write_text_file(p, text);
    }
    if (!a.out.empty()) {
      const auto target = resolve_output(a.out, "micro.json");
      json config = {{"net", network.fingerprint()}, {"F", to_vector(F.flat())}};
      auto report = make_report("micro solve", config);
      report["P"] = to_vector(P.flat());
      report["reduced_residual"] = sol.reduced_residual;
      report["max_beam_von_mises"] = vm.empty() ? 0.0 : *std::max_element(vm.begin(), vm.end());
      write_json(target.primary, report);
      if (a.vtk.empty()) write_text_file(target.file("micro.vtk"), text);
    }
  }
}

}  // namespace

void register_micro(CLI::App& app) {
  auto* micro = app.add_subcommand("micro", "Single RVE solves");
  micro->require_subcommand(1);
  auto args = std::make_shared<MicroArgs>();
  auto* solve = micro->add_subcommand("solve", "Average stress of the RVE under a macro F");
  solve->add_option("--net", args->net, "Network file")->required()->check(CLI::ExistingFile);
  solve->add_option("--F", args->F, "Row-major F, 4 or 9 comma-separated values")->required();
  solve->add_option("--vtk", args->vtk, "Deformed network VTK file (relative paths go under --out)");
  solve->add_option("--out", args->out, "Output directory for micro.json and micro.vtk");
  solve->callback([args] { micro_solve(*args); });
}

}  // namespace porohom::cli
