#include "common.hpp"

#include "porohom/app/benchmark.hpp"
#include "porohom/app/run.hpp"
#include "porohom/app/vtk.hpp"
#include "porohom/fem/generators.hpp"
#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"
#include "porohom/nn/model_io.hpp"
#include "porohom/rve/network_io.hpp"

#include <iomanip>
#include <iostream>

namespace porohom::cli {
namespace {

struct Fe2Args {
  std::string shape = "square";
  std::string elem = "P1";
  int level = 0;
  std::string backend = "beam";
  std::string net;
  std::string weights;
  std::string solver = "bfgs";
  double tol = 1e-10;
  double fd_eps = 1e-6;
  int load_steps = 4;
  int max_iter = 100;
  app::LoadCaseOptions load;
  std::string out;
};

void fe2(const Fe2Args& a) {
  app::RunSpec spec;
  spec.shape = a.shape;
  spec.element = fem::element_type_from_string(a.elem);
  spec.level = a.level;
  spec.backend = app::backend_from_string(a.backend);
  spec.backend_file = spec.backend == app::BackendKind::beam ? a.net : a.weights;
  if (spec.backend_file.empty())
    throw ValidationError(spec.backend == app::BackendKind::beam ? "--backend beam needs --net" : "--backend nn needs --weights");
  spec.solver.method = solvers::method_from_string(a.solver);
  spec.solver.rel_residual_tol = a.tol;
  spec.solver.fd_epsilon = a.fd_eps;
  spec.solver.load.initial_steps = a.load_steps;
  spec.solver.max_iterations = a.max_iter;
  spec.load = a.load;
  spec.out_dir = a.out;
  fs::create_directories(spec.out_dir);

  const auto r = app::run_fe2(spec);
  const auto& rep = r.fe2.report;
  std::cout << spec.shape << " " << a.elem << " (" << r.mesh.dof_count() << " DOFs), " << a.backend << " backend, "
            << a.solver << ": " << (rep.converged ? "converged" : "FAILED") << ", iterations per step [";
  const auto its = rep.accepted_iterations();
  for (std::size_t k = 0; k < its.size(); ++k) std::cout << (k ? " " : "") << its[k];
  std::cout << "], " << rep.cutbacks() << " cutbacks, " << std::fixed << std::setprecision(2) << r.seconds
            << " s -> " << spec.out_dir.string() << "\n";
}

void compare(const std::string& run_a, const std::string& run_b, const std::string& out) {
  const auto [mesh_a, fa] = app::load_run_fields(run_a);
  const auto [mesh_b, fb] = app::load_run_fields(run_b);
  const auto c = app::compare_fields(mesh_a, fa, mesh_b, fb);
  std::cout << std::scientific << std::setprecision(3) << "u L2 " << c.u_l2 << "  u max " << c.u_max << "  vM L2 "
            << c.vm_l2 << "  vM max " << c.vm_max << "\n";
  if (out.empty()) return;
  const auto target = resolve_output(out, "comparison.json");
  json config = {{"run_a", run_a}, {"run_b", run_b}, {"mesh", mesh_a.fingerprint()}};
  auto report = make_report("compare", config);
  report["norms"] = json::parse(c.to_json(-1));
  write_json(target.primary, report);
  write_text_file(target.file("comparison.csv"), c.to_csv());
  const std::vector<app::VtkArray> points{{"displacement_difference", c.displacement_difference},
                                          {"von_mises_difference", Eigen::MatrixXd(c.von_mises_difference)}};
  write_text_file(target.file("difference.vtk"), app::vtk_mesh(mesh_a, points, {}, "porohom comparison"));
}

struct BenchArgs {
  std::string net;
  std::string weights;
  std::string arch;
  int n = 100;
  std::uint64_t seed = 1;
  double amplitude = 0.1;
  std::string out;
};

void bench(const BenchArgs& a) {
  const auto network = rve::load_network(a.net);
  nn::MlpModel model = [&] {
    if (!a.weights.empty()) return nn::load_model(a.weights, network.dim);
    // Untrained model of the requested size: evaluation cost does not depend on the weights.
    const auto widths = parse_widths(a.arch.empty() ? (network.dim == 2 ? "128,256,128" : "512,512") : a.arch);
    nn::MlpModel m(network.dim, widths, nn::Activation::gelu);
    m.initialize(a.seed);
    return m;
  }();
  const auto r = app::benchmark_backends(network, model, a.n, a.seed, a.amplitude);
  std::cout << network.dim << "D, " << r.beam_elements << " beams, " << r.evaluations << " evaluations\n"
            << std::scientific << std::setprecision(3) << "  beam (cold) median " << r.beam_median
            << " s\n  beam (warm) median " << r.beam_warm_median << " s\n  nn median          " << r.nn_median
            << " s\n" << std::fixed << std::setprecision(1) << "  speedup " << r.speedup << "x (warm "
            << r.warm_speedup << "x)\n";
  if (a.out.empty()) return;
  const auto target = resolve_output(a.out, "bench.json");
  json config = {{"net", network.fingerprint()}, {"weights", a.weights}, {"arch", a.arch},
                 {"n", a.n},                     {"seed", a.seed},       {"amplitude", a.amplitude}};
  auto report = make_report("bench", config);
  report["result"] = json::parse(r.to_json(-1));
  write_json(target.primary, report);
}

}  // namespace

void register_fe2(CLI::App& app) {
  auto a = std::make_shared<Fe2Args>();
  auto* f = app.add_subcommand("fe2", "Two-scale macro solve with a beam or NN constitutive backend");
  f->add_option("--shape", a->shape, "Geometry")->check(CLI::IsMember(fem::shape_names()));
  f->add_option("--elem", a->elem, "Element type")->check(CLI::IsMember({"P1", "P2", "Q1"}));
  f->add_option("--level,--refine", a->level, "Refinement level")->check(CLI::NonNegativeNumber);
  f->add_option("--backend", a->backend, "Constitutive backend")->check(CLI::IsMember({"beam", "nn"}));
  f->add_option("--net", a->net, "Network file (beam backend)");
  f->add_option("--weights", a->weights, "Weight file (nn backend)");
  f->add_option("--solver", a->solver, "Nonlinear solver")->check(CLI::IsMember({"bfgs", "newton"}));
  f->add_option("--tol", a->tol, "Relative residual tolerance");
  f->add_option("--fd-eps", a->fd_eps, "Finite-difference step of the beam tangent");
  f->add_option("--load-steps", a->load_steps, "Initial number of load steps")->check(CLI::PositiveNumber);
  f->add_option("--max-iter", a->max_iter, "Iteration limit per load step")->check(CLI::PositiveNumber);
  f->add_option("--shear", a->load.shear, "Square: top-edge shear");
  f->add_option("--compression", a->load.compression, "Plates: top-edge compression");
  f->add_option("--torsion", a->load.torsion_degrees, "3D shapes: end-face twist in degrees");
  f->add_option("--shift", a->load.axial_shift, "3D shapes: axial end-face shift");
  f->add_option("--out", a->out, "Output directory")->required();
  f->callback([a] { fe2(*a); });

  auto ra = std::make_shared<std::string>();
  auto rb = std::make_shared<std::string>();
  auto co = std::make_shared<std::string>();
  auto* c = app.add_subcommand("compare", "Relative field norms of run A against reference run B");
  c->add_option("run_a", *ra, "Run directory")->required()->check(CLI::ExistingDirectory);
  c->add_option("run_b", *rb, "Reference run directory")->required()->check(CLI::ExistingDirectory);
  c->add_option("--out", *co, "Output directory");
  c->callback([ra, rb, co] { compare(*ra, *rb, *co); });

  auto b = std::make_shared<BenchArgs>();
  auto* be = app.add_subcommand("bench", "Stress evaluation time of the beam RVE against the NN");
  be->add_option("--net", b->net, "Network file")->required()->check(CLI::ExistingFile);
  be->add_option("--weights", b->weights, "Weight file; without it an untrained model of --arch is timed");
  be->add_option("--arch", b->arch, "Hidden widths of the untrained model");
  be->add_option("--n", b->n, "Evaluations per backend")->check(CLI::PositiveNumber);
  be->add_option("--seed", b->seed, "Sampling seed");
  be->add_option("--amplitude", b->amplitude, "F = I + U[-a, a]");
  be->add_option("--out", b->out, "Output directory");
  be->callback([b] { bench(*b); });
}

}  // namespace porohom::cli
