#include "porohom/app/run.hpp"

#include "porohom/app/vtk.hpp"
#include "porohom/common/error.hpp"
#include "porohom/common/hash.hpp"
#include "porohom/common/io.hpp"
#include "porohom/common/timer.hpp"
#include "porohom/fem/generators.hpp"
#include "porohom/fem/mesh_io.hpp"
#include "porohom/nn/model_io.hpp"
#include "porohom/rve/network_io.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace porohom::app {

namespace {

int shape_dim(const std::string& shape) {
  if (shape == "square" || shape == "plate1" || shape == "plate5") return 2;
  if (shape == "cube" || shape == "cubehole" || shape == "cylinder") return 3;
  throw ValidationError("unknown shape '" + shape + "'");
}

}  // namespace

std::string to_string(BackendKind k) { return k == BackendKind::beam ? "beam" : "nn"; }

BackendKind backend_from_string(const std::string& s) {
  if (s == "beam") return BackendKind::beam;
  if (s == "nn") return BackendKind::nn;
  throw ParseError("unknown backend '" + s + "' (expected beam or nn)");
}

void RunSpec::validate() const {
  shape_dim(shape);
  if (level < 0) throw ValidationError("refinement level must be non-negative");
  if (backend_file.empty() || !std::filesystem::exists(backend_file)) {
    throw ValidationError("backend file '" + backend_file.string() + "' does not exist");
  }
  solver.validate();
}

std::string RunSpec::canonical() const {
  std::ostringstream os;
  os << std::setprecision(17) << "shape=" << shape << ";element=" << fem::to_string(element) << ";level=" << level
     << ";backend=" << to_string(backend) << ";file=" << backend_file.filename().string()
     << ";solver=" << solvers::to_string(solver.method) << ";tol=" << solver.rel_residual_tol
     << ";fd_eps=" << solver.fd_epsilon << ";load_steps=" << solver.load.initial_steps
     << ";max_iter=" << solver.max_iterations << ";shear=" << load.shear << ";compression=" << load.compression
     << ";torsion=" << load.torsion_degrees << ";shift=" << load.axial_shift;
  return os.str();
}

std::unique_ptr<fe2::Backend> load_backend(BackendKind kind, const std::filesystem::path& file, double fd_epsilon) {
  if (kind == BackendKind::beam) return std::make_unique<fe2::BeamBackend>(rve::load_network(file), fd_epsilon);
  return std::make_unique<fe2::NnBackend>(nn::load_model(file));
}

RunResult run_fe2(const RunSpec& spec) {
  spec.validate();
  const auto backend = load_backend(spec.backend, spec.backend_file, spec.solver.fd_epsilon);
  RunResult r = run_fe2(spec, *backend);
  if (!spec.out_dir.empty()) write_run(spec, r);
  return r;
}

RunResult run_fe2(const RunSpec& spec, const fe2::Backend& backend) {
  const auto t0 = std::chrono::steady_clock::now();
  const int dim = shape_dim(spec.shape);
  if (backend.dim() != dim) {
    throw ValidationError("backend is " + std::to_string(backend.dim()) + "D but shape '" + spec.shape + "' is " +
                          std::to_string(dim) + "D");
  }
  RunResult r;
  r.mesh = fem::generate_mesh(spec.shape, spec.element, spec.level);
  apply_load_case(r.mesh, spec.shape, spec.load);
  r.mesh.validate(true);
  const fem::Assembler A(r.mesh);
  const auto s0 = backend.stress_calls();
  const auto t0c = backend.tangent_calls();
  const auto m0 = micro::MicroSolver::solve_count();
  r.fe2 = fe2::run_fe2(A, backend, spec.solver);
  r.backend_stress_calls = backend.stress_calls() - s0;
  r.backend_tangent_calls = backend.tangent_calls() - t0c;
  r.micro_solves = micro::MicroSolver::solve_count() - m0;
  r.fields = recover_fields(A, r.fe2.u, r.fe2.states);
  r.seconds = seconds_since(t0);
  return r;
}

std::string RunResult::to_json(const RunSpec& spec, int indent) const {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config_hash"] = fnv1a_hex(spec.canonical());
  j["config"] = spec.canonical();
  j["mesh_hash"] = mesh.fingerprint();
  j["shape"] = spec.shape;
  j["element"] = fem::to_string(spec.element);
  j["level"] = spec.level;
  j["dofs"] = mesh.dof_count();
  j["backend"] = to_string(spec.backend);
  j["solver"] = solvers::to_string(spec.solver.method);
  j["backend_stress_calls"] = backend_stress_calls;
  j["backend_tangent_calls"] = backend_tangent_calls;
  j["micro_solves"] = micro_solves;
  j["seconds"] = seconds;
  j["von_mises_definition"] = "sym(P F^T) / det F, nodal values weighted by quadrature w detJ";
  j["solve"] = nlohmann::json::parse(fe2.report.to_json(-1));
  return j.dump(indent);
}

void write_run(const RunSpec& spec, const RunResult& r) {
  std::filesystem::create_directories(spec.out_dir);
  write_text_file(spec.out_dir / "report.json", r.to_json(spec));
  fem::save_mesh(r.mesh, spec.out_dir / "mesh.txt");
  std::vector<VtkArray> points{{"displacement", r.fields.displacement},
                               {"von_mises", Eigen::MatrixXd(r.fields.von_mises)}};
  std::vector<VtkArray> cells{{"von_mises_element", Eigen::MatrixXd(r.fields.element_von_mises)}};
  write_text_file(spec.out_dir / "solution.vtk", vtk_mesh(r.mesh, points, cells, "porohom fe2 " + spec.shape));

  std::ostringstream os;
  os << std::setprecision(17) << "node";
  static const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < r.mesh.dim; ++i) os << ",u_" << axes[i];
  os << ",von_mises\n";
  for (Eigen::Index a = 0; a < r.fields.displacement.rows(); ++a) {
    os << a;
    for (int i = 0; i < r.mesh.dim; ++i) os << ',' << r.fields.displacement(a, i);
    os << ',' << r.fields.von_mises[a] << '\n';
  }
  write_text_file(spec.out_dir / "fields.csv", os.str());

  // One row in the layout of the iteration/timing tables.
  std::ostringstream row;
  row << "shape,element,dofs,backend,solver,load_steps,mean_iterations,cutbacks,seconds\n"
      << spec.shape << ',' << fem::to_string(spec.element) << ',' << r.mesh.dof_count() << ','
      << to_string(spec.backend) << ',' << solvers::to_string(spec.solver.method) << ','
      << r.fe2.report.accepted_iterations().size() << ',' << r.fe2.report.mean_iterations() << ','
      << r.fe2.report.cutbacks() << ',' << r.seconds << '\n';
  write_text_file(spec.out_dir / "iterations.csv", row.str());

  std::ostringstream steps;
  steps << std::setprecision(17) << "step,lambda_start,lambda_end,accepted,iterations,final_residual\n";
  for (std::size_t k = 0; k < r.fe2.report.steps.size(); ++k) {
    const auto& s = r.fe2.report.steps[k];
    steps << k << ',' << s.lambda_start << ',' << s.lambda_end << ',' << (s.accepted ? 1 : 0) << ',' << s.iterations
          << ',' << (s.residual_history.empty() ? 0.0 : s.residual_history.back()) << '\n';
  }
  write_text_file(spec.out_dir / "steps.csv", steps.str());
}

std::pair<fem::MacroMesh, FieldSet> load_run_fields(const std::filesystem::path& dir) {
  fem::MacroMesh mesh = fem::load_mesh(dir / "mesh.txt");
  const std::string text = read_text_file(dir / "fields.csv");
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  FieldSet f;
  const auto nN = static_cast<Eigen::Index>(mesh.node_count());
  f.displacement.resize(nN, mesh.dim);
  f.von_mises.resize(nN);
  Eigen::Index row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (row >= nN) throw ParseError((dir / "fields.csv").string() + ": more rows than mesh nodes");
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError((dir / "fields.csv").string() + ": bad value '" + cell + "'");
      }
    }
    if (static_cast<int>(v.size()) != mesh.dim + 2) throw ParseError((dir / "fields.csv").string() + ": bad row width");
    for (int i = 0; i < mesh.dim; ++i) f.displacement(row, i) = v[static_cast<std::size_t>(1 + i)];
    f.von_mises[row] = v.back();
    ++row;
  }
  if (row != nN) throw ParseError((dir / "fields.csv").string() + ": row count does not match the mesh");
  return {std::move(mesh), std::move(f)};
}

}  // namespace porohom::app
