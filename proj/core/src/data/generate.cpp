#include "porohom/data/generate.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/random.hpp"
#include "porohom/common/timer.hpp"
#include "porohom/fe2/driver.hpp"
#include "porohom/fem/generators.hpp"

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>
#include <unordered_set>

namespace porohom::data {

std::string to_string(Family f) {
  switch (f) {
    case Family::uniaxial_x: return "uniaxial_x";
    case Family::uniaxial_y: return "uniaxial_y";
    case Family::shear_x: return "shear_x";
    case Family::shear_y: return "shear_y";
    case Family::equibiaxial: return "equibiaxial";
    case Family::rotate_stretch: return "rotate_stretch";
    case Family::transverse_shift: return "transverse_shift";
  }
  return "unknown";
}

namespace {

constexpr double kLx = 1.0;
constexpr double kLy = 1.25;

Eigen::Matrix2d rotation(double a) {
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

void prescribe(fem::MacroMesh& mesh, const std::vector<int>& nodes, const auto& displacement) {
  for (int a : nodes) {
    const Eigen::VectorXd X = mesh.nodes.row(a).transpose();
    const Eigen::VectorXd u = displacement(X);
    for (int i = 0; i < mesh.dim; ++i) mesh.dirichlet.push_back({a, i, u[i]});
  }
}

// Keeps the first occurrence of every F, bit for bit.
class Harvest {
 public:
  explicit Harvest(bool dedupe) : dedupe_(dedupe) {}

  void add(Dataset& ds, const std::vector<Sample>& batch, GenerationReport& rep) {
    for (const auto& s : batch) {
      ++rep.harvested;
      if (dedupe_) {
        std::string key(static_cast<std::size_t>(s.F.size()) * sizeof(double), '\0');
        const Eigen::VectorXd f = s.F.flat();
        std::memcpy(key.data(), f.data(), key.size());
        if (!seen_.insert(std::move(key)).second) {
          ++rep.duplicates;
          continue;
        }
      }
      ds.samples.push_back(s);
    }
  }

 private:
  bool dedupe_;
  std::unordered_set<std::string> seen_;
};

void finish(Dataset& ds, std::uint64_t seed, double fraction, bool dedupe, const rve::BeamNetwork& network,
            const GenerationReport& rep) {
  ds.metadata["network_fingerprint"] = network.fingerprint();
  ds.metadata["seed"] = std::to_string(seed);
  ds.metadata["deduplicated"] = dedupe ? "exact-F" : "no";
  ds.metadata["harvested"] = std::to_string(rep.harvested);
  ds.metadata["duplicates_removed"] = std::to_string(rep.duplicates);
  ds.metadata["failed_runs"] = std::to_string(rep.failed);
  assign_split(ds, seed ^ 0xA5A5A5A5ULL, fraction);
}

}  // namespace

fem::MacroMesh case_mesh(const BoundaryCase& bc) {
  fem::MacroMesh mesh = fem::rectangle_mesh(4, 5, fem::ElementType::Q1, kLx, kLy);
  mesh.dirichlet.clear();
  const auto left = mesh.nodes_on_plane(0, 0.0);
  const auto right = mesh.nodes_on_plane(0, kLx);
  const auto bottom = mesh.nodes_on_plane(1, 0.0);
  const auto top = mesh.nodes_on_plane(1, kLy);
  const double m = bc.magnitude;

  Eigen::Matrix2d H0 = Eigen::Matrix2d::Zero();
  std::vector<const std::vector<int>*> edges;
  switch (bc.family) {
    case Family::uniaxial_x: H0(0, 0) = 1.0; edges = {&left, &right}; break;
    case Family::uniaxial_y: H0(1, 1) = 1.0; edges = {&bottom, &top}; break;
    case Family::shear_x: H0(0, 1) = 1.0; edges = {&bottom, &top}; break;
    case Family::shear_y: H0(1, 0) = 1.0; edges = {&left, &right}; break;
    case Family::equibiaxial: H0.setIdentity(); edges = {&left, &right, &bottom, &top}; break;
    case Family::rotate_stretch:
    case Family::transverse_shift: break;
  }

  if (!edges.empty()) {
    const Eigen::Matrix2d R = rotation(bc.angle);
    const Eigen::Matrix2d H = m * R * H0 * R.transpose();
    // Nodes shared by two edges are prescribed once.
    std::vector<char> done(mesh.node_count(), 0);
    for (const auto* e : edges) {
      std::vector<int> fresh;
      for (int a : *e) {
        if (!done[static_cast<std::size_t>(a)]) fresh.push_back(a);
        done[static_cast<std::size_t>(a)] = 1;
      }
      prescribe(mesh, fresh, [&](const Eigen::VectorXd& X) { return Eigen::VectorXd(H * X); });
    }
  } else {
    prescribe(mesh, left, [](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::Vector2d::Zero()); });
    if (bc.family == Family::rotate_stretch) {
      const Eigen::Vector2d c(kLx, 0.5 * kLy);
      const Eigen::Matrix2d R = rotation(m);
      prescribe(mesh, right, [&](const Eigen::VectorXd& X) {
        const Eigen::Vector2d x = X;
        return Eigen::VectorXd((R - Eigen::Matrix2d::Identity()) * (x - c) + Eigen::Vector2d(m * kLx, 0.0));
      });
    } else {
      prescribe(mesh, right, [&](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::Vector2d(0.0, m * kLx)); });
    }
  }
  mesh.validate(true);
  return mesh;
}

Dataset generate_2d(const rve::BeamNetwork& network, const Gen2dConfig& config, GenerationReport* report,
                    const GenerationProgress& progress) {
  if (config.simulations < 1) throw ValidationError("at least one simulation is required");
  Rng rng(config.seed);
  std::vector<BoundaryCase> cases;
  for (int i = 0; i < config.simulations; ++i) {
    BoundaryCase bc;
    bc.family = static_cast<Family>(i % kFamilyCount);
    bc.magnitude = rng.uniform(-config.max_magnitude, config.max_magnitude);
    bc.angle = rng.uniform(0.0, std::numbers::pi);
    cases.push_back(bc);
  }
  Dataset ds = generate_2d_cases(network, cases, config, report, progress);
  std::ostringstream os;
  os << config.max_magnitude;
  ds.metadata["max_magnitude"] = os.str();
  return ds;
}

Dataset generate_2d_cases(const rve::BeamNetwork& network, const std::vector<BoundaryCase>& cases,
                          const Gen2dConfig& config, GenerationReport* report, const GenerationProgress& progress) {
  if (network.dim != 2) throw ValidationError("2D data generation needs a 2D network");
  const auto t0 = std::chrono::steady_clock::now();
  fe2::BeamBackend backend(network, config.solver.fd_epsilon);
  Dataset ds;
  ds.dim = 2;
  GenerationReport rep;
  Harvest harvest(config.deduplicate);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const fem::Assembler A(case_mesh(cases[i]));
    std::vector<Sample> batch;
    ++rep.runs;
    try {
      fe2::run_fe2(A, backend, config.solver, [&](const Tensor2& F, const Tensor2& P) { batch.push_back({F, P}); },
                   nullptr, {}, false);
      harvest.add(ds, batch, rep);
    } catch (const Error& e) {
      ++rep.failed;
      rep.failures.push_back("case " + std::to_string(i) + " (" + to_string(cases[i].family) + "): " + e.what());
    }
    if (progress) progress(static_cast<int>(i + 1), static_cast<int>(cases.size()), ds.size());
  }
  ds.metadata["protocol"] = "2d-families";
  ds.metadata["simulations"] = std::to_string(cases.size());
  finish(ds, config.seed, config.validation_fraction, config.deduplicate, network, rep);
  rep.seconds = seconds_since(t0);
  if (report) *report = rep;
  return ds;
}

solvers::SolverConfig Gen3dConfig::default_3d_solver() {
  solvers::SolverConfig c;
  c.load.initial_steps = 1;
  return c;
}

Dataset generate_3d(const rve::BeamNetwork& network, const Gen3dConfig& config, GenerationReport* report,
                    const GenerationProgress& progress) {
  if (config.samples < 1) throw ValidationError("at least one sample is required");
  Rng rng(config.seed);
  // Latin hypercube per entry: marginals stay uniform on [-a, a] but each
  // entry covers all n strata, so sample means do not drift with small n.
  const auto n = static_cast<std::size_t>(config.samples);
  std::vector<Tensor2> H(n, Tensor2(3));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      const auto strata = rng.permutation(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double u = (static_cast<double>(strata[i]) + rng.uniform()) / static_cast<double>(n);
        H[i](r, c) = config.amplitude * (2.0 * u - 1.0);
      }
    }
  }
  Dataset ds = generate_3d_cases(network, H, config, report, progress);
  std::ostringstream os;
  os << config.amplitude;
  ds.metadata["amplitude"] = os.str();
  return ds;
}

Dataset generate_3d_cases(const rve::BeamNetwork& network, const std::vector<Tensor2>& H, const Gen3dConfig& config,
                          GenerationReport* report, const GenerationProgress& progress) {
  if (network.dim != 3) throw ValidationError("3D data generation needs a 3D network");
  const auto t0 = std::chrono::steady_clock::now();
  fe2::BeamBackend backend(network, config.solver.fd_epsilon);
  const fem::MacroMesh base = fem::box_mesh(3, 3, 3, fem::ElementType::Q1);
  std::vector<int> boundary;
  for (std::size_t a = 0; a < base.node_count(); ++a) {
    const Eigen::RowVectorXd X = base.nodes.row(static_cast<Eigen::Index>(a));
    if ((X.array() < 1e-12).any() || (X.array() > 1.0 - 1e-12).any()) boundary.push_back(static_cast<int>(a));
  }

  // Every sample constrains the same DOFs, so one reference factorization serves all.
  std::shared_ptr<const solvers::SparseInverse> H0;
  Dataset ds;
  ds.dim = 3;
  GenerationReport rep;
  Harvest harvest(config.deduplicate);
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (H[i].dim() != 3) throw ShapeMismatch("3D generation needs 3 x 3 displacement gradients");
    fem::MacroMesh mesh = base;
    const Eigen::Matrix3d h = H[i].matrix();
    prescribe(mesh, boundary, [&](const Eigen::VectorXd& X) { return Eigen::VectorXd(h * X); });
    const fem::Assembler A(std::move(mesh));
    if (!H0) {
      const Eigen::MatrixXd C0 = backend.tangent(Tensor2::identity(3));
      H0 = std::make_shared<const solvers::SparseInverse>(fe2::constant_tangent(A, C0));
    }
    std::vector<Sample> batch;
    ++rep.runs;
    try {
      fe2::run_fe2(A, backend, config.solver, [&](const Tensor2& F, const Tensor2& P) { batch.push_back({F, P}); },
                   config.solver.method == solvers::Method::bfgs ? H0 : nullptr, {}, false);
      harvest.add(ds, batch, rep);
    } catch (const Error& e) {
      ++rep.failed;
      rep.failures.push_back("sample " + std::to_string(i) + ": " + e.what());
    }
    if (progress) progress(static_cast<int>(i + 1), static_cast<int>(H.size()), ds.size());
  }
  ds.metadata["protocol"] = "3d-affine";
  ds.metadata["samples"] = std::to_string(H.size());
  finish(ds, config.seed, config.validation_fraction, config.deduplicate, network, rep);
  rep.seconds = seconds_since(t0);
  if (report) *report = rep;
  return ds;
}

}  // namespace porohom::data
