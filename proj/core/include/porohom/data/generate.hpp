#pragma once

#include "porohom/data/dataset.hpp"
#include "porohom/fem/mesh.hpp"
#include "porohom/rve/beam_network.hpp"
#include "porohom/solvers/config.hpp"

#include <functional>

namespace porohom::data {

/// Boundary-condition families of the 2D protocol.
enum class Family {
  uniaxial_x,        // left/right edges, H0 = e1 e1
  uniaxial_y,        // bottom/top edges, H0 = e2 e2
  shear_x,           // bottom/top edges, H0 = e1 e2
  shear_y,           // left/right edges, H0 = e2 e1
  equibiaxial,       // all edges, H0 = I
  rotate_stretch,    // left fixed, right edge rotated by m and stretched by m
  transverse_shift,  // left fixed, right edge shifted by m along y
};

inline constexpr int kFamilyCount = 7;
std::string to_string(Family f);

struct BoundaryCase {
  Family family = Family::uniaxial_x;
  double magnitude = 0.0;
  double angle = 0.0;  // orientation of H0 for the affine families
};

/// 4 x 5 Q1 rectangle (60 DOFs) with the family's Dirichlet data at full load.
fem::MacroMesh case_mesh(const BoundaryCase& bc);

struct GenerationReport {
  int runs = 0;
  int failed = 0;
  std::vector<std::string> failures;
  std::size_t harvested = 0;
  std::size_t duplicates = 0;
  double seconds = 0.0;
};

struct Gen2dConfig {
  int simulations = 100;
  std::uint64_t seed = 1;
  double max_magnitude = 0.2;
  double validation_fraction = 0.1;
  bool deduplicate = true;
  solvers::SolverConfig solver;
};

struct Gen3dConfig {
  int samples = 100;
  std::uint64_t seed = 1;
  double amplitude = 0.24;  // H entries uniform on [-a, a], Latin hypercube over samples
  double validation_fraction = 0.1;
  bool deduplicate = true;
  solvers::SolverConfig solver = default_3d_solver();

  static solvers::SolverConfig default_3d_solver();
};

using GenerationProgress = std::function<void(int done, int total, std::size_t samples)>;

/// Simulation i uses family i mod 7 with magnitude uniform in [-m, m] and a
/// uniform orientation; every stress evaluation of every residual is stored.
Dataset generate_2d(const rve::BeamNetwork& network, const Gen2dConfig& config, GenerationReport* report = nullptr,
                    const GenerationProgress& progress = {});
/// Runs explicit cases instead of random draws.
Dataset generate_2d_cases(const rve::BeamNetwork& network, const std::vector<BoundaryCase>& cases,
                          const Gen2dConfig& config, GenerationReport* report = nullptr,
                          const GenerationProgress& progress = {});

/// 3 x 3 x 3 Q1 cube (192 DOFs), u = H X on every boundary node, BFGS started
/// from the tangent at F = I.
Dataset generate_3d(const rve::BeamNetwork& network, const Gen3dConfig& config, GenerationReport* report = nullptr,
                    const GenerationProgress& progress = {});
Dataset generate_3d_cases(const rve::BeamNetwork& network, const std::vector<Tensor2>& H, const Gen3dConfig& config,
                          GenerationReport* report = nullptr, const GenerationProgress& progress = {});

}  // namespace porohom::data
