#pragma once

#include "porohom/app/load_cases.hpp"
#include "porohom/app/postprocess.hpp"
#include "porohom/fe2/driver.hpp"
#include "porohom/fem/element.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace porohom::app {

inline constexpr int kReportSchemaVersion = 1;

enum class BackendKind { beam, nn };
std::string to_string(BackendKind k);
BackendKind backend_from_string(const std::string& s);

struct RunSpec {
  std::string shape = "square";
  fem::ElementType element = fem::ElementType::P1;
  int level = 0;
  BackendKind backend = BackendKind::beam;
  std::filesystem::path backend_file;  // network for beam, weights for nn
  solvers::SolverConfig solver;
  LoadCaseOptions load;
  std::filesystem::path out_dir;       // empty: no files written

  /// ValidationError when the backend file is missing or its dimension does not fit the shape.
  void validate() const;
  /// Canonical text of every field, hashed into reports.
  std::string canonical() const;
};

struct RunResult {
  fem::MacroMesh mesh;
  fe2::Fe2Result fe2;
  FieldSet fields;
  std::uint64_t backend_stress_calls = 0;
  std::uint64_t backend_tangent_calls = 0;
  std::uint64_t micro_solves = 0;  // beam RVE solves during the run
  double seconds = 0.0;

  std::string to_json(const RunSpec& spec, int indent = 2) const;
};

/// fd_epsilon is the step of the beam backend's finite-difference tangent.
std::unique_ptr<fe2::Backend> load_backend(BackendKind kind, const std::filesystem::path& file,
                                           double fd_epsilon = 1e-6);

/// Mesh, load case and load-stepped FE2 solve. With an output directory it
/// writes report.json, solution.vtk, mesh.txt, fields.csv, iterations.csv and steps.csv.
RunResult run_fe2(const RunSpec& spec);
RunResult run_fe2(const RunSpec& spec, const fe2::Backend& backend);

/// Writes the output files of a finished run.
void write_run(const RunSpec& spec, const RunResult& result);

/// Reads mesh.txt and fields.csv of a run directory.
std::pair<fem::MacroMesh, FieldSet> load_run_fields(const std::filesystem::path& dir);

}  // namespace porohom::app
