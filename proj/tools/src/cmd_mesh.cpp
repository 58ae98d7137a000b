#include "common.hpp"

#include "porohom/app/load_cases.hpp"
#include "porohom/app/vtk.hpp"
#include "porohom/common/io.hpp"
#include "porohom/fem/generators.hpp"
#include "porohom/fem/mesh_io.hpp"

#include <iostream>

namespace porohom::cli {
namespace {

struct MeshArgs {
  std::string shape = "square";
  std::string elem = "P1";
  int level = 0;
  bool load = true;
  std::string out;
};

void mesh_gen(const MeshArgs& a) {
  const auto type = fem::element_type_from_string(a.elem);
  auto mesh = fem::generate_mesh(a.shape, type, a.level);
  if (a.load) app::apply_load_case(mesh, a.shape);
  mesh.validate(a.load);

  const auto target = resolve_output(a.out, "mesh.txt");
  fem::save_mesh(mesh, target.primary);
  write_text_file(target.file("mesh.vtk"), app::vtk_mesh(mesh, {}, {}));
  json config = {{"shape", a.shape}, {"element", a.elem}, {"level", a.level}, {"load", a.load}};
  auto report = make_report("mesh gen", config);
  report["nodes"] = mesh.node_count();
  report["elements"] = mesh.element_count();
  report["dofs"] = mesh.dof_count();
  report["dirichlet"] = mesh.dirichlet.size();
  report["fingerprint"] = mesh.fingerprint();
  write_json(target.file("mesh_report.json"), report);
  std::cout << a.shape << " " << a.elem << " level " << a.level << ": " << mesh.node_count() << " nodes, "
            << mesh.element_count() << " elements -> " << target.primary.string() << "\n";
}

}  // namespace

void register_mesh(CLI::App& app) {
  auto* mesh = app.add_subcommand("mesh", "Macro meshes");
  mesh->require_subcommand(1);
  auto args = std::make_shared<MeshArgs>();
  auto* gen = mesh->add_subcommand("gen", "Generate a benchmark mesh");
  gen->add_option("--shape", args->shape, "Geometry")
      ->check(CLI::IsMember(fem::shape_names()));
  gen->add_option("--elem", args->elem, "Element type")->check(CLI::IsMember({"P1", "P2", "Q1"}));
  gen->add_option("--refine,--level", args->level, "Refinement level")->check(CLI::NonNegativeNumber);
  gen->add_flag("--load,!--no-load", args->load, "Attach the shape's benchmark boundary conditions");
  gen->add_option("--out", args->out, "Output directory (or .txt file)")->required();
  gen->callback([args] { mesh_gen(*args); });
}

}  // namespace porohom::cli
