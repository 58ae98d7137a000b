#include "common.hpp"

#include "porohom/app/vtk.hpp"
#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"
#include "porohom/rve/network_io.hpp"
#include "porohom/rve/packing.hpp"
#include "porohom/rve/tessellation.hpp"

#include <iostream>
#include <map>

namespace porohom::cli {
namespace {

struct RveGenArgs {
  std::string dist;
  std::uint64_t seed = 1;
  std::string mode = "volume";
  double fraction = 0.35;
  std::size_t count = 100;
  std::uint64_t attempts = 100000;
  bool vtk = false;
  std::string out;
};

void rve_gen(const RveGenArgs& a) {
  const auto dist = rve::PoreSizeDistribution::load(a.dist);
  rve::PackingConfig pc;
  pc.mode = a.mode == "count" ? rve::WeightMode::count : rve::WeightMode::volume;
  pc.target_fraction = a.fraction;
  pc.target_count = a.count;

  const auto packing = rve::pack_disks(dist, a.seed, a.attempts, pc);
  const auto network = rve::tessellate_periodic(packing);
  network.validate();

  const auto target = resolve_output(a.out, "rve.net");
  rve::save_network(network, target.primary);

  json config = {{"dist", dist.to_string()}, {"seed", a.seed}, {"mode", a.mode}, {"fraction", a.fraction},
                 {"count", a.count}, {"attempts", a.attempts}};
  auto report = make_report("rve gen", config);
  report["disks"] = packing.size();
  report["area_fraction"] = packing.area_fraction();
  report["min_gap"] = rve::min_periodic_gap(packing);
  report["area_histogram"] = rve::area_histogram(packing, dist);
  report["nodes"] = network.node_count();
  report["elements"] = network.element_count();
  report["periodic_pairs"] = network.periodic_pairs.size();
  report["fingerprint"] = network.fingerprint();
  report["network"] = target.primary.filename().string();
  write_json(target.file("rve_report.json"), report);
  if (a.vtk) write_text_file(target.file("rve.vtk"), app::vtk_network(network, {}, {}));

  std::cout << "packed " << packing.size() << " disks (fraction " << packing.area_fraction() << "), network "
            << network.node_count() << " nodes / " << network.element_count() << " beams -> "
            << target.primary.string() << "\n";
}

void rve_validate(const std::string& file) {
  const auto network = rve::load_network(file);
  network.validate();
  std::cout << file << ": valid " << network.dim << "D network, " << network.node_count() << " nodes, "
            << network.element_count() << " beams, " << network.periodic_pairs.size() << " periodic pairs, "
            << "fingerprint " << network.fingerprint() << "\n";
}

}  // namespace

void register_rve(CLI::App& app) {
  auto* rve = app.add_subcommand("rve", "Periodic beam RVE generation and checks");
  rve->require_subcommand(1);

  auto args = std::make_shared<RveGenArgs>();
  auto* gen = rve->add_subcommand("gen", "Pack disks from a pore-size distribution and tessellate");
  gen->add_option("--dist", args->dist, "Pore-size distribution file")->required()->check(CLI::ExistingFile);
  gen->add_option("--seed", args->seed, "Packing seed");
  gen->add_option("--mode", args->mode, "How weights are read")->check(CLI::IsMember({"volume", "count"}));
  gen->add_option("--fraction", args->fraction, "Target disk area fraction (volume mode)");
  gen->add_option("--count", args->count, "Total disk count (count mode)");
  gen->add_option("--attempts", args->attempts, "Placement trials per disk");
  gen->add_flag("--vtk", args->vtk, "Also write rve.vtk");
  gen->add_option("--out", args->out, "Output directory (or .net file)")->required();
  gen->callback([args] { rve_gen(*args); });

  auto file = std::make_shared<std::string>();
  auto* val = rve->add_subcommand("validate", "Check a network file");
  val->add_option("file", *file, "Network file")->required();
  val->callback([file] { rve_validate(*file); });
}

}  // namespace porohom::cli
