#include "common.hpp"

#include "porohom/common/io.hpp"
#include "porohom/data/dataset.hpp"
#include "porohom/data/generate.hpp"
#include "porohom/rve/network_io.hpp"

#include <iomanip>
#include <iostream>

namespace porohom::cli {
namespace {

struct GenArgs {
  std::string net;
  int n = 100;
  std::uint64_t seed = 1;
  double magnitude = 0.2;   // 2D
  double amplitude = 0.24;  // 3D
  double validation = 0.1;
  bool dedup = true;
  bool quiet = false;
  std::string out;
};

json generation_json(const data::GenerationReport& r) {
  return {{"runs", r.runs},           {"failed", r.failed},         {"failures", r.failures},
          {"harvested", r.harvested}, {"duplicates", r.duplicates}, {"seconds", r.seconds}};
}

void finish_gen(const std::string& command, const GenArgs& a, const json& config, const data::Dataset& ds,
                const data::GenerationReport& rep) {
  const auto target = resolve_output(a.out, "dataset.phds");
  data::save_dataset(ds, target.primary);
  auto report = make_report(command, config);
  report["generation"] = generation_json(rep);
  report["samples"] = ds.size();
  report["train"] = ds.count(data::Split::train);
  report["validation"] = ds.count(data::Split::validation);
  report["metadata"] = ds.metadata;
  write_json(target.file("generation.json"), report);
  std::cout << ds.size() << " samples from " << rep.runs - rep.failed << "/" << rep.runs << " simulations ("
            << rep.duplicates << " duplicates dropped, " << std::fixed << std::setprecision(1) << rep.seconds
            << " s) -> " << target.primary.string() << "\n";
}

data::GenerationProgress progress_printer(bool quiet) {
  if (quiet) return {};
  return [](int done, int total, std::size_t samples) {
    std::cerr << "\r  " << done << "/" << total << " simulations, " << samples << " samples" << std::flush;
    if (done == total) std::cerr << "\n";
  };
}

void gen2d(const GenArgs& a) {
  const auto network = rve::load_network(a.net);
  data::Gen2dConfig c;
  c.simulations = a.n;
  c.seed = a.seed;
  c.max_magnitude = a.magnitude;
  c.validation_fraction = a.validation;
  c.deduplicate = a.dedup;
  data::GenerationReport rep;
  const auto ds = data::generate_2d(network, c, &rep, progress_printer(a.quiet));
  json config = {{"net", network.fingerprint()}, {"n", a.n},           {"seed", a.seed},
                 {"magnitude", a.magnitude},     {"validation", a.validation}, {"dedup", a.dedup}};
  finish_gen("data gen2d", a, config, ds, rep);
}

void gen3d(const GenArgs& a) {
  const auto network = rve::load_network(a.net);
  data::Gen3dConfig c;
  c.samples = a.n;
  c.seed = a.seed;
  c.amplitude = a.amplitude;
  c.validation_fraction = a.validation;
  c.deduplicate = a.dedup;
  data::GenerationReport rep;
  const auto ds = data::generate_3d(network, c, &rep, progress_printer(a.quiet));
  json config = {{"net", network.fingerprint()}, {"n", a.n},           {"seed", a.seed},
                 {"amplitude", a.amplitude},     {"validation", a.validation}, {"dedup", a.dedup}};
  finish_gen("data gen3d", a, config, ds, rep);
}

void stats(const std::string& file, const std::string& out) {
  const auto ds = data::load_dataset(file);
  const auto s = data::compute_stats(ds);
  const int n = ds.dim * ds.dim;
  std::cout << ds.size() << " samples, dim " << ds.dim << "\n";
  std::cout << std::setw(8) << "comp" << std::setw(12) << "mean(F-I)" << std::setw(12) << "std(F-I)"
            << std::setw(12) << "mean(P)" << std::setw(12) << "std(P)" << "  argmax|corr|\n";
  for (int k = 0; k < n; ++k) {
    Eigen::Index best = 0;
    s.correlation.row(k).cwiseAbs().maxCoeff(&best);
    std::cout << std::setw(8) << data::component_name(ds.dim, k) << std::fixed << std::setprecision(5)
              << std::setw(12) << s.input[k].mean << std::setw(12) << s.input[k].stddev << std::setw(12)
              << s.output[k].mean << std::setw(12) << s.output[k].stddev << "  P_"
              << data::component_name(ds.dim, static_cast<int>(best)) << "\n";
  }
  if (!out.empty()) {
    const auto target = resolve_output(out, "stats.json");
    write_text_file(target.primary, s.to_json() + "\n");
    write_text_file(target.file("stats.csv"), s.to_csv());
  }
}

void export_csv(const std::string& file, const std::string& out) {
  const auto ds = data::load_dataset(file);
  const auto target = resolve_output(out, "dataset.csv");
  write_text_file(target.primary, data::to_csv(ds));
  std::cout << ds.size() << " rows -> " << target.primary.string() << "\n";
}

void add_gen_options(CLI::App* cmd, GenArgs& a, bool three_d) {
  cmd->add_option("--net", a.net, "Network file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--n", a.n, three_d ? "Number of boundary-value problems" : "Number of macro simulations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Sampling seed");
  if (three_d)
    cmd->add_option("--amplitude", a.amplitude, "H entries drawn from [-a, a]");
  else
    cmd->add_option("--magnitude", a.magnitude, "Largest load magnitude");
  cmd->add_option("--validation", a.validation, "Held-out fraction")->check(CLI::Range(0.0, 0.9));
  cmd->add_flag("--dedup,!--no-dedup", a.dedup, "Drop samples with a repeated F");
  cmd->add_flag("--quiet", a.quiet, "No progress output");
  cmd->add_option("--out", a.out, "Output directory (or .phds file)")->required();
}

}  // namespace

void register_data(CLI::App& app) {
  auto* data = app.add_subcommand("data", "Training data for the surrogate");
  data->require_subcommand(1);

  auto a2 = std::make_shared<GenArgs>();
  auto* g2 = data->add_subcommand("gen2d", "Harvest (F, P) pairs from 2D macro simulations");
  add_gen_options(g2, *a2, false);
  g2->callback([a2] { gen2d(*a2); });

  auto a3 = std::make_shared<GenArgs>();
  auto* g3 = data->add_subcommand("gen3d", "Harvest (F, P) pairs from 3D cube problems");
  add_gen_options(g3, *a3, true);
  g3->callback([a3] { gen3d(*a3); });

  auto sfile = std::make_shared<std::string>();
  auto sout = std::make_shared<std::string>();
  auto* st = data->add_subcommand("stats", "Component statistics and F-P correlation");
  st->add_option("file", *sfile, "Dataset file")->required()->check(CLI::ExistingFile);
  st->add_option("--out", *sout, "Output directory for stats.json and stats.csv");
  st->callback([sfile, sout] { stats(*sfile, *sout); });

  auto cfile = std::make_shared<std::string>();
  auto cout_ = std::make_shared<std::string>();
  auto* cs = data->add_subcommand("csv", "Export a dataset as CSV");
  cs->add_option("file", *cfile, "Dataset file")->required()->check(CLI::ExistingFile);
  cs->add_option("--out", *cout_, "Output directory (or .csv file)")->required();
  cs->callback([cfile, cout_] { export_csv(*cfile, *cout_); });
}

}  // namespace porohom::cli
