#include "common.hpp"

#include "porohom/app/benchmark.hpp"
#include "porohom/common/io.hpp"
#include "porohom/data/dataset.hpp"
#include "porohom/nn/model_io.hpp"
#include "porohom/nn/train.hpp"

#include <iomanip>
#include <iostream>
#include <sstream>

namespace porohom::cli {
namespace {

struct TrainArgs {
  std::string data;
  std::string arch = "128,256,128";
  std::string act = "gelu";
  int epochs = 1500;
  int batch = 256;
  double lr = 1e-3;
  int decay_epoch = 1000;
  std::uint64_t seed = 1;
  std::string precision = "float32";
  bool quiet = false;
  std::string out;
};

nn::TrainConfig train_config(const TrainArgs& a) {
  nn::TrainConfig c;
  c.epochs = a.epochs;
  c.batch_size = a.batch;
  c.learning_rate = a.lr;
  c.decay_epoch = a.decay_epoch;
  c.seed = a.seed;
  c.precision = a.precision == "float64" ? nn::Precision::float64 : nn::Precision::float32;
  c.validate();
  return c;
}

void train(const TrainArgs& a) {
  const auto ds = data::load_dataset(a.data);
  nn::ModelSpec spec{ds.dim, parse_widths(a.arch), nn::activation_from_string(a.act)};
  const auto config = train_config(a);
  const auto training = ds.to_samples(data::Split::train);
  const auto validation = ds.to_samples(data::Split::validation);
  const auto* vptr = validation.size() > 0 ? &validation : nullptr;

  nn::ProgressFn progress;
  if (!a.quiet) {
    const int every = std::max(1, a.epochs / 20);
    progress = [every, total = a.epochs](int epoch, double tl, double vl) {
      if ((epoch + 1) % every == 0 || epoch + 1 == total)
        std::cerr << "  epoch " << epoch + 1 << "/" << total << "  train " << tl << "  validation " << vl << "\n";
    };
  }
  const auto result = nn::train(spec, training, vptr, config, progress);

  const auto target = resolve_output(a.out, "model.phnn");
  nn::save_model(result.model, target.primary);

  json cfg = {{"data", a.data},   {"samples", ds.size()}, {"arch", a.arch}, {"act", a.act},
              {"epochs", a.epochs}, {"batch", a.batch},   {"lr", a.lr},     {"decay_epoch", a.decay_epoch},
              {"seed", a.seed},   {"precision", a.precision}};
  auto report = make_report("nn train", cfg);
  report["parameters"] = result.model.parameter_count();
  report["final_train_loss"] = result.report.final_train_loss;
  report["final_validation_loss"] = result.report.final_validation_loss;
  report["seconds"] = result.report.seconds;
  if (vptr) {
    const auto errs = nn::relative_errors(result.model, validation);
    report["validation_median_relative_error"] = app::median(errs);
  }
  write_json(target.file("train_report.json"), report);

  std::ostringstream csv;
  csv << "epoch,train_loss,validation_loss\n" << std::setprecision(10);
  const auto& r = result.report;
  for (std::size_t e = 0; e < r.train_loss.size(); ++e)
    csv << e + 1 << "," << r.train_loss[e] << "," << (e < r.validation_loss.size() ? r.validation_loss[e] : 0.0)
        << "\n";
  write_text_file(target.file("loss.csv"), csv.str());

  std::cout << "trained " << result.model.parameter_count() << " parameters in " << std::fixed
            << std::setprecision(1) << r.seconds << " s; final loss " << std::scientific << std::setprecision(3)
            << r.final_train_loss;
  if (vptr) std::cout << ", validation median relative error " << report["validation_median_relative_error"].get<double>();
  std::cout << " -> " << target.primary.string() << "\n";
}

struct GridArgs {
  std::string data;
  int epochs = 300;
  std::size_t subset = 0;
  std::string acts = "sigmoid,tanh,gelu";
  std::string widths = "64,128,256,512";
  std::string depths = "1,2,3";
  std::uint64_t seed = 1;
  std::string out;
};

void grid(const GridArgs& a) {
  auto ds = data::load_dataset(a.data);
  if (a.subset > 0 && a.subset < ds.size()) {
    // Training samples beyond the subset size are dropped; validation samples are kept.
    std::size_t kept = 0;
    std::vector<data::Sample> s;
    for (auto& x : ds.samples)
      if (x.split == data::Split::validation || kept++ < a.subset) s.push_back(x);
    ds.samples = std::move(s);
  }
  nn::GridAxes axes;
  axes.activations.clear();
  std::stringstream ss(a.acts);
  for (std::string t; std::getline(ss, t, ',');) axes.activations.push_back(nn::activation_from_string(t));
  axes.widths = parse_widths(a.widths);
  axes.depths = parse_widths(a.depths);

  nn::TrainConfig c;
  c.epochs = a.epochs;
  c.decay_epoch = a.epochs * 2 / 3;
  c.seed = a.seed;
  const auto training = ds.to_samples(data::Split::train);
  const auto validation = ds.to_samples(data::Split::validation);
  const auto* vptr = validation.size() > 0 ? &validation : nullptr;

  const auto result = nn::grid_search(ds.dim, training, vptr, axes, c, [](const nn::GridCell& cell) {
    std::cerr << "  " << nn::to_string(cell.activation) << " " << cell.width << "x" << cell.depth << "  loss "
              << cell.train_loss << "  (" << cell.seconds << " s)" << (cell.error.empty() ? "" : "  " + cell.error)
              << "\n";
  });

  const auto target = resolve_output(a.out, "grid.csv");
  write_text_file(target.primary, result.to_csv());
  json cfg = {{"data", a.data},     {"epochs", a.epochs}, {"subset", a.subset}, {"acts", a.acts},
              {"widths", a.widths}, {"depths", a.depths}, {"seed", a.seed}};
  auto report = make_report("nn grid", cfg);
  for (auto act : axes.activations) {
    if (auto best = result.best(act))
      report["best"][nn::to_string(act)] = {{"width", best->width}, {"depth", best->depth}, {"train_loss", best->train_loss}};
  }
  if (auto best = result.best()) report["best_overall"] = nn::to_string(best->activation);
  write_json(target.file("grid.json"), report);
  std::cout << result.cells.size() << " cells -> " << target.primary.string() << "\n";
}

}  // namespace

void register_nn(CLI::App& app) {
  auto* nnc = app.add_subcommand("nn", "Neural-network surrogate");
  nnc->require_subcommand(1);

  auto t = std::make_shared<TrainArgs>();
  auto* tr = nnc->add_subcommand("train", "Train an MLP on a dataset");
  tr->add_option("--data", t->data, "Dataset file")->required()->check(CLI::ExistingFile);
  tr->add_option("--arch", t->arch, "Hidden widths, comma-separated");
  tr->add_option("--act", t->act, "Activation")->check(CLI::IsMember({"gelu", "tanh", "sigmoid", "identity"}));
  tr->add_option("--epochs", t->epochs, "Epochs")->check(CLI::PositiveNumber);
  tr->add_option("--batch", t->batch, "Mini-batch size")->check(CLI::PositiveNumber);
  tr->add_option("--lr", t->lr, "Adam learning rate");
  tr->add_option("--decay-epoch", t->decay_epoch, "Epoch from which the learning rate is divided by 10");
  tr->add_option("--seed", t->seed, "Initialization and shuffling seed");
  tr->add_option("--precision", t->precision, "Training arithmetic")->check(CLI::IsMember({"float32", "float64"}));
  tr->add_flag("--quiet", t->quiet, "No progress output");
  tr->add_option("--out", t->out, "Output directory (or .phnn file)")->required();
  tr->callback([t] { train(*t); });

  auto g = std::make_shared<GridArgs>();
  auto* gr = nnc->add_subcommand("grid", "Activation x width x depth search at reduced epochs");
  gr->add_option("--data", g->data, "Dataset file")->required()->check(CLI::ExistingFile);
  gr->add_option("--epochs", g->epochs, "Epochs per cell")->check(CLI::PositiveNumber);
  gr->add_option("--subset", g->subset, "Use at most this many training samples (0: all)");
  gr->add_option("--acts", g->acts, "Activations, comma-separated");
  gr->add_option("--widths", g->widths, "Widths, comma-separated");
  gr->add_option("--depths", g->depths, "Depths, comma-separated");
  gr->add_option("--seed", g->seed, "Seed");
  gr->add_option("--out", g->out, "Output directory (or .csv file)")->required();
  gr->callback([g] { grid(*g); });
}

}  // namespace porohom::cli
