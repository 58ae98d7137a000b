#pragma once

#include "porohom/nn/mlp.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace porohom::nn {

/// Raw training pairs, one column per sample: x = flattened F, y = flattened P.
struct SampleSet {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y;
  Eigen::Index size() const { return x.cols(); }
};

struct ModelSpec {
  int dim = 2;
  std::vector<int> hidden{128, 256, 128};
  Activation activation = Activation::gelu;
};

enum class Precision { float32, float64 };

struct TrainConfig {
  int epochs = 1500;
  int batch_size = 256;
  double learning_rate = 1e-3;
  int decay_epoch = 1000;     // learning rate is multiplied by decay_factor from this epoch on
  double decay_factor = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  Precision precision = Precision::float32;

  void validate() const;
};

struct TrainReport {
  std::vector<double> train_loss;       // mean batch loss per epoch, normalized units
  std::vector<double> validation_loss;  // full pass after each epoch; empty without validation data
  double final_train_loss = 0.0;        // full pass over the training split after the last epoch
  double final_validation_loss = 0.0;
  double seconds = 0.0;
};

struct TrainResult {
  MlpModel model;
  TrainReport report;
};

using ProgressFn = std::function<void(int epoch, double train_loss, double validation_loss)>;

/// Adam on the mean squared error in normalized units. Normalization is fitted
/// on the training split. Deterministic for a fixed seed. DivergedLoss on a
/// non-finite loss, EmptyDataset without training samples.
TrainResult train(const ModelSpec& spec, const SampleSet& training, const SampleSet* validation,
                  const TrainConfig& config, const ProgressFn& progress = {});

/// Mean squared error of the model in the normalization of the model.
double evaluate_loss(const MlpModel& model, const SampleSet& data);

/// ||P_nn - P|| / ||P|| per sample (Frobenius); samples with ||P|| = 0 use the absolute error.
std::vector<double> relative_errors(const MlpModel& model, const SampleSet& data);

struct GridAxes {
  std::vector<Activation> activations{Activation::sigmoid, Activation::tanh, Activation::gelu};
  std::vector<int> widths{64, 128, 256, 512};
  std::vector<int> depths{1, 2, 3};
};

struct GridCell {
  Activation activation = Activation::gelu;
  int width = 0;
  int depth = 0;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double seconds = 0.0;
  std::string error;  // training failure, recorded instead of thrown
};

struct GridResult {
  std::vector<GridCell> cells;
  /// Lowest final training loss among cells without errors, optionally for one activation.
  std::optional<GridCell> best(std::optional<Activation> activation = std::nullopt) const;
  /// activation,width,depth,train_loss,validation_loss,seconds,error
  std::string to_csv() const;
};

/// One model per cell of activations x widths x depths. Defaults to 300 epochs per cell.
GridResult grid_search(int dim, const SampleSet& training, const SampleSet* validation, const GridAxes& axes,
                       TrainConfig config, const std::function<void(const GridCell&)>& on_cell = {});

}  // namespace porohom::nn
