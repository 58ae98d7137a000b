#include "porohom/nn/train.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/random.hpp"
#include "porohom/common/timer.hpp"

#include <unsupported/Eigen/SpecialFunctions>

#include <cmath>
#include <numbers>
#include <sstream>

namespace porohom::nn {

void TrainConfig::validate() const {
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (batch_size < 1) throw ValidationError("batch size must be at least 1");
  if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0)) {
    throw ValidationError("invalid Adam moments");
  }
  if (!(decay_factor > 0.0)) throw ValidationError("decay factor must be positive");
}

namespace {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <typename S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Applies the activation in place and stores its derivative in d.
template <typename S>
void activate_batch(Activation act, Mat<S>& z, Mat<S>* d) {
  auto x = z.array();
  switch (act) {
    case Activation::identity:
      if (d) d->setOnes(z.rows(), z.cols());
      return;
    case Activation::gelu: {
      const S r2 = S(1) / std::numbers::sqrt2_v<S>;
      Mat<S> cdf = (S(0.5) * (S(1) + (x * r2).erf())).matrix();
      if (d) {
        const S c = std::numbers::inv_sqrtpi_v<S> * r2;
        *d = (cdf.array() + x * (S(-0.5) * x.square()).exp() * c).matrix();
      }
      z = (x * cdf.array()).matrix();
      return;
    }
    case Activation::tanh:
      z = x.tanh().matrix();
      if (d) *d = (S(1) - z.array().square()).matrix();
      return;
    case Activation::sigmoid:
      z = (S(1) + (-x).exp()).inverse().matrix();
      if (d) *d = (z.array() * (S(1) - z.array())).matrix();
      return;
  }
}

template <typename S>
struct AdamLayer {
  Mat<S> W, mW, vW;
  Vec<S> b, mb, vb;
  Activation act = Activation::identity;
};

template <typename S>
class Trainer {
 public:
  Trainer(const MlpModel& init, const TrainConfig& config) : config_(config) {
    for (const auto& l : init.layers()) {
      AdamLayer<S> a;
      a.W = l.W.cast<S>();
      a.b = l.b.cast<S>();
      a.mW = Mat<S>::Zero(a.W.rows(), a.W.cols());
      a.vW = a.mW;
      a.mb = Vec<S>::Zero(a.b.size());
      a.vb = a.mb;
      a.act = l.activation;
      layers_.push_back(std::move(a));
    }
    z_.resize(layers_.size());
    d_.resize(layers_.size());
    a_.resize(layers_.size() + 1);
  }

  // Forward pass keeping activations and derivatives; returns the output block.
  const Mat<S>& forward(const Mat<S>& x, bool keep) {
    a_[0] = x;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      z_[l].noalias() = layers_[l].W * a_[l];
      z_[l].colwise() += layers_[l].b;
      activate_batch<S>(layers_[l].act, z_[l], keep ? &d_[l] : nullptr);
      a_[l + 1] = z_[l];
    }
    return a_.back();
  }

  // One Adam step on a batch; returns the batch MSE.
  double step(const Mat<S>& x, const Mat<S>& y, double lr) {
    const Mat<S>& out = forward(x, true);
    Mat<S> delta = out - y;
    const double loss = static_cast<double>(delta.squaredNorm()) / static_cast<double>(delta.size());
    if (!std::isfinite(loss)) throw DivergedLoss("training loss became non-finite");
    delta *= S(2) / static_cast<S>(delta.size());
    ++t_;
    const S c1 = S(1) / static_cast<S>(1.0 - std::pow(config_.beta1, t_));
    const S c2 = S(1) / static_cast<S>(1.0 - std::pow(config_.beta2, t_));
    for (std::size_t k = layers_.size(); k-- > 0;) {
      auto& L = layers_[k];
      if (L.act != Activation::identity) delta.array() *= d_[k].array();
      Mat<S> gW;
      gW.noalias() = delta * a_[k].transpose();
      Vec<S> gb = delta.rowwise().sum();
      if (k > 0) {
        Mat<S> next;
        next.noalias() = L.W.transpose() * delta;
        delta = std::move(next);
      }
      adam(L.W, L.mW, L.vW, gW, lr, c1, c2);
      adam(L.b, L.mb, L.vb, gb, lr, c1, c2);
    }
    return loss;
  }

  void write_back(MlpModel& model) const {
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      model.layers()[l].W = layers_[l].W.template cast<double>();
      model.layers()[l].b = layers_[l].b.template cast<double>();
    }
  }

  double loss(const Mat<S>& x, const Mat<S>& y) {
    double sum = 0.0;
    const Eigen::Index chunk = 4096;
    for (Eigen::Index c = 0; c < x.cols(); c += chunk) {
      const Eigen::Index n = std::min(chunk, x.cols() - c);
      sum += static_cast<double>((forward(x.middleCols(c, n), false) - y.middleCols(c, n)).squaredNorm());
    }
    return sum / static_cast<double>(x.size());
  }

 private:
  template <typename M>
  void adam(M& p, M& m, M& v, const M& g, double lr, S c1, S c2) {
    const S b1 = static_cast<S>(config_.beta1);
    const S b2 = static_cast<S>(config_.beta2);
    m = b1 * m + (S(1) - b1) * g;
    v.array() = b2 * v.array() + (S(1) - b2) * g.array().square();
    p.array() -= static_cast<S>(lr) * (m.array() * c1) / ((v.array() * c2).sqrt() + static_cast<S>(config_.epsilon));
  }

  const TrainConfig& config_;
  std::vector<AdamLayer<S>> layers_;
  std::vector<Mat<S>> z_, d_, a_;
  long t_ = 0;
};

Eigen::MatrixXd normalize_columns(const Normalization& n, const Eigen::MatrixXd& x) {
  return (x.colwise() - n.mean).array().colwise() / n.scale.array();
}

template <typename S>
TrainResult run_training(MlpModel model, const SampleSet& training, const SampleSet* validation,
                         const TrainConfig& config, const ProgressFn& progress) {
  const auto t0 = std::chrono::steady_clock::now();
  const Mat<S> X = normalize_columns(model.input_normalization(), training.x).cast<S>();
  const Mat<S> Y = normalize_columns(model.output_normalization(), training.y).cast<S>();
  Mat<S> Xv, Yv;
  const bool has_val = validation && validation->size() > 0;
  if (has_val) {
    Xv = normalize_columns(model.input_normalization(), validation->x).cast<S>();
    Yv = normalize_columns(model.output_normalization(), validation->y).cast<S>();
  }

  Trainer<S> trainer(model, config);
  Rng shuffle(config.seed ^ 0x5DEECE66DULL);
  const Eigen::Index n = X.cols();
  const Eigen::Index bs = std::min<Eigen::Index>(config.batch_size, n);
  TrainReport report;
  Mat<S> xb(X.rows(), bs), yb(Y.rows(), bs);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.learning_rate * (epoch >= config.decay_epoch ? config.decay_factor : 1.0);
    const auto perm = shuffle.permutation(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (Eigen::Index start = 0; start < n; start += bs) {
      const Eigen::Index m = std::min(bs, n - start);
      xb.resize(X.rows(), m);
      yb.resize(Y.rows(), m);
      for (Eigen::Index j = 0; j < m; ++j) {
        const auto src = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(start + j)]);
        xb.col(j) = X.col(src);
        yb.col(j) = Y.col(src);
      }
      sum += trainer.step(xb, yb, lr) * static_cast<double>(m);
    }
    report.train_loss.push_back(sum / static_cast<double>(n));
    double vloss = 0.0;
    if (has_val) {
      vloss = trainer.loss(Xv, Yv);
      report.validation_loss.push_back(vloss);
    }
    if (progress) progress(epoch, report.train_loss.back(), vloss);
  }

  trainer.write_back(model);
  report.final_train_loss = evaluate_loss(model, training);
  if (!std::isfinite(report.final_train_loss)) throw DivergedLoss("final training loss is non-finite");
  if (has_val) report.final_validation_loss = evaluate_loss(model, *validation);
  report.seconds = seconds_since(t0);
  return {std::move(model), std::move(report)};
}

void check_samples(const SampleSet& s, int dim, const char* what) {
  const Eigen::Index w = dim * dim;
  if (s.x.rows() != w || s.y.rows() != w || s.x.cols() != s.y.cols()) {
    throw ShapeMismatch(std::string(what) + " samples do not match a " + std::to_string(dim) + "D model");
  }
  if (!s.x.allFinite() || !s.y.allFinite()) throw ValidationError(std::string(what) + " samples are not finite");
}

}  // namespace

double evaluate_loss(const MlpModel& model, const SampleSet& data) {
  if (data.size() == 0) return 0.0;
  Eigen::MatrixXd a = normalize_columns(model.input_normalization(), data.x);
  for (const auto& l : model.layers()) {
    Eigen::MatrixXd z = l.W * a;
    z.colwise() += l.b;
    if (l.activation != Activation::identity) z = z.unaryExpr([&](double v) { return activate(l.activation, v); });
    a = std::move(z);
  }
  const Eigen::MatrixXd y = normalize_columns(model.output_normalization(), data.y);
  return (a - y).squaredNorm() / static_cast<double>(a.size());
}

TrainResult train(const ModelSpec& spec, const SampleSet& training, const SampleSet* validation,
                  const TrainConfig& config, const ProgressFn& progress) {
  config.validate();
  MlpModel model(spec.dim, spec.hidden, spec.activation);
  if (training.size() == 0) throw EmptyDataset("no training samples");
  check_samples(training, spec.dim, "training");
  if (validation) check_samples(*validation, spec.dim, "validation");
  model.initialize(config.seed);
  model.input_normalization() = Normalization::fit(training.x);
  model.output_normalization() = Normalization::fit(training.y);
  if (config.precision == Precision::float64) {
    return run_training<double>(std::move(model), training, validation, config, progress);
  }
  return run_training<float>(std::move(model), training, validation, config, progress);
}

std::optional<GridCell> GridResult::best(std::optional<Activation> activation) const {
  std::optional<GridCell> out;
  for (const auto& c : cells) {
    if (!c.error.empty() || (activation && c.activation != *activation)) continue;
    if (!out || c.train_loss < out->train_loss) out = c;
  }
  return out;
}

std::string GridResult::to_csv() const {
  std::ostringstream os;
  os.precision(9);
  os << "activation,width,depth,train_loss,validation_loss,seconds,error\n";
  for (const auto& c : cells) {
    os << to_string(c.activation) << ',' << c.width << ',' << c.depth << ',' << c.train_loss << ','
       << c.validation_loss << ',' << c.seconds << ',' << c.error << '\n';
  }
  return os.str();
}

GridResult grid_search(int dim, const SampleSet& training, const SampleSet* validation, const GridAxes& axes,
                       TrainConfig config, const std::function<void(const GridCell&)>& on_cell) {
  if (axes.activations.empty() || axes.widths.empty() || axes.depths.empty()) {
    throw ValidationError("grid search needs at least one value per axis");
  }
  GridResult result;
  for (Activation act : axes.activations) {
    for (int width : axes.widths) {
      for (int depth : axes.depths) {
        GridCell cell;
        cell.activation = act;
        cell.width = width;
        cell.depth = depth;
        const auto t0 = std::chrono::steady_clock::now();
        try {
          ModelSpec spec{dim, std::vector<int>(static_cast<std::size_t>(depth), width), act};
          const auto r = train(spec, training, validation, config);
          cell.train_loss = r.report.final_train_loss;
          cell.validation_loss = r.report.final_validation_loss;
        } catch (const Error& e) {
          cell.error = e.what();
        }
        cell.seconds = seconds_since(t0);
        if (on_cell) on_cell(cell);
        result.cells.push_back(cell);
      }
    }
  }
  return result;
}

std::vector<double> relative_errors(const MlpModel& model, const SampleSet& data) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(data.size()));
  for (Eigen::Index c = 0; c < data.size(); ++c) {
    const Eigen::VectorXd p = model.forward_flat(data.x.col(c));
    const double ref = data.y.col(c).norm();
    const double err = (p - data.y.col(c)).norm();
    out.push_back(ref > 0.0 ? err / ref : err);
  }
  return out;
}

}  // namespace porohom::nn
