#include "porohom/nn/model_io.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"

namespace porohom::nn {

namespace {
constexpr char kMagic[4] = {'P', 'H', 'N', 'N'};
}

std::string serialize_model(const MlpModel& model) {
  model.validate();
  BinaryWriter w;
  w.put_bytes(std::string_view(kMagic, 4));
  w.put<std::uint32_t>(kModelFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.dim()));
  const auto hidden = model.hidden();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(hidden.size()));
  for (int h : hidden) w.put<std::uint32_t>(static_cast<std::uint32_t>(h));
  for (const auto& l : model.layers()) w.put<std::uint8_t>(static_cast<std::uint8_t>(l.activation));
  for (const auto& l : model.layers()) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W = l.W;
    w.put_doubles(std::span<const double>(W.data(), static_cast<std::size_t>(W.size())));
    w.put_doubles(std::span<const double>(l.b.data(), static_cast<std::size_t>(l.b.size())));
  }
  for (const Eigen::VectorXd* v : {&model.input_normalization().mean, &model.input_normalization().scale,
                                   &model.output_normalization().mean, &model.output_normalization().scale}) {
    w.put_doubles(std::span<const double>(v->data(), static_cast<std::size_t>(v->size())));
  }
  return w.bytes();
}

MlpModel deserialize_model(const std::string& bytes, int expected_dim, const std::string& source) {
  BinaryReader r(bytes, source);
  if (r.get_bytes(4) != std::string(kMagic, 4)) r.fail("not a porohom model file");
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw VersionMismatch(source + ": model format version " + std::to_string(version) + ", expected " +
                          std::to_string(kModelFormatVersion));
  }
  const auto dim = static_cast<int>(r.get<std::uint32_t>());
  if (dim != 2 && dim != 3) r.fail("invalid model dimension " + std::to_string(dim));
  if (expected_dim != 0 && dim != expected_dim) {
    throw VersionMismatch(source + ": expected a " + std::to_string(expected_dim) + "D model, file holds a " +
                          std::to_string(dim) + "D model");
  }
  const auto depth = r.get<std::uint32_t>();
  if (depth > 64) r.fail("implausible hidden layer count " + std::to_string(depth));
  std::vector<int> hidden(depth);
  for (auto& h : hidden) {
    h = static_cast<int>(r.get<std::uint32_t>());
    if (h < 1 || h > (1 << 20)) r.fail("invalid layer width");
  }
  MlpModel model(dim, hidden, Activation::identity);
  for (auto& l : model.layers()) {
    const auto tag = r.get<std::uint8_t>();
    if (tag > static_cast<std::uint8_t>(Activation::sigmoid)) r.fail("unknown activation tag " + std::to_string(tag));
    l.activation = static_cast<Activation>(tag);
  }
  for (auto& l : model.layers()) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W(l.W.rows(), l.W.cols());
    r.get_doubles(std::span<double>(W.data(), static_cast<std::size_t>(W.size())));
    l.W = W;
    r.get_doubles(std::span<double>(l.b.data(), static_cast<std::size_t>(l.b.size())));
  }
  for (Eigen::VectorXd* v : {&model.input_normalization().mean, &model.input_normalization().scale,
                             &model.output_normalization().mean, &model.output_normalization().scale}) {
    r.get_doubles(std::span<double>(v->data(), static_cast<std::size_t>(v->size())));
  }
  r.expect_end();
  try {
    model.validate();
  } catch (const ValidationError& e) {
    throw ParseError(source + ": " + e.what());
  }
  return model;
}

void save_model(const MlpModel& model, const std::filesystem::path& path) {
  write_text_file(path, serialize_model(model));
}

MlpModel load_model(const std::filesystem::path& path, int expected_dim) {
  return deserialize_model(read_text_file(path), expected_dim, path.string());
}

}  // namespace porohom::nn
