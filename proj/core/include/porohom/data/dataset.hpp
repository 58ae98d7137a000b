#pragma once

#include "porohom/common/tensor.hpp"
#include "porohom/nn/train.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace porohom::data {

enum class Split : std::uint8_t { train = 0, validation = 1 };

struct Sample {
  Tensor2 F;
  Tensor2 P;
  Split split = Split::train;
};

/// (F, P) pairs with split tags and free-form provenance metadata.
struct Dataset {
  int dim = 2;
  std::vector<Sample> samples;
  std::map<std::string, std::string> metadata;

  std::size_t size() const { return samples.size(); }
  std::size_t count(Split s) const;

  /// ValidationError for a bad dim, mixed dimensions or non-finite tensors.
  void validate() const;

  /// Columns of flattened F and P for one split.
  nn::SampleSet to_samples(Split s) const;
  nn::SampleSet to_samples() const;  // all samples
};

/// Seeded permutation; the first round(validation_fraction * n) positions become validation.
void assign_split(Dataset& dataset, std::uint64_t seed, double validation_fraction = 0.1);

inline constexpr std::uint32_t kDatasetFormatVersion = 1;

/// Layout (little-endian):
///   "PHDS", u32 version, u32 dim, u64 count,
///   count records of f64 F[d^2] then f64 P[d^2] (row-major),
///   count u8 split tags, u32 metadata length, metadata as "key=value\n" lines.
std::string serialize_dataset(const Dataset& dataset);
/// ParseError on bad magic, truncation or count mismatch; VersionMismatch on
/// unknown versions; ValidationError on a bad dimension.
Dataset deserialize_dataset(const std::string& bytes, const std::string& source = "dataset");
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// Header "split,F_xx,...,P_xx,..." then one row per sample, 17 significant digits.
std::string to_csv(const Dataset& dataset);
/// ValidationError for rows whose width does not match a single dimension.
Dataset from_csv(const std::string& text, const std::string& source = "csv");

/// Component label such as "xy" for row-major index k.
std::string component_name(int dim, int k);

struct ComponentStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  double min = 0.0;
  double max = 0.0;
};

struct DatasetStats {
  int dim = 2;
  std::size_t count = 0;
  std::vector<ComponentStats> input;   // of F - I
  std::vector<ComponentStats> output;  // of P
  Eigen::MatrixXd correlation;         // rows: F components, columns: P components
  std::vector<std::pair<int, int>> degenerate;  // (F, P) index pairs with zero variance, reported as 0

  std::string to_json(int indent = 2) const;
  /// Input table, output table and correlation matrix as CSV blocks.
  std::string to_csv() const;
};

/// EmptyDataset when there are no samples.
DatasetStats compute_stats(const Dataset& dataset);

}  // namespace porohom::data
