#include "porohom/data/dataset.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"
#include "porohom/common/random.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace porohom::data {

namespace {
constexpr char kMagic[4] = {'P', 'H', 'D', 'S'};

std::string split_name(Split s) { return s == Split::train ? "train" : "validation"; }
}  // namespace

std::size_t Dataset::count(Split s) const {
  std::size_t n = 0;
  for (const auto& x : samples) n += x.split == s ? 1 : 0;
  return n;
}

void Dataset::validate() const {
  if (dim != 2 && dim != 3) throw ValidationError("dataset dimension must be 2 or 3, got " + std::to_string(dim));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.F.dim() != dim || s.P.dim() != dim) {
      throw ValidationError("sample " + std::to_string(i) + " has dimension " + std::to_string(s.F.dim()) +
                            " in a " + std::to_string(dim) + "D dataset");
    }
    if (!s.F.all_finite() || !s.P.all_finite()) throw ValidationError("sample " + std::to_string(i) + " is not finite");
    if (s.split != Split::train && s.split != Split::validation) {
      throw ValidationError("sample " + std::to_string(i) + " has an invalid split tag");
    }
  }
}

nn::SampleSet Dataset::to_samples(Split s) const {
  const int n = dim * dim;
  nn::SampleSet out;
  const auto m = static_cast<Eigen::Index>(count(s));
  out.x.resize(n, m);
  out.y.resize(n, m);
  Eigen::Index c = 0;
  for (const auto& x : samples) {
    if (x.split != s) continue;
    out.x.col(c) = x.F.flat();
    out.y.col(c) = x.P.flat();
    ++c;
  }
  return out;
}

nn::SampleSet Dataset::to_samples() const {
  const int n = dim * dim;
  nn::SampleSet out;
  out.x.resize(n, static_cast<Eigen::Index>(samples.size()));
  out.y.resize(n, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out.x.col(static_cast<Eigen::Index>(i)) = samples[i].F.flat();
    out.y.col(static_cast<Eigen::Index>(i)) = samples[i].P.flat();
  }
  return out;
}

void assign_split(Dataset& dataset, std::uint64_t seed, double validation_fraction) {
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw ValidationError("validation fraction must lie in [0, 1)");
  }
  const std::size_t n = dataset.size();
  const auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(n)));
  Rng rng(seed);
  const auto perm = rng.permutation(n);
  for (std::size_t k = 0; k < n; ++k) dataset.samples[perm[k]].split = k < n_val ? Split::validation : Split::train;
  std::ostringstream os;
  os << validation_fraction;
  dataset.metadata["split_seed"] = std::to_string(seed);
  dataset.metadata["validation_fraction"] = os.str();
}

std::string serialize_dataset(const Dataset& dataset) {
  dataset.validate();
  BinaryWriter w;
  w.put_bytes(std::string_view(kMagic, 4));
  w.put<std::uint32_t>(kDatasetFormatVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(dataset.dim));
  w.put<std::uint64_t>(dataset.size());
  const int n = dataset.dim * dataset.dim;
  std::vector<double> buf(static_cast<std::size_t>(2 * n));
  for (const auto& s : dataset.samples) {
    s.F.write_flat(std::span<double>(buf.data(), static_cast<std::size_t>(n)));
    s.P.write_flat(std::span<double>(buf.data() + n, static_cast<std::size_t>(n)));
    w.put_doubles(buf);
  }
  for (const auto& s : dataset.samples) w.put<std::uint8_t>(static_cast<std::uint8_t>(s.split));
  std::string meta;
  for (const auto& [k, v] : dataset.metadata) {
    if (k.find_first_of("=\n") != std::string::npos || v.find('\n') != std::string::npos) {
      throw ValidationError("metadata entries may not contain '=' in keys or newlines");
    }
    meta += k + "=" + v + "\n";
  }
  w.put<std::uint32_t>(static_cast<std::uint32_t>(meta.size()));
  w.put_bytes(meta);
  return w.bytes();
}

Dataset deserialize_dataset(const std::string& bytes, const std::string& source) {
  BinaryReader r(bytes, source);
  if (r.get_bytes(4) != std::string(kMagic, 4)) r.fail("not a porohom dataset");
  const auto version = r.get<std::uint32_t>();
  if (version != kDatasetFormatVersion) {
    throw VersionMismatch(source + ": dataset format version " + std::to_string(version) + ", expected " +
                          std::to_string(kDatasetFormatVersion));
  }
  Dataset ds;
  ds.dim = static_cast<int>(r.get<std::uint32_t>());
  if (ds.dim != 2 && ds.dim != 3) throw ValidationError(source + ": dataset dimension " + std::to_string(ds.dim));
  const auto count = r.get<std::uint64_t>();
  const std::size_t n = static_cast<std::size_t>(ds.dim * ds.dim);
  const std::size_t record = 2 * n * sizeof(double) + 1;
  if (count > r.remaining() / record) {
    r.fail("header announces " + std::to_string(count) + " samples but the file holds at most " +
           std::to_string(r.remaining() / record));
  }
  ds.samples.resize(count);
  std::vector<double> buf(2 * n);
  for (auto& s : ds.samples) {
    r.get_doubles(buf);
    s.F = Tensor2::from_flat(ds.dim, std::span<const double>(buf.data(), n));
    s.P = Tensor2::from_flat(ds.dim, std::span<const double>(buf.data() + n, n));
  }
  for (auto& s : ds.samples) {
    const auto tag = r.get<std::uint8_t>();
    if (tag > 1) r.fail("invalid split tag " + std::to_string(tag));
    s.split = static_cast<Split>(tag);
  }
  const auto len = r.get<std::uint32_t>();
  const std::string meta = r.get_bytes(len);
  r.expect_end();
  std::istringstream in(meta);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) r.fail("malformed metadata line");
    ds.metadata[line.substr(0, eq)] = line.substr(eq + 1);
  }
  ds.validate();
  return ds;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_text_file(path, serialize_dataset(dataset));
}

Dataset load_dataset(const std::filesystem::path& path) {
  return deserialize_dataset(read_text_file(path), path.string());
}

std::string component_name(int dim, int k) {
  static const char axes[] = {'x', 'y', 'z'};
  return std::string{axes[k / dim], axes[k % dim]};
}

std::string to_csv(const Dataset& dataset) {
  dataset.validate();
  const int n = dataset.dim * dataset.dim;
  std::ostringstream os;
  os << "split";
  for (const char* t : {"F_", "P_"}) {
    for (int k = 0; k < n; ++k) os << ',' << t << component_name(dataset.dim, k);
  }
  os << '\n' << std::setprecision(17);
  for (const auto& s : dataset.samples) {
    os << split_name(s.split);
    for (const Tensor2* t : {&s.F, &s.P}) {
      const Eigen::VectorXd v = t->flat();
      for (int k = 0; k < n; ++k) os << ',' << v[k];
    }
    os << '\n';
  }
  return os.str();
}

Dataset from_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty CSV");
  auto split_fields = [](const std::string& l) {
    std::vector<std::string> f;
    std::stringstream ss(l);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    return f;
  };
  const auto header = split_fields(line);
  Dataset ds;
  if (header.size() == 9) {
    ds.dim = 2;
  } else if (header.size() == 19) {
    ds.dim = 3;
  } else {
    throw ValidationError(source + ": header has " + std::to_string(header.size()) + " columns");
  }
  const std::size_t n = static_cast<std::size_t>(ds.dim * ds.dim);
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != header.size()) {
      throw ValidationError(source + ":" + std::to_string(row) + ": row has " + std::to_string(f.size()) +
                            " columns, expected " + std::to_string(header.size()) + " (mixed dimensions)");
    }
    Sample s;
    if (f[0] == "train") {
      s.split = Split::train;
    } else if (f[0] == "validation") {
      s.split = Split::validation;
    } else {
      throw ParseError(source + ":" + std::to_string(row) + ": unknown split '" + f[0] + "'");
    }
    std::vector<double> v(2 * n);
    for (std::size_t k = 0; k < 2 * n; ++k) {
      try {
        std::size_t used = 0;
        v[k] = std::stod(f[k + 1], &used);
        if (used != f[k + 1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(source + ":" + std::to_string(row) + ": bad number '" + f[k + 1] + "'");
      }
    }
    s.F = Tensor2::from_flat(ds.dim, std::span<const double>(v.data(), n));
    s.P = Tensor2::from_flat(ds.dim, std::span<const double>(v.data() + n, n));
    ds.samples.push_back(std::move(s));
  }
  ds.validate();
  return ds;
}

DatasetStats compute_stats(const Dataset& dataset) {
  if (dataset.samples.empty()) throw EmptyDataset("cannot compute statistics of an empty dataset");
  dataset.validate();
  const int d = dataset.dim;
  const int n = d * d;
  const auto m = static_cast<Eigen::Index>(dataset.size());
  Eigen::MatrixXd X(n, m), Y(n, m);
  const Eigen::VectorXd eye = Tensor2::identity(d).flat();
  for (Eigen::Index i = 0; i < m; ++i) {
    X.col(i) = dataset.samples[static_cast<std::size_t>(i)].F.flat() - eye;
    Y.col(i) = dataset.samples[static_cast<std::size_t>(i)].P.flat();
  }
  DatasetStats st;
  st.dim = d;
  st.count = static_cast<std::size_t>(m);
  auto describe = [m](const Eigen::MatrixXd& Z, std::vector<ComponentStats>& out, Eigen::MatrixXd& centred) {
    centred = Z;
    for (Eigen::Index k = 0; k < Z.rows(); ++k) {
      ComponentStats c;
      c.mean = Z.row(k).mean();
      centred.row(k).array() -= c.mean;
      c.stddev = m > 1 ? std::sqrt(centred.row(k).squaredNorm() / static_cast<double>(m - 1)) : 0.0;
      c.min = Z.row(k).minCoeff();
      c.max = Z.row(k).maxCoeff();
      out.push_back(c);
    }
  };
  Eigen::MatrixXd Xc, Yc;
  describe(X, st.input, Xc);
  describe(Y, st.output, Yc);
  st.correlation = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double sx = Xc.row(i).norm();
    for (int j = 0; j < n; ++j) {
      const double sy = Yc.row(j).norm();
      if (sx == 0.0 || sy == 0.0) {
        st.degenerate.emplace_back(i, j);
        continue;
      }
      st.correlation(i, j) = std::clamp(Xc.row(i).dot(Yc.row(j)) / (sx * sy), -1.0, 1.0);
    }
  }
  return st;
}

std::string DatasetStats::to_json(int indent) const {
  nlohmann::json j;
  j["dim"] = dim;
  j["count"] = count;
  j["input_variable"] = "F - I";
  auto table = [this](const std::vector<ComponentStats>& v, const char* prefix) {
    nlohmann::json t = nlohmann::json::object();
    for (std::size_t k = 0; k < v.size(); ++k) {
      t[prefix + component_name(dim, static_cast<int>(k))] = {
          {"mean", v[k].mean}, {"std", v[k].stddev}, {"min", v[k].min}, {"max", v[k].max}};
    }
    return t;
  };
  j["input"] = table(input, "F_");
  j["output"] = table(output, "P_");
  nlohmann::json corr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < correlation.rows(); ++i) {
    std::vector<double> row;
    for (Eigen::Index k = 0; k < correlation.cols(); ++k) row.push_back(correlation(i, k));
    corr.push_back(row);
  }
  j["correlation"] = corr;
  nlohmann::json deg = nlohmann::json::array();
  for (const auto& [a, b] : degenerate) deg.push_back({a, b});
  j["degenerate_pairs"] = deg;
  return j.dump(indent);
}

std::string DatasetStats::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(6);
  const int n = dim * dim;
  auto block = [&](const std::vector<ComponentStats>& v, const char* prefix) {
    os << "variable";
    for (int k = 0; k < n; ++k) os << ',' << prefix << component_name(dim, k);
    os << "\nmean";
    for (const auto& c : v) os << ',' << c.mean;
    os << "\nstd";
    for (const auto& c : v) os << ',' << c.stddev;
    os << "\nmin";
    for (const auto& c : v) os << ',' << c.min;
    os << "\nmax";
    for (const auto& c : v) os << ',' << c.max;
    os << "\n\n";
  };
  block(input, "F_");
  block(output, "P_");
  os << "correlation";
  for (int k = 0; k < n; ++k) os << ",P_" << component_name(dim, k);
  os << '\n';
  for (int i = 0; i < n; ++i) {
    os << "F_" << component_name(dim, i);
    for (int k = 0; k < n; ++k) os << ',' << correlation(i, k);
    os << '\n';
  }
  return os.str();
}

}  // namespace porohom::data
