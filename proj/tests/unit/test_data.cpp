#include <doctest.h>

#include "porohom/common/error.hpp"
#include "porohom/data/dataset.hpp"
#include "porohom/data/generate.hpp"
#include "test_support.hpp"

#include <cstring>

using namespace porohom;
using namespace porohom::data;

namespace {

Dataset random_dataset(int dim, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.dim = dim;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s{test::random_F(rng, dim, 0.2), test::random_F(rng, dim, 1.0) - Tensor2::identity(dim), Split::train};
    ds.samples.push_back(s);
  }
  assign_split(ds, seed, 0.1);
  ds.metadata["source"] = "random";
  return ds;
}

bool same_bits(const Tensor2& a, const Tensor2& b) {
  return a.dim() == b.dim() && std::memcmp(a.matrix().data(), b.matrix().data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("binary round trip is bit-identical") {
  const auto ds = random_dataset(3, 1000, 1);
  const auto back = deserialize_dataset(serialize_dataset(ds));
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(same_bits(back.samples[i].F, ds.samples[i].F));
    CHECK(same_bits(back.samples[i].P, ds.samples[i].P));
    CHECK(back.samples[i].split == ds.samples[i].split);
  }
  CHECK(back.metadata == ds.metadata);
}

TEST_CASE("corrupt dataset files are rejected") {
  const auto bytes = serialize_dataset(random_dataset(2, 10, 2));
  std::string more = bytes;
  more[12] = 50;  // count field claims more records than present
  CHECK_THROWS_AS(deserialize_dataset(more), ParseError);
  CHECK_THROWS_AS(deserialize_dataset(bytes.substr(0, 30)), ParseError);
  CHECK_THROWS_AS(deserialize_dataset("XXXX" + bytes.substr(4)), ParseError);
  std::string version = bytes;
  version[4] = 7;
  CHECK_THROWS_AS(deserialize_dataset(version), VersionMismatch);
}

TEST_CASE("mixed dimensions are a validation error") {
  auto ds = random_dataset(2, 5, 3);
  ds.samples.push_back({Tensor2::identity(3), Tensor2(3), Split::train});
  CHECK_THROWS_AS(ds.validate(), ValidationError);
  std::string csv = to_csv(random_dataset(2, 3, 4));
  csv += "0,1,0,0,0,1,0,0,1,0,0,0,0,0,0,0,0,0,0\n";
  CHECK_THROWS_AS(from_csv(csv), ValidationError);
}

TEST_CASE("csv round trip") {
  const auto ds = random_dataset(2, 20, 5);
  const auto csv = to_csv(ds);
  CHECK(csv.rfind("split,F_xx,F_xy,F_yx,F_yy,P_xx", 0) == 0);
  const auto back = from_csv(csv);
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK((back.samples[i].F.matrix() - ds.samples[i].F.matrix()).norm() == 0.0);
}

TEST_CASE("split assignment") {
  auto ds = random_dataset(2, 200, 6);
  CHECK(ds.count(Split::validation) == 20);
  auto again = random_dataset(2, 200, 6);
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(ds.samples[i].split == again.samples[i].split);
  CHECK(ds.to_samples(Split::train).size() == 180);
}

TEST_CASE("statistics of degenerate and two-point data") {
  Dataset c;
  c.dim = 2;
  for (int i = 0; i < 5; ++i) c.samples.push_back({Tensor2::identity(2), Tensor2(2), Split::train});
  const auto s = compute_stats(c);
  CHECK(s.input[0].stddev == 0.0);
  CHECK(s.correlation.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.degenerate.size() == 16);

  Dataset t;
  t.dim = 2;
  t.samples.push_back({Tensor2::identity(2), Tensor2(2), Split::train});
  Tensor2 F = Tensor2::identity(2), P(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      F(i, j) += 1.0;
      P(i, j) = 1.0;
    }
  t.samples.push_back({F, P, Split::train});
  const auto s2 = compute_stats(t);
  CHECK(s2.correlation(0, 0) == doctest::Approx(1.0));
  CHECK(s2.correlation(1, 2) == doctest::Approx(1.0));
  CHECK(s2.input[0].mean == doctest::Approx(0.5));

  CHECK_THROWS_AS(compute_stats(Dataset{}), EmptyDataset);
}

TEST_CASE("statistics match a streaming oracle") {
  const auto ds = random_dataset(3, 500, 7);
  const auto s = compute_stats(ds);
  const int n = 9;
  // Welford update per component, independent of the two-pass implementation.
  std::vector<double> mx(n, 0), my(n, 0), m2x(n, 0), m2y(n, 0);
  Eigen::MatrixXd cxy = Eigen::MatrixXd::Zero(n, n);
  double count = 0;
  for (const auto& smp : ds.samples) {
    count += 1;
    const Eigen::VectorXd x = (smp.F - Tensor2::identity(3)).flat(), y = smp.P.flat();
    std::vector<double> dx(n), dy(n);
    for (int k = 0; k < n; ++k) {
      dx[static_cast<std::size_t>(k)] = x[k] - mx[static_cast<std::size_t>(k)];
      dy[static_cast<std::size_t>(k)] = y[k] - my[static_cast<std::size_t>(k)];
      mx[static_cast<std::size_t>(k)] += dx[static_cast<std::size_t>(k)] / count;
      my[static_cast<std::size_t>(k)] += dy[static_cast<std::size_t>(k)] / count;
    }
    for (int k = 0; k < n; ++k) {
      m2x[static_cast<std::size_t>(k)] += dx[static_cast<std::size_t>(k)] * (x[k] - mx[static_cast<std::size_t>(k)]);
      m2y[static_cast<std::size_t>(k)] += dy[static_cast<std::size_t>(k)] * (y[k] - my[static_cast<std::size_t>(k)]);
      for (int l = 0; l < n; ++l) cxy(k, l) += dx[static_cast<std::size_t>(k)] * (y[l] - my[static_cast<std::size_t>(l)]);
    }
  }
  for (int k = 0; k < n; ++k) {
    const auto K = static_cast<std::size_t>(k);
    CHECK(std::abs(s.input[K].mean - mx[K]) <= 1e-12);
    CHECK(std::abs(s.output[K].mean - my[K]) <= 1e-12);
    CHECK(std::abs(s.input[K].stddev - std::sqrt(m2x[K] / (count - 1))) <= 1e-12);
    CHECK(std::abs(s.output[K].stddev - std::sqrt(m2y[K] / (count - 1))) <= 1e-12);
    for (int l = 0; l < n; ++l) {
      const double r = cxy(k, l) / std::sqrt(m2x[K] * m2y[static_cast<std::size_t>(l)]);
      CHECK(std::abs(s.correlation(k, l) - r) <= 1e-12);
    }
  }
}

TEST_CASE("zero-magnitude simulation harvests only the unloaded state") {
  const auto net = test::network_2d();
  Gen2dConfig c;
  const auto ds = generate_2d_cases(net, {{Family::uniaxial_x, 0.0, 0.0}}, c);
  REQUIRE(ds.size() >= 1);
  for (const auto& s : ds.samples) {
    CHECK((s.F.matrix() - Eigen::Matrix2d::Identity()).norm() == 0.0);
    CHECK(s.P.matrix().cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("2D generation is deterministic and shows the block correlation pattern") {
  const auto net = test::network_2d();
  Gen2dConfig c;
  c.simulations = 7;
  c.seed = 3;
  GenerationReport rep;
  const auto a = generate_2d(net, c, &rep);
  const auto b = generate_2d(net, c);
  CHECK(serialize_dataset(a) == serialize_dataset(b));
  CHECK(rep.runs == 7);
  CHECK(a.size() == rep.harvested - rep.duplicates);
  CHECK(a.metadata.at("deduplicated") == "exact-F");

  const auto s = compute_stats(a);
  auto argmax = [&](int row) {
    Eigen::Index j = 0;
    s.correlation.row(row).cwiseAbs().maxCoeff(&j);
    return static_cast<int>(j);
  };
  CHECK(argmax(0) == 0);  // xx -> xx
  CHECK(argmax(3) == 3);  // yy -> yy
  for (int shear : {1, 2}) {
    CHECK(std::abs(s.correlation(shear, 1)) > 0.3);
    CHECK(std::abs(s.correlation(shear, 2)) > 0.3);
  }
}

TEST_CASE("zero 3D load harvests identity pairs") {
  const auto net = test::network_3d_small();
  Gen3dConfig c;
  const auto ds = generate_3d_cases(net, {Tensor2(3)}, c);
  REQUIRE(ds.size() >= 1);
  for (const auto& s : ds.samples) {
    CHECK((s.F.matrix() - Eigen::Matrix3d::Identity()).norm() == 0.0);
    CHECK(s.P.matrix().cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("component names are row-major") {
  CHECK(component_name(2, 1) == "xy");
  CHECK(component_name(3, 5) == "yz");
  CHECK(component_name(3, 7) == "zy");
}
