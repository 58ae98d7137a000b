#include "porohom/rve/beam_network.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/hash.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace porohom::rve {

namespace {

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

}  // namespace

Material Material::defaults(double domain_edge) {
  Material m;
  const double r = 0.02 * domain_edge;
  m.A = std::numbers::pi * r * r;
  m.I = std::numbers::pi * r * r * r * r / 4.0;
  return m;
}

double BeamNetwork::element_length(std::size_t e) const {
  const auto& el = elements.at(e);
  return (nodes[static_cast<std::size_t>(el[1])] - nodes[static_cast<std::size_t>(el[0])]).norm();
}

std::vector<int> periodic_classes(const BeamNetwork& network) {
  std::vector<int> parent(network.node_count());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& p : network.periodic_pairs) {
    const int a = find_root(parent, p.plus);
    const int b = find_root(parent, p.minus);
    // Smallest index becomes the representative, which keeps masters stable.
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = find_root(parent, static_cast<int>(i));
  return parent;
}

bool BeamNetwork::is_connected() const {
  if (nodes.empty()) return false;
  const auto cls = periodic_classes(*this);
  std::vector<int> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto unite = [&](int a, int b) {
    a = find_root(parent, a);
    b = find_root(parent, b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  };
  for (const auto& e : elements) unite(cls[static_cast<std::size_t>(e[0])], cls[static_cast<std::size_t>(e[1])]);
  for (std::size_t i = 0; i < nodes.size(); ++i) unite(static_cast<int>(i), cls[i]);
  const int root = find_root(parent, 0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (find_root(parent, static_cast<int>(i)) != root) return false;
  }
  return true;
}

void BeamNetwork::validate() const {
  if (dim != 2 && dim != 3) throw ValidationError("dim: must be 2 or 3, got " + std::to_string(dim));
  if (!(domain_edge > 0.0)) throw ValidationError("domain_edge: must be positive");
  if (nodes.empty()) throw ValidationError("nodes: network has no nodes");
  if (elements.empty()) throw ValidationError("elements: network has no elements");
  const int n = static_cast<int>(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].allFinite()) throw ValidationError("nodes: node " + std::to_string(i) + " is not finite");
    if (dim == 2 && nodes[i].z() != 0.0) {
      throw ValidationError("nodes: node " + std::to_string(i) + " has a z coordinate in a 2D network");
    }
  }
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const auto& el = elements[e];
    if (el[0] < 0 || el[0] >= n || el[1] < 0 || el[1] >= n) {
      throw ValidationError("elements: element " + std::to_string(e) + " has an invalid node index");
    }
    if (el[0] == el[1]) throw ValidationError("elements: element " + std::to_string(e) + " has i == j");
    if (!(element_length(e) > 0.0)) {
      throw ValidationError("elements: element " + std::to_string(e) + " has zero length");
    }
  }
  const double tol = 1e-9 * domain_edge;
  for (std::size_t k = 0; k < periodic_pairs.size(); ++k) {
    const auto& p = periodic_pairs[k];
    const std::string who = "periodic_pairs: pair " + std::to_string(k);
    if (p.plus < 0 || p.plus >= n || p.minus < 0 || p.minus >= n) throw ValidationError(who + " has an invalid node index");
    if (p.axis < 0 || p.axis >= dim) throw ValidationError(who + " has an invalid axis");
    const Eigen::Vector3d d = nodes[static_cast<std::size_t>(p.plus)] - nodes[static_cast<std::size_t>(p.minus)];
    for (int a = 0; a < dim; ++a) {
      const double expected = a == p.axis ? domain_edge : 0.0;
      if (std::abs(d[a] - expected) > tol) throw ValidationError(who + " does not lie on opposite faces");
    }
  }
  const std::size_t corners = dim == 2 ? 4 : 8;
  if (corner_nodes.size() != corners) {
    throw ValidationError("corner_nodes: expected " + std::to_string(corners) + " entries, got " +
                          std::to_string(corner_nodes.size()));
  }
  for (int c : corner_nodes) {
    if (c < 0 || c >= n) throw ValidationError("corner_nodes: invalid node index " + std::to_string(c));
  }
  if (!(material.E > 0.0) || !(material.A > 0.0) || !(material.I > 0.0) || !(material.nu > -1.0 && material.nu < 0.5)) {
    throw ValidationError("material: E, A, I must be positive and -1 < nu < 0.5");
  }
  if (!is_connected()) throw ValidationError("graph: network is not connected");
}

std::string BeamNetwork::fingerprint() const {
  Fnv1a h;
  h.update_value(dim);
  h.update_value(domain_edge);
  for (const auto& p : nodes) {
    h.update_value(p.x());
    h.update_value(p.y());
    h.update_value(p.z());
  }
  for (const auto& e : elements) {
    h.update_value(e[0]);
    h.update_value(e[1]);
  }
  for (const auto& p : periodic_pairs) {
    h.update_value(p.plus);
    h.update_value(p.minus);
    h.update_value(p.axis);
  }
  for (int c : corner_nodes) h.update_value(c);
  h.update_value(material.E);
  h.update_value(material.nu);
  h.update_value(material.A);
  h.update_value(material.I);
  return h.hex();
}

}  // namespace porohom::rve
