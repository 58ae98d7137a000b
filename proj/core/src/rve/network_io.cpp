#include "porohom/rve/network_io.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"

#include <iomanip>
#include <sstream>

namespace porohom::rve {

BeamNetwork parse_network(const std::string& text) {
  LineReader reader(text, "network");
  BeamNetwork net;
  long long n_nodes = 0, n_elems = 0, n_pairs = 0, n_corners = 0;
  read_fields(reader, net.dim, n_nodes, n_elems, n_pairs, n_corners);
  if (net.dim != 2 && net.dim != 3) reader.fail("dim must be 2 or 3");
  if (n_nodes < 0 || n_elems < 0 || n_pairs < 0 || n_corners < 0) reader.fail("negative count in header");

  net.nodes.reserve(static_cast<std::size_t>(n_nodes));
  for (long long i = 0; i < n_nodes; ++i) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    if (net.dim == 2) {
      read_fields(reader, p.x(), p.y());
    } else {
      read_fields(reader, p.x(), p.y(), p.z());
    }
    net.nodes.push_back(p);
  }
  net.elements.resize(static_cast<std::size_t>(n_elems));
  for (auto& e : net.elements) read_fields(reader, e[0], e[1]);
  net.periodic_pairs.resize(static_cast<std::size_t>(n_pairs));
  for (auto& p : net.periodic_pairs) read_fields(reader, p.plus, p.minus, p.axis);
  net.corner_nodes.resize(static_cast<std::size_t>(n_corners));
  for (auto& c : net.corner_nodes) read_fields(reader, c);
  read_fields(reader, net.material.E, net.material.nu, net.material.A, net.material.I, net.domain_edge);
  if (!reader.done()) {
    reader.next();
    reader.fail("trailing content after material line");
  }
  net.validate();
  return net;
}

std::string format_network(const BeamNetwork& net) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << net.dim << " " << net.nodes.size() << " " << net.elements.size() << " " << net.periodic_pairs.size() << " "
     << net.corner_nodes.size() << "\n";
  for (const auto& p : net.nodes) {
    os << p.x() << " " << p.y();
    if (net.dim == 3) os << " " << p.z();
    os << "\n";
  }
  for (const auto& e : net.elements) os << e[0] << " " << e[1] << "\n";
  for (const auto& p : net.periodic_pairs) os << p.plus << " " << p.minus << " " << p.axis << "\n";
  for (int c : net.corner_nodes) os << c << "\n";
  os << net.material.E << " " << net.material.nu << " " << net.material.A << " " << net.material.I << " "
     << net.domain_edge << "\n";
  return os.str();
}

BeamNetwork load_network(const std::filesystem::path& path) { return parse_network(read_text_file(path)); }

void save_network(const BeamNetwork& network, const std::filesystem::path& path) {
  write_text_file(path, format_network(network));
}

}  // namespace porohom::rve
