#include "porohom/fem/mesh_io.hpp"

#include "porohom/common/error.hpp"
#include "porohom/common/io.hpp"

#include <iomanip>

namespace porohom::fem {

MacroMesh parse_mesh(const std::string& text) {
  LineReader reader(text, "mesh");
  MacroMesh m;
  long long nn = 0, ne = 0, nd = 0;
  std::string type;
  read_fields(reader, m.dim, nn, ne, nd, type);
  if (m.dim != 2 && m.dim != 3) reader.fail("dim must be 2 or 3");
  if (nn < 0 || ne < 0 || nd < 0) reader.fail("negative count in header");
  m.type = element_type_from_string(type);
  const int npe = ReferenceElement(m.type, m.dim).node_count();
  m.nodes.resize(nn, m.dim);
  for (long long i = 0; i < nn; ++i) {
    auto line = reader.next();
    for (int d = 0; d < m.dim; ++d) line >> m.nodes(i, d);
    std::string extra;
    if (line.fail() || (line >> extra)) reader.fail("malformed node line");
  }
  m.elements.resize(ne, npe);
  for (long long e = 0; e < ne; ++e) {
    auto line = reader.next();
    for (int a = 0; a < npe; ++a) line >> m.elements(e, a);
    std::string extra;
    if (line.fail() || (line >> extra)) reader.fail("malformed element line");
  }
  m.dirichlet.resize(static_cast<std::size_t>(nd));
  for (auto& d : m.dirichlet) read_fields(reader, d.node, d.component, d.value);
  if (!reader.done()) {
    reader.next();
    reader.fail("trailing content");
  }
  m.validate();
  return m;
}

std::string format_mesh(const MacroMesh& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << m.dim << " " << m.node_count() << " " << m.element_count() << " " << m.dirichlet.size() << " "
     << to_string(m.type) << "\n";
  for (Eigen::Index i = 0; i < m.nodes.rows(); ++i) {
    for (int d = 0; d < m.dim; ++d) os << (d ? " " : "") << m.nodes(i, d);
    os << "\n";
  }
  for (Eigen::Index e = 0; e < m.elements.rows(); ++e) {
    for (Eigen::Index a = 0; a < m.elements.cols(); ++a) os << (a ? " " : "") << m.elements(e, a);
    os << "\n";
  }
  for (const auto& d : m.dirichlet) os << d.node << " " << d.component << " " << d.value << "\n";
  return os.str();
}

MacroMesh load_mesh(const std::filesystem::path& path) { return parse_mesh(read_text_file(path)); }

void save_mesh(const MacroMesh& mesh, const std::filesystem::path& path) { write_text_file(path, format_mesh(mesh)); }

}  // namespace porohom::fem
