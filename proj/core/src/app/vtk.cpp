#include "porohom/app/vtk.hpp"

#include "porohom/common/error.hpp"
#include "porohom/fem/element.hpp"

#include <iomanip>
#include <sstream>

namespace porohom::app {

namespace {

void write_arrays(std::ostringstream& os, const char* section, std::size_t count, const std::vector<VtkArray>& arrays) {
  if (arrays.empty()) return;
  os << section << ' ' << count << '\n';
  for (const auto& a : arrays) {
    if (static_cast<std::size_t>(a.values.rows()) != count) {
      throw ShapeMismatch("VTK array '" + a.name + "' has " + std::to_string(a.values.rows()) + " rows, expected " +
                          std::to_string(count));
    }
    if (a.values.cols() == 1) {
      os << "SCALARS " << a.name << " double 1\nLOOKUP_TABLE default\n";
      for (Eigen::Index i = 0; i < a.values.rows(); ++i) os << a.values(i, 0) << '\n';
    } else {
      os << "VECTORS " << a.name << " double\n";
      for (Eigen::Index i = 0; i < a.values.rows(); ++i) {
        for (int c = 0; c < 3; ++c) os << (c < a.values.cols() ? a.values(i, c) : 0.0) << (c < 2 ? ' ' : '\n');
      }
    }
  }
}

void header(std::ostringstream& os, const std::string& title) {
  os << std::setprecision(12);
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
}

}  // namespace

std::string vtk_mesh(const fem::MacroMesh& mesh, const std::vector<VtkArray>& point_data,
                     const std::vector<VtkArray>& cell_data, const std::string& title) {
  std::ostringstream os;
  header(os, title);
  const auto nN = mesh.node_count();
  os << "POINTS " << nN << " double\n";
  for (std::size_t a = 0; a < nN; ++a) {
    for (int c = 0; c < 3; ++c) {
      os << (c < mesh.dim ? mesh.nodes(static_cast<Eigen::Index>(a), c) : 0.0) << (c < 2 ? ' ' : '\n');
    }
  }
  const auto nE = mesh.element_count();
  const auto k = static_cast<std::size_t>(mesh.elements.cols());
  os << "CELLS " << nE << ' ' << nE * (k + 1) << '\n';
  for (std::size_t e = 0; e < nE; ++e) {
    os << k;
    for (std::size_t j = 0; j < k; ++j) os << ' ' << mesh.elements(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(j));
    os << '\n';
  }
  const int type = fem::ReferenceElement(mesh.type, mesh.dim).vtk_cell_type();
  os << "CELL_TYPES " << nE << '\n';
  for (std::size_t e = 0; e < nE; ++e) os << type << '\n';
  write_arrays(os, "POINT_DATA", nN, point_data);
  write_arrays(os, "CELL_DATA", nE, cell_data);
  return os.str();
}

std::string vtk_network(const rve::BeamNetwork& network, const std::vector<VtkArray>& point_data,
                        const std::vector<VtkArray>& cell_data, const Eigen::MatrixXd* node_positions,
                        const std::string& title) {
  std::ostringstream os;
  header(os, title);
  const auto nN = network.nodes.size();
  if (node_positions && static_cast<std::size_t>(node_positions->rows()) != nN) {
    throw ShapeMismatch("node positions do not match the network");
  }
  os << "POINTS " << nN << " double\n";
  for (std::size_t a = 0; a < nN; ++a) {
    for (int c = 0; c < 3; ++c) {
      double v = network.nodes[a][c];
      if (node_positions && c < node_positions->cols()) v = (*node_positions)(static_cast<Eigen::Index>(a), c);
      os << v << (c < 2 ? ' ' : '\n');
    }
  }
  const auto nE = network.elements.size();
  os << "CELLS " << nE << ' ' << nE * 3 << '\n';
  for (const auto& e : network.elements) os << "2 " << e[0] << ' ' << e[1] << '\n';
  os << "CELL_TYPES " << nE << '\n';
  for (std::size_t e = 0; e < nE; ++e) os << "3\n";
  write_arrays(os, "POINT_DATA", nN, point_data);
  write_arrays(os, "CELL_DATA", nE, cell_data);
  return os.str();
}

VtkSummary read_vtk_summary(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto fail = [](const std::string& what) -> void { throw ParseError("vtk: " + what); };
  if (!std::getline(in, line) || line.rfind("# vtk DataFile Version", 0) != 0) fail("missing version line");
  if (!std::getline(in, line)) fail("missing title");
  if (!std::getline(in, line) || line != "ASCII") fail("only ASCII files are supported");
  std::string word, kind;
  if (!(in >> word >> kind) || word != "DATASET" || kind != "UNSTRUCTURED_GRID") fail("not an unstructured grid");

  VtkSummary s;
  std::string type;
  if (!(in >> word >> s.points >> type) || word != "POINTS") fail("missing POINTS");
  for (std::size_t i = 0; i < 3 * s.points; ++i) {
    double v;
    if (!(in >> v)) fail("truncated POINTS");
  }
  std::size_t total = 0;
  if (!(in >> word >> s.cells >> total) || word != "CELLS") fail("missing CELLS");
  std::size_t used = 0;
  for (std::size_t c = 0; c < s.cells; ++c) {
    std::size_t k;
    if (!(in >> k)) fail("truncated CELLS");
    used += k + 1;
    for (std::size_t j = 0; j < k; ++j) {
      long long id;
      if (!(in >> id)) fail("truncated CELLS");
      if (id < 0 || static_cast<std::size_t>(id) >= s.points) fail("cell references point " + std::to_string(id));
    }
  }
  if (used != total) fail("CELLS size field does not match its entries");
  std::size_t n_types;
  if (!(in >> word >> n_types) || word != "CELL_TYPES" || n_types != s.cells) fail("bad CELL_TYPES");
  s.cell_types.resize(n_types);
  for (auto& t : s.cell_types) {
    if (!(in >> t)) fail("truncated CELL_TYPES");
  }

  std::vector<std::pair<std::string, std::size_t>>* target = nullptr;
  std::size_t rows = 0;
  while (in >> word) {
    if (word == "POINT_DATA" || word == "CELL_DATA") {
      if (!(in >> rows)) fail("bad " + word);
      const bool points = word == "POINT_DATA";
      if (rows != (points ? s.points : s.cells)) fail(word + " count mismatch");
      target = points ? &s.point_arrays : &s.cell_arrays;
    } else if (word == "SCALARS" || word == "VECTORS") {
      if (!target) fail(word + " outside a data section");
      std::string name, dtype;
      std::size_t comps = 3;
      if (!(in >> name >> dtype)) fail("bad array header");
      if (word == "SCALARS") {
        std::string rest;
        std::getline(in, rest);
        std::istringstream r(rest);
        comps = 1;
        r >> comps;
        std::string lt, def;
        if (!(in >> lt >> def) || lt != "LOOKUP_TABLE") fail("missing LOOKUP_TABLE");
      }
      for (std::size_t i = 0; i < rows * comps; ++i) {
        double v;
        if (!(in >> v)) fail("array '" + name + "' is truncated");
      }
      target->emplace_back(name, comps);
    } else {
      fail("unexpected keyword '" + word + "'");
    }
  }
  return s;
}

}  // namespace porohom::app
