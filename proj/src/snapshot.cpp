#include "medfem/snapshot.hpp"

#include "medfem/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace medfem {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_snapshot(std::ostream& out, const DiscreteField& field) {
  const Mesh& mesh = field.mesh();
  out << "medfem-snapshot 1\n";
  out << "dimension " << mesh.dimension << "\n";
  out << "nodes " << mesh.node_count() << "\n";
  for (const auto& p : mesh.nodes) {
    out << format_double(p.x());
    if (mesh.dimension == 2) out << " " << format_double(p.y());
    out << "\n";
  }
  out << "elements " << mesh.element_count() << "\n";
  for (const auto& el : mesh.elements) {
    out << el[0] << " " << el[1];
    if (mesh.dimension == 2) out << " " << el[2];
    out << "\n";
  }
  out << "values " << field.size() << "\n";
  for (int i = 0; i < field.size(); ++i) out << format_double(field[i]) << "\n";
}

DiscreteField read_snapshot(std::istream& in) {
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "medfem-snapshot" || version != 1)
    throw IoError("not a medfem snapshot");

  auto expect = [&](const char* key) {
    std::string k;
    long n = -1;
    if (!(in >> k >> n) || k != key || n < 0)
      throw IoError(std::string("snapshot: expected '") + key + "' section");
    return n;
  };

  Mesh mesh;
  mesh.dimension = static_cast<int>(expect("dimension"));
  if (mesh.dimension != 1 && mesh.dimension != 2)
    throw IoError("snapshot: dimension must be 1 or 2");
  const long nn = expect("nodes");
  mesh.nodes.resize(nn, Vec2::Zero());
  for (long i = 0; i < nn; ++i) {
    if (!(in >> mesh.nodes[i].x())) throw IoError("snapshot: bad node coordinate");
    if (mesh.dimension == 2 && !(in >> mesh.nodes[i].y()))
      throw IoError("snapshot: bad node coordinate");
  }
  const long ne = expect("elements");
  mesh.elements.resize(ne, {-1, -1, -1});
  for (long e = 0; e < ne; ++e) {
    if (!(in >> mesh.elements[e][0] >> mesh.elements[e][1]))
      throw IoError("snapshot: bad element indices");
    if (mesh.dimension == 2 && !(in >> mesh.elements[e][2]))
      throw IoError("snapshot: bad element indices");
  }
  // element measures are derived, not stored
  mesh.element_measures.resize(ne);
  mesh.total_measure = 0.0;
  for (long e = 0; e < ne; ++e) {
    const auto& el = mesh.elements[e];
    double m;
    if (mesh.dimension == 1) {
      m = std::abs(mesh.nodes[el[1]].x() - mesh.nodes[el[0]].x());
    } else {
      const Vec2 &a = mesh.nodes[el[0]], &b = mesh.nodes[el[1]], &c = mesh.nodes[el[2]];
      m = 0.5 * std::abs((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
    }
    mesh.element_measures[e] = m;
    mesh.total_measure += m;
  }
  if (mesh.dimension == 2) {
    // recover the structured tag when the node layout is the canonical grid
    const int n = static_cast<int>(std::lround(std::sqrt(ne / 2.0)));
    if (2L * n * n == ne && (n + 1L) * (n + 1L) == nn) {
      bool canonical = true;
      for (int j = 0; j <= n && canonical; ++j)
        for (int i = 0; i <= n && canonical; ++i) {
          const Vec2& p = mesh.nodes[j * (n + 1) + i];
          canonical = p.x() == double(i) / n && p.y() == double(j) / n;
        }
      if (canonical) mesh.structured_resolution = n;
    }
  }
  mesh.check_invariants();

  const long nv = expect("values");
  if (nv != nn) throw IoError("snapshot: value count does not match node count");
  Eigen::VectorXd values(nv);
  for (long i = 0; i < nv; ++i)
    if (!(in >> values[i])) throw IoError("snapshot: bad nodal value");

  return DiscreteField(std::make_shared<const Mesh>(std::move(mesh)), std::move(values));
}

void write_snapshot_file(const std::string& path, const DiscreteField& field) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_snapshot(out, field);
  if (!out) throw IoError("write failed: " + path);
}

DiscreteField read_snapshot_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  return read_snapshot(in);
}

}  // namespace medfem
