#include "medfem/mesh.hpp"

#include "medfem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace medfem {

namespace {

double interval_length(const Mesh& m, int e) {
  return std::abs(m.nodes[m.elements[e][1]].x() - m.nodes[m.elements[e][0]].x());
}

double triangle_signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

}  // namespace

Eigen::Matrix<double, 2, 3> Mesh::element_gradients(int e) const {
  Eigen::Matrix<double, 2, 3> g = Eigen::Matrix<double, 2, 3>::Zero();
  const auto& el = elements[e];
  if (dimension == 1) {
    const double h = nodes[el[1]].x() - nodes[el[0]].x();
    g(0, 0) = -1.0 / h;
    g(0, 1) = 1.0 / h;
  } else {
    const Vec2& a = nodes[el[0]];
    const Vec2& b = nodes[el[1]];
    const Vec2& c = nodes[el[2]];
    const double twoA = 2.0 * triangle_signed_area(a, b, c);
    // grad of barycentric coordinate i is the rotated opposite edge / (2|T|)
    g.col(0) = Vec2(b.y() - c.y(), c.x() - b.x()) / twoA;
    g.col(1) = Vec2(c.y() - a.y(), a.x() - c.x()) / twoA;
    g.col(2) = Vec2(a.y() - b.y(), b.x() - a.x()) / twoA;
  }
  return g;
}

Vec2 Mesh::element_point(int e, const double* barycentric) const {
  Vec2 p = Vec2::Zero();
  const auto& el = elements[e];
  for (int i = 0; i < nodes_per_element(); ++i) p += barycentric[i] * nodes[el[i]];
  return p;
}

int Mesh::locate(const Vec2& x, double barycentric[3]) const {
  if (dimension == 1) {
    // nodes are sorted ascending for generated and snapshot meshes
    int lo = 0, hi = element_count() - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (x.x() <= nodes[elements[mid][1]].x())
        hi = mid;
      else
        lo = mid + 1;
    }
    const double x0 = nodes[elements[lo][0]].x();
    const double x1 = nodes[elements[lo][1]].x();
    double t = (x.x() - x0) / (x1 - x0);
    t = std::min(1.0, std::max(0.0, t));
    barycentric[0] = 1.0 - t;
    barycentric[1] = t;
    barycentric[2] = 0.0;
    return lo;
  }
  if (structured_resolution > 0) {
    const int n = structured_resolution;
    const double cx = std::min(1.0 - 1e-15, std::max(0.0, x.x()));
    const double cy = std::min(1.0 - 1e-15, std::max(0.0, x.y()));
    const int i = std::min(n - 1, static_cast<int>(cx * n));
    const int j = std::min(n - 1, static_cast<int>(cy * n));
    const double fx = cx * n - i;
    const double fy = cy * n - j;
    // cell split along the v00-v11 diagonal: lower triangle has fy <= fx
    const int e = 2 * (j * n + i) + (fy <= fx ? 0 : 1);
    const auto& el = elements[e];
    const Vec2 &a = nodes[el[0]], &b = nodes[el[1]], &c = nodes[el[2]];
    const double twoA = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    barycentric[0] =
        ((b.x() - x.x()) * (c.y() - x.y()) - (c.x() - x.x()) * (b.y() - x.y())) / twoA;
    barycentric[1] =
        ((c.x() - x.x()) * (a.y() - x.y()) - (a.x() - x.x()) * (c.y() - x.y())) / twoA;
    barycentric[2] = 1.0 - barycentric[0] - barycentric[1];
    return e;
  }
  // linear scan with a small tolerance; element counts stay at desk scale
  int best = 0;
  double best_violation = std::numeric_limits<double>::max();
  for (int e = 0; e < element_count(); ++e) {
    const auto& el = elements[e];
    const Vec2 &a = nodes[el[0]], &b = nodes[el[1]], &c = nodes[el[2]];
    const double twoA = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    const double l1 = ((b.x() - x.x()) * (c.y() - x.y()) - (c.x() - x.x()) * (b.y() - x.y())) / twoA;
    const double l2 = ((c.x() - x.x()) * (a.y() - x.y()) - (a.x() - x.x()) * (c.y() - x.y())) / twoA;
    const double l3 = 1.0 - l1 - l2;
    const double violation = std::max({-l1, -l2, -l3, 0.0});
    if (violation < best_violation) {
      best_violation = violation;
      best = e;
      barycentric[0] = l1;
      barycentric[1] = l2;
      barycentric[2] = l3;
      if (violation == 0.0) break;
    }
  }
  for (int i = 0; i < 3; ++i) barycentric[i] = std::min(1.0, std::max(0.0, barycentric[i]));
  const double s = barycentric[0] + barycentric[1] + barycentric[2];
  for (int i = 0; i < 3; ++i) barycentric[i] /= s;
  return best;
}

double Mesh::max_element_diameter() const {
  double h = 0.0;
  for (int e = 0; e < element_count(); ++e) {
    const auto& el = elements[e];
    if (dimension == 1) {
      h = std::max(h, interval_length(*this, e));
    } else {
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          h = std::max(h, (nodes[el[i]] - nodes[el[j]]).norm());
    }
  }
  return h;
}

void Mesh::check_invariants() const {
  if (dimension != 1 && dimension != 2)
    throw InvalidDomainError("mesh dimension must be 1 or 2");
  if (nodes.empty() || elements.empty())
    throw InvalidDomainError("mesh has no nodes or no elements");
  if (element_measures.size() != elements.size())
    throw InvalidDomainError("element measure count mismatch");

  const int npe = nodes_per_element();
  double sum = 0.0;
  for (int e = 0; e < element_count(); ++e) {
    const auto& el = elements[e];
    for (int i = 0; i < npe; ++i) {
      if (el[i] < 0 || el[i] >= node_count())
        throw InvalidDomainError("element node index out of range");
      for (int j = i + 1; j < npe; ++j)
        if (el[i] == el[j]) throw InvalidDomainError("degenerate element: repeated node");
    }
    if (!(element_measures[e] > 0.0))
      throw InvalidDomainError("nonpositive element measure");
    if (dimension == 2) {
      const double s = triangle_signed_area(nodes[el[0]], nodes[el[1]], nodes[el[2]]);
      if (!(s > 0.0)) throw InvalidDomainError("triangle with nonpositive signed area");
    }
    sum += element_measures[e];
  }
  if (std::abs(sum - total_measure) > 1e-12 * std::max(1.0, std::abs(total_measure)))
    throw InvalidDomainError("element measures do not sum to the total measure");

  // connectivity: union-find over shared nodes
  std::vector<int> parent(node_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& el : elements)
    for (int i = 1; i < npe; ++i) parent[find(el[i])] = find(el[0]);
  const int root = find(0);
  for (int i = 0; i < node_count(); ++i)
    if (find(i) != root) throw InvalidDomainError("mesh is not connected");
}

Mesh build_mesh(const DomainSpec& domain, int resolution) {
  if (resolution < 1) throw InvalidDomainError("mesh resolution must be >= 1");
  Mesh m;
  if (const auto* iv = std::get_if<IntervalDomain>(&domain)) {
    if (!(iv->a < iv->b)) throw InvalidDomainError("interval requires a < b");
    m.dimension = 1;
    const int n = resolution;
    const double h = (iv->b - iv->a) / n;
    m.nodes.reserve(n + 1);
    for (int i = 0; i <= n; ++i) m.nodes.push_back(Vec2(iv->a + i * h, 0.0));
    m.elements.reserve(n);
    m.element_measures.reserve(n);
    for (int e = 0; e < n; ++e) {
      m.elements.push_back({e, e + 1, -1});
      m.element_measures.push_back(m.nodes[e + 1].x() - m.nodes[e].x());
    }
    m.total_measure = iv->b - iv->a;
  } else {
    m.dimension = 2;
    const int n = resolution;
    const int np = n + 1;
    m.nodes.reserve(np * np);
    for (int j = 0; j < np; ++j)
      for (int i = 0; i < np; ++i)
        m.nodes.push_back(Vec2(double(i) / n, double(j) / n));
    auto vid = [np](int i, int j) { return j * np + i; };
    m.elements.reserve(2 * n * n);
    m.element_measures.reserve(2 * n * n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j);
        const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        m.elements.push_back({v00, v10, v11});
        m.elements.push_back({v00, v11, v01});
      }
    }
    for (const auto& el : m.elements) {
      const double s = triangle_signed_area(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]]);
      m.element_measures.push_back(std::abs(s));
    }
    m.total_measure = 1.0;
    m.structured_resolution = n;
  }
  m.check_invariants();
  return m;
}

MeshPtr build_mesh_shared(const DomainSpec& domain, int resolution) {
  return std::make_shared<const Mesh>(build_mesh(domain, resolution));
}

}  // namespace medfem
