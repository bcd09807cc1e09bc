#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace memwave {

/// Partition of an interval [a, b] into elements.
struct Mesh1D {
  std::vector<double> vertices;  // strictly increasing, size >= 3

  static Mesh1D uniform(double a, double b, int elements) {
    if (elements < 2 || b <= a)
      throw std::invalid_argument("Mesh1D::uniform needs b > a and n >= 2");
    Mesh1D m;
    m.vertices.resize(elements + 1);
    for (int i = 0; i <= elements; ++i)
      m.vertices[i] = a + (b - a) * i / elements;
    return m;
  }

  int elements() const { return static_cast<int>(vertices.size()) - 1; }

  double h() const {
    double hmax = 0.0;
    for (int e = 0; e < elements(); ++e)
      hmax = std::max(hmax, vertices[e + 1] - vertices[e]);
    return hmax;
  }

  void validate() const {
    if (elements() < 2) throw std::invalid_argument("Mesh1D: need >= 2 elements");
    for (std::size_t i = 1; i < vertices.size(); ++i)
      if (vertices[i] <= vertices[i - 1])
        throw std::invalid_argument("Mesh1D: vertices not strictly increasing");
  }
};

enum class BoundaryMarker { Dirichlet, Neumann };

enum class Side { Left, Right, Bottom, Top };

/// Conforming triangle mesh of a polygonal domain with marked boundary.
struct TriMesh2D {
  struct Edge {
    int a, b;
    BoundaryMarker marker;
  };

  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<Edge> boundary;

  /// Structured mesh of the unit square: n x n cells, two triangles each.
  /// Optionally one side is marked Neumann; everything else is Dirichlet.
  static TriMesh2D unit_square(int n, std::optional<Side> neumann = {}) {
    if (n < 1) throw std::invalid_argument("unit_square needs n >= 1");
    TriMesh2D m;
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i)
        m.vertices.push_back({double(i) / n, double(j) / n});
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
    auto mark = [&](Side s) {
      return (neumann && *neumann == s) ? BoundaryMarker::Neumann
                                        : BoundaryMarker::Dirichlet;
    };
    for (int i = 0; i < n; ++i) {
      m.boundary.push_back({vid(i, 0), vid(i + 1, 0), mark(Side::Bottom)});
      m.boundary.push_back({vid(i, n), vid(i + 1, n), mark(Side::Top)});
      m.boundary.push_back({vid(0, i), vid(0, i + 1), mark(Side::Left)});
      m.boundary.push_back({vid(n, i), vid(n, i + 1), mark(Side::Right)});
    }
    return m;
  }

  /// One reference triangle {(0,0),(1,0),(0,1)} with all edges carrying the
  /// given marker. Used by assembly patch tests.
  static TriMesh2D single_triangle(BoundaryMarker marker = BoundaryMarker::Neumann) {
    TriMesh2D m;
    m.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    m.triangles = {{0, 1, 2}};
    m.boundary = {{0, 1, marker}, {1, 2, marker}, {2, 0, marker}};
    return m;
  }

  /// L-shaped domain: unit square minus the open upper-right quadrant.
  static TriMesh2D l_shape(int n) {
    if (n < 2 || n % 2 != 0)
      throw std::invalid_argument("l_shape needs even n >= 2");
    TriMesh2D full = unit_square(n);
    TriMesh2D m;
    std::vector<int> remap(full.vertices.size(), -1);
    auto keep_cell = [&](const std::array<int, 3>& t) {
      double cx = 0, cy = 0;
      for (int v : t) {
        cx += full.vertices[v][0] / 3.0;
        cy += full.vertices[v][1] / 3.0;
      }
      return !(cx > 0.5 && cy > 0.5);
    };
    for (const auto& t : full.triangles) {
      if (!keep_cell(t)) continue;
      std::array<int, 3> nt;
      for (int k = 0; k < 3; ++k) {
        if (remap[t[k]] < 0) {
          remap[t[k]] = static_cast<int>(m.vertices.size());
          m.vertices.push_back(full.vertices[t[k]]);
        }
        nt[k] = remap[t[k]];
      }
      m.triangles.push_back(nt);
    }
    m.rebuild_boundary(BoundaryMarker::Dirichlet);
    return m;
  }

  /// Uniform refinement: each triangle is split into four via edge midpoints.
  TriMesh2D refine() const {
    TriMesh2D m;
    m.vertices = vertices;
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int id = static_cast<int>(m.vertices.size());
      m.vertices.push_back({0.5 * (vertices[a][0] + vertices[b][0]),
                            0.5 * (vertices[a][1] + vertices[b][1])});
      midpoint[key] = id;
      return id;
    };
    for (const auto& t : triangles) {
      const int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
      m.triangles.push_back({t[0], m01, m20});
      m.triangles.push_back({m01, t[1], m12});
      m.triangles.push_back({m20, m12, t[2]});
      m.triangles.push_back({m01, m12, m20});
    }
    for (const auto& e : boundary) {
      const int c = mid(e.a, e.b);
      m.boundary.push_back({e.a, c, e.marker});
      m.boundary.push_back({c, e.b, e.marker});
    }
    return m;
  }

  double area(int tri) const {
    const auto& t = triangles[tri];
    const auto &p0 = vertices[t[0]], &p1 = vertices[t[1]], &p2 = vertices[t[2]];
    return 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                  (p2[0] - p0[0]) * (p1[1] - p0[1]));
  }

  double h() const {
    double hmax = 0.0;
    for (const auto& t : triangles)
      for (int k = 0; k < 3; ++k) {
        const auto &p = vertices[t[k]], &q = vertices[t[(k + 1) % 3]];
        hmax = std::max(hmax, std::hypot(q[0] - p[0], q[1] - p[1]));
      }
    return hmax;
  }

  bool has_neumann() const {
    for (const auto& e : boundary)
      if (e.marker == BoundaryMarker::Neumann) return true;
    return false;
  }

  /// Checks positive areas, conformity (interior edges shared by exactly two
  /// triangles), and that the boundary list covers each boundary edge once.
  void validate() const {
    for (std::size_t i = 0; i < triangles.size(); ++i)
      if (area(static_cast<int>(i)) <= 0.0)
        throw std::invalid_argument("TriMesh2D: nonpositive triangle area");
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : triangles)
      for (int k = 0; k < 3; ++k)
        count[std::minmax(t[k], t[(k + 1) % 3])]++;
    std::map<std::pair<int, int>, int> marked;
    for (const auto& e : boundary) marked[std::minmax(e.a, e.b)]++;
    for (const auto& [edge, c] : count) {
      if (c > 2) throw std::invalid_argument("TriMesh2D: nonconforming edge");
      const bool on_boundary = (c == 1);
      const int times = marked.count(edge) ? marked.at(edge) : 0;
      if (on_boundary && times != 1)
        throw std::invalid_argument("TriMesh2D: boundary edge not marked exactly once");
      if (!on_boundary && times != 0)
        throw std::invalid_argument("TriMesh2D: interior edge carries a boundary marker");
    }
    for (const auto& [edge, times] : marked)
      if (!count.count(edge))
        throw std::invalid_argument("TriMesh2D: marked edge is not a mesh edge");
  }

 private:
  void rebuild_boundary(BoundaryMarker marker) {
    std::map<std::pair<int, int>, std::pair<int, int>> count;
    for (const auto& t : triangles)
      for (int k = 0; k < 3; ++k) {
        auto key = std::minmax(t[k], t[(k + 1) % 3]);
        if (!count.count(key)) count[key] = {t[k], t[(k + 1) % 3]};
        else count[key].first = -1;  // seen twice -> interior
      }
    for (const auto& [key, oriented] : count)
      if (oriented.first >= 0)
        boundary.push_back({oriented.first, oriented.second, marker});
  }
};

// --- plain-text mesh format ------------------------------------------------
//
//   memwave-mesh <dim>
//   vertices <N>        followed by N lines: x [y]
//   triangles <M>       (2D only) followed by M lines: i j k
//   boundary <E>        (2D only) followed by E lines: a b dirichlet|neumann

inline void write_mesh(std::ostream& os, const Mesh1D& m) {
  os << "memwave-mesh 1\nvertices " << m.vertices.size() << "\n";
  os.precision(17);
  for (double x : m.vertices) os << x << "\n";
}

inline void write_mesh(std::ostream& os, const TriMesh2D& m) {
  os << "memwave-mesh 2\nvertices " << m.vertices.size() << "\n";
  os.precision(17);
  for (const auto& v : m.vertices) os << v[0] << " " << v[1] << "\n";
  os << "triangles " << m.triangles.size() << "\n";
  for (const auto& t : m.triangles) os << t[0] << " " << t[1] << " " << t[2] << "\n";
  os << "boundary " << m.boundary.size() << "\n";
  for (const auto& e : m.boundary)
    os << e.a << " " << e.b << " "
       << (e.marker == BoundaryMarker::Dirichlet ? "dirichlet" : "neumann") << "\n";
}

inline int read_mesh_dim(std::istream& is) {
  std::string tag;
  int dim = 0;
  is >> tag >> dim;
  if (tag != "memwave-mesh" || (dim != 1 && dim != 2))
    throw std::runtime_error("not a memwave mesh file");
  return dim;
}

inline Mesh1D read_mesh_1d(std::istream& is) {
  std::string key;
  std::size_t n = 0;
  is >> key >> n;
  if (key != "vertices") throw std::runtime_error("mesh file: expected vertices");
  Mesh1D m;
  m.vertices.resize(n);
  for (auto& x : m.vertices) is >> x;
  if (!is) throw std::runtime_error("mesh file: truncated vertex list");
  m.validate();
  return m;
}

inline TriMesh2D read_mesh_2d(std::istream& is) {
  auto expect = [&](const char* want) {
    std::string key;
    std::size_t n = 0;
    is >> key >> n;
    if (key != want) throw std::runtime_error(std::string("mesh file: expected ") + want);
    return n;
  };
  TriMesh2D m;
  m.vertices.resize(expect("vertices"));
  for (auto& v : m.vertices) is >> v[0] >> v[1];
  m.triangles.resize(expect("triangles"));
  for (auto& t : m.triangles) is >> t[0] >> t[1] >> t[2];
  m.boundary.resize(expect("boundary"));
  for (auto& e : m.boundary) {
    std::string marker;
    is >> e.a >> e.b >> marker;
    if (marker == "dirichlet") e.marker = BoundaryMarker::Dirichlet;
    else if (marker == "neumann") e.marker = BoundaryMarker::Neumann;
    else throw std::runtime_error("mesh file: unknown boundary marker " + marker);
  }
  if (!is) throw std::runtime_error("mesh file: truncated");
  m.validate();
  return m;
}

}  // namespace memwave
