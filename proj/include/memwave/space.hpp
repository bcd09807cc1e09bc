#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "memwave/mesh.hpp"

namespace memwave {

enum class SpaceKind { Fem1D, Fem2D, Spectral };

/// Reference shape functions on [0,1]: P1 hat pair or P2 (vertex, midpoint,
/// vertex) triple. Returns values and reference derivatives.
inline void shape_1d(int degree, double xi, std::vector<double>& val,
                     std::vector<double>& dval) {
  if (degree == 1) {
    val = {1.0 - xi, xi};
    dval = {-1.0, 1.0};
  } else {
    val = {(1.0 - xi) * (1.0 - 2.0 * xi), 4.0 * xi * (1.0 - xi),
           xi * (2.0 * xi - 1.0)};
    dval = {4.0 * xi - 3.0, 4.0 - 8.0 * xi, 4.0 * xi - 1.0};
  }
}

/// Reference triangle shape functions; node order P1 = (v0,v1,v2),
/// P2 = (v0,v1,v2,m01,m12,m20). Gradients are with respect to (x,y) on the
/// reference element.
inline void shape_tri(int degree, double x, double y, std::vector<double>& val,
                      std::vector<std::array<double, 2>>& grad) {
  const double l0 = 1.0 - x - y, l1 = x, l2 = y;
  if (degree == 1) {
    val = {l0, l1, l2};
    grad = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
  } else {
    val = {l0 * (2 * l0 - 1), l1 * (2 * l1 - 1), l2 * (2 * l2 - 1),
           4 * l0 * l1,       4 * l1 * l2,       4 * l2 * l0};
    const std::array<double, 2> g0{-1.0, -1.0}, g1{1.0, 0.0}, g2{0.0, 1.0};
    auto lin = [](double a, const std::array<double, 2>& g) {
      return std::array<double, 2>{a * g[0], a * g[1]};
    };
    auto add = [](std::array<double, 2> u, std::array<double, 2> v) {
      return std::array<double, 2>{u[0] + v[0], u[1] + v[1]};
    };
    grad = {lin(4 * l0 - 1, g0),
            lin(4 * l1 - 1, g1),
            lin(4 * l2 - 1, g2),
            add(lin(4 * l1, g0), lin(4 * l0, g1)),
            add(lin(4 * l2, g1), lin(4 * l1, g2)),
            add(lin(4 * l0, g2), lin(4 * l2, g0))};
  }
}

/// Finite-dimensional trial space V_h: 1D/2D Lagrange elements that vanish
/// on the Dirichlet boundary, or the spectral sine basis on (0,1).
///
/// Free degrees of freedom are enumerated lexicographically by node index
/// and then by component, so assembly and solves are deterministic.
class GalerkinSpace {
 public:
  struct BoundaryEdgeNodes {
    std::vector<int> nodes;  // 2 (P1) or 3 (P2: a, mid, b)
    BoundaryMarker marker;
  };

  static GalerkinSpace fem_1d(const Mesh1D& mesh, int degree) {
    if (degree != 1 && degree != 2)
      throw std::invalid_argument("fem_1d: degree must be 1 or 2");
    mesh.validate();
    GalerkinSpace s;
    s.kind_ = SpaceKind::Fem1D;
    s.degree_ = degree;
    s.components_ = 1;
    s.mesh1_ = mesh;
    const int ne = mesh.elements();
    if (degree == 1) {
      for (double x : mesh.vertices) s.nodes_.push_back({x, 0.0});
      for (int e = 0; e < ne; ++e) s.elem_nodes_.push_back({e, e + 1});
    } else {
      // nodes ordered by coordinate: vertex, midpoint, vertex, ...
      for (int e = 0; e < ne; ++e) {
        s.nodes_.push_back({mesh.vertices[e], 0.0});
        s.nodes_.push_back(
            {0.5 * (mesh.vertices[e] + mesh.vertices[e + 1]), 0.0});
      }
      s.nodes_.push_back({mesh.vertices[ne], 0.0});
      for (int e = 0; e < ne; ++e)
        s.elem_nodes_.push_back({2 * e, 2 * e + 1, 2 * e + 2});
    }
    s.constrained_.assign(s.nodes_.size(), 0);
    s.constrained_.front() = 1;
    s.constrained_.back() = 1;
    s.build_dof_map();
    return s;
  }

  static GalerkinSpace fem_2d(const TriMesh2D& mesh, int degree,
                              int components = 1) {
    if (degree != 1 && degree != 2)
      throw std::invalid_argument("fem_2d: degree must be 1 or 2");
    if (components != 1 && components != 2)
      throw std::invalid_argument("fem_2d: components must be 1 or 2");
    if (components == 2 && degree != 1)
      throw std::invalid_argument("fem_2d: vector space is degree 1 only");
    mesh.validate();
    GalerkinSpace s;
    s.kind_ = SpaceKind::Fem2D;
    s.degree_ = degree;
    s.components_ = components;
    s.mesh2_ = mesh;
    for (const auto& v : mesh.vertices) s.nodes_.push_back(v);
    s.constrained_.assign(s.nodes_.size(), 0);

    std::map<std::pair<int, int>, int> edge_mid;
    auto midpoint_node = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = edge_mid.find(key);
      if (it != edge_mid.end()) return it->second;
      const int id = static_cast<int>(s.nodes_.size());
      s.nodes_.push_back({0.5 * (s.nodes_[a][0] + s.nodes_[b][0]),
                          0.5 * (s.nodes_[a][1] + s.nodes_[b][1])});
      s.constrained_.push_back(0);
      edge_mid[key] = id;
      return id;
    };

    for (const auto& t : mesh.triangles) {
      std::vector<int> en{t[0], t[1], t[2]};
      if (degree == 2) {
        en.push_back(midpoint_node(t[0], t[1]));
        en.push_back(midpoint_node(t[1], t[2]));
        en.push_back(midpoint_node(t[2], t[0]));
      }
      s.elem_nodes_.push_back(std::move(en));
    }
    for (const auto& e : mesh.boundary) {
      BoundaryEdgeNodes ben;
      ben.marker = e.marker;
      ben.nodes = {e.a, e.b};
      if (degree == 2) ben.nodes = {e.a, midpoint_node(e.a, e.b), e.b};
      if (e.marker == BoundaryMarker::Dirichlet)
        for (int nn : ben.nodes) s.constrained_[nn] = 1;
      s.boundary_edges_.push_back(std::move(ben));
    }
    s.build_dof_map();
    return s;
  }

  /// Sine eigenbasis on (0,1): phi_j(x) = sqrt(2) sin(j pi x), giving an
  /// identity mass matrix and diagonal stiffness (j pi)^2.
  static GalerkinSpace spectral(int modes) {
    if (modes < 1) throw std::invalid_argument("spectral: modes >= 1");
    GalerkinSpace s;
    s.kind_ = SpaceKind::Spectral;
    s.degree_ = 0;
    s.components_ = 1;
    s.m_ = modes;
    return s;
  }

  SpaceKind kind() const { return kind_; }
  int degree() const { return degree_; }
  int components() const { return components_; }
  int dimension() const { return m_; }
  /// Polynomial order parameter l (elements of degree l-1); 0 for spectral.
  int order_l() const { return kind_ == SpaceKind::Spectral ? 0 : degree_ + 1; }

  const Mesh1D& mesh1d() const { return mesh1_; }
  const TriMesh2D& mesh2d() const { return mesh2_; }

  double h() const {
    switch (kind_) {
      case SpaceKind::Fem1D: return mesh1_.h();
      case SpaceKind::Fem2D: return mesh2_.h();
      default: throw std::logic_error("spectral space has no mesh size");
    }
  }

  int num_elements() const { return static_cast<int>(elem_nodes_.size()); }
  const std::vector<int>& element_nodes(int e) const { return elem_nodes_[e]; }
  const std::array<double, 2>& node(int n) const { return nodes_[n]; }
  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  bool is_constrained(int n) const { return constrained_[n] != 0; }
  const std::vector<BoundaryEdgeNodes>& boundary_edges() const {
    return boundary_edges_;
  }

  /// Free dof index for (node, component), or -1 if constrained.
  int dof(int n, int comp = 0) const { return node_dof_[n * components_ + comp]; }

  double spectral_basis(int j, double x) const {
    return std::numbers::sqrt2 * std::sin((j + 1) * std::numbers::pi * x);
  }
  double spectral_basis_deriv(int j, double x) const {
    const double w = (j + 1) * std::numbers::pi;
    return std::numbers::sqrt2 * w * std::cos(w * x);
  }
  double spectral_eigenvalue(int j) const {
    const double w = (j + 1) * std::numbers::pi;
    return w * w;
  }

  /// Point evaluation of a coefficient vector (scalar spaces on 1D only;
  /// convergence studies and projections use this).
  double evaluate(const Eigen::VectorXd& c, double x) const {
    if (kind_ == SpaceKind::Spectral) {
      double u = 0.0;
      for (int j = 0; j < m_; ++j) u += c[j] * spectral_basis(j, x);
      return u;
    }
    if (kind_ != SpaceKind::Fem1D)
      throw std::logic_error("evaluate(x): 1D spaces only");
    const int e = locate_1d(x);
    const double xa = mesh1_.vertices[e], xb = mesh1_.vertices[e + 1];
    const double xi = (x - xa) / (xb - xa);
    std::vector<double> val, dval;
    shape_1d(degree_, xi, val, dval);
    double u = 0.0;
    const auto& en = elem_nodes_[e];
    for (std::size_t i = 0; i < en.size(); ++i) {
      const int d = dof(en[i]);
      if (d >= 0) u += c[d] * val[i];
    }
    return u;
  }

  double evaluate_deriv(const Eigen::VectorXd& c, double x) const {
    if (kind_ == SpaceKind::Spectral) {
      double u = 0.0;
      for (int j = 0; j < m_; ++j) u += c[j] * spectral_basis_deriv(j, x);
      return u;
    }
    if (kind_ != SpaceKind::Fem1D)
      throw std::logic_error("evaluate_deriv(x): 1D spaces only");
    const int e = locate_1d(x);
    const double xa = mesh1_.vertices[e], xb = mesh1_.vertices[e + 1];
    const double xi = (x - xa) / (xb - xa);
    std::vector<double> val, dval;
    shape_1d(degree_, xi, val, dval);
    double u = 0.0;
    const auto& en = elem_nodes_[e];
    for (std::size_t i = 0; i < en.size(); ++i) {
      const int d = dof(en[i]);
      if (d >= 0) u += c[d] * dval[i] / (xb - xa);
    }
    return u;
  }

 private:
  void build_dof_map() {
    node_dof_.assign(nodes_.size() * components_, -1);
    int next = 0;
    for (std::size_t n = 0; n < nodes_.size(); ++n)
      for (int comp = 0; comp < components_; ++comp)
        if (!constrained_[n]) node_dof_[n * components_ + comp] = next++;
    m_ = next;
    if (m_ == 0) throw std::invalid_argument("space has no free dofs");
  }

  int locate_1d(double x) const {
    const auto& v = mesh1_.vertices;
    auto it = std::upper_bound(v.begin(), v.end(), x);
    int e = static_cast<int>(it - v.begin()) - 1;
    return std::clamp(e, 0, mesh1_.elements() - 1);
  }

  SpaceKind kind_ = SpaceKind::Spectral;
  int degree_ = 0;
  int components_ = 1;
  int m_ = 0;
  Mesh1D mesh1_;
  TriMesh2D mesh2_;
  std::vector<std::array<double, 2>> nodes_;
  std::vector<char> constrained_;
  std::vector<int> node_dof_;
  std::vector<std::vector<int>> elem_nodes_;
  std::vector<BoundaryEdgeNodes> boundary_edges_;
};

}  // namespace memwave
