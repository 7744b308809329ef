#include "motorkit/mesh_cut.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace motorkit::meshops {

namespace {

// Path-compressing union-find over dense indices.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

std::pair<int, int> sorted_edge(int u, int v) {
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

double triangle_area(const geom::Vec3& a, const geom::Vec3& b,
                     const geom::Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

}  // namespace

void validate_mesh(const TriMesh& mesh) {
  const auto& pos = mesh.skin.rest_positions;
  const int nv = static_cast<int>(pos.size());
  if (mesh.skin.influences.size() != pos.size()) {
    throw std::invalid_argument(
        "validate_mesh: influence list size does not match vertex count");
  }
  std::map<std::pair<int, int>, int> edge_use;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) {
        char msg[96];
        std::snprintf(msg, sizeof msg,
                      "validate_mesh: triangle %zu references vertex %d "
                      "outside [0, %d)",
                      t, tri[k], nv);
        throw std::invalid_argument(msg);
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] ||
        triangle_area(pos[tri[0]], pos[tri[1]], pos[tri[2]]) <= 1e-12) {
      char msg[64];
      std::snprintf(msg, sizeof msg, "validate_mesh: triangle %zu is degenerate",
                    t);
      throw std::invalid_argument(msg);
    }
    for (int k = 0; k < 3; ++k) {
      const auto e = sorted_edge(tri[k], tri[(k + 1) % 3]);
      if (++edge_use[e] > 2) {
        char msg[96];
        std::snprintf(msg, sizeof msg,
                      "validate_mesh: edge (%d, %d) is non-manifold (more "
                      "than 2 incident triangles)",
                      e.first, e.second);
        throw std::invalid_argument(msg);
      }
    }
  }
}

double bbox_diagonal(std::span<const geom::Vec3> points) {
  if (points.empty()) return 0.0;
  geom::Vec3 lo = points[0];
  geom::Vec3 hi = points[0];
  for (const auto& p : points) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    lo.z = std::min(lo.z, p.z);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
    hi.z = std::max(hi.z, p.z);
  }
  return (hi - lo).norm();
}

PlaneSide classify_vertex(const geom::Vec3& x, const cga::CutPlane& plane,
                          double eps) {
  const double d = cga::signed_distance(plane, x);
  if (std::abs(d) <= eps) return PlaneSide::On;
  return d > 0.0 ? PlaneSide::Above : PlaneSide::Below;
}

EdgeIntersection edge_plane_intersection(const geom::Vec3& a,
                                         const geom::Vec3& b,
                                         const cga::CutPlane& plane) {
  const double da = cga::signed_distance(plane, a);
  const double db = cga::signed_distance(plane, b);
  if (!(da * db < 0.0)) {
    throw std::invalid_argument(
        "edge_plane_intersection: endpoints must lie strictly on opposite "
        "sides of the plane");
  }
  EdgeIntersection hit;
  hit.t = da / (da - db);
  hit.point = a + (b - a) * hit.t;
  return hit;
}

CutResult cut_mesh(const TriMesh& mesh, const cga::CutPlane& plane) {
  validate_mesh(mesh);
  const auto& pos = mesh.skin.rest_positions;
  const double eps = 1e-9 * bbox_diagonal(pos);

  std::vector<double> dist(pos.size());
  std::vector<PlaneSide> side(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    dist[i] = cga::signed_distance(plane, pos[i]);
    side[i] = std::abs(dist[i]) <= eps
                  ? PlaneSide::On
                  : (dist[i] > 0.0 ? PlaneSide::Above : PlaneSide::Below);
  }

  CutResult out;
  out.mesh.skin.rest_positions = pos;
  out.mesh.skin.influences = mesh.skin.influences;
  // On-plane vertices are snapped exactly onto the plane and stay shared.
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (side[i] == PlaneSide::On) {
      out.mesh.skin.rest_positions[i] = pos[i] - plane.normal * dist[i];
    }
  }

  // One intersection per crossing edge, materialized as a pair of copies so
  // the two sides separate; keyed on the sorted edge for determinism and
  // watertight reuse across the (at most two) incident triangles.
  std::map<std::pair<int, int>, std::pair<int, int>> edge_copies;
  auto cut_edge = [&](int u, int v) {
    const auto key = sorted_edge(u, v);
    auto it = edge_copies.find(key);
    if (it != edge_copies.end()) return it->second;
    const auto hit =
        edge_plane_intersection(pos[key.first], pos[key.second], plane);
    std::map<int, double> blend;
    for (const auto& inf : mesh.skin.influences[key.first]) {
      blend[inf.bone] += (1.0 - hit.t) * inf.weight;
    }
    for (const auto& inf : mesh.skin.influences[key.second]) {
      blend[inf.bone] += hit.t * inf.weight;
    }
    double total = 0.0;
    for (const auto& [bone, w] : blend) total += w;
    std::vector<motion::VertexInfluence> merged;
    for (const auto& [bone, w] : blend) {
      if (w > 0.0) merged.push_back({bone, w / total});
    }
    const int above_idx = static_cast<int>(out.mesh.skin.rest_positions.size());
    const int below_idx = above_idx + 1;
    for (int copy = 0; copy < 2; ++copy) {
      out.mesh.skin.rest_positions.push_back(hit.point);
      out.mesh.skin.influences.push_back(merged);
    }
    out.new_vertex_origins[above_idx] = {key.first, key.second, hit.t};
    out.new_vertex_origins[below_idx] = {key.first, key.second, hit.t};
    it = edge_copies.emplace(key, std::pair{above_idx, below_idx}).first;
    return it->second;
  };

  auto emit_fan = [&](const std::vector<int>& poly) {
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
      out.mesh.triangles.push_back({poly[0], poly[k], poly[k + 1]});
    }
  };

  for (const auto& tri : mesh.triangles) {
    int above = 0;
    int below = 0;
    for (int k = 0; k < 3; ++k) {
      if (side[tri[k]] == PlaneSide::Above) ++above;
      if (side[tri[k]] == PlaneSide::Below) ++below;
    }
    if (above == 0 || below == 0) {
      // Wholly on one side (On vertices included); an all-On triangle lying
      // inside the plane is kept once, on the Above side.
      out.mesh.triangles.push_back(tri);
      continue;
    }
    // Walk the boundary once, splitting the polygon at the two crossing
    // points; winding order is inherited from the input triangle.
    std::vector<int> above_poly;
    std::vector<int> below_poly;
    for (int k = 0; k < 3; ++k) {
      const int vi = tri[k];
      const int vj = tri[(k + 1) % 3];
      if (side[vi] == PlaneSide::Above) {
        above_poly.push_back(vi);
      } else if (side[vi] == PlaneSide::Below) {
        below_poly.push_back(vi);
      } else {
        above_poly.push_back(vi);
        below_poly.push_back(vi);
      }
      const bool crossing = (side[vi] == PlaneSide::Above &&
                             side[vj] == PlaneSide::Below) ||
                            (side[vi] == PlaneSide::Below &&
                             side[vj] == PlaneSide::Above);
      if (crossing) {
        const auto [above_idx, below_idx] = cut_edge(vi, vj);
        above_poly.push_back(above_idx);
        below_poly.push_back(below_idx);
      }
    }
    emit_fan(above_poly);
    emit_fan(below_poly);
  }

  out.mesh.skin.refresh_conformal_cache();
  out.triangle_components = triangle_components(out.mesh, &out.component_count);
  out.components = component_stats(out.mesh, out.triangle_components,
                                   out.component_count);
  return out;
}

std::vector<int> triangle_components(const TriMesh& mesh,
                                     int* component_count) {
  const std::size_t nt = mesh.triangles.size();
  UnionFind uf(nt);
  std::map<std::pair<int, int>, std::size_t> first_owner;
  for (std::size_t t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      const auto e =
          sorted_edge(mesh.triangles[t][k], mesh.triangles[t][(k + 1) % 3]);
      auto [it, inserted] = first_owner.emplace(e, t);
      if (!inserted) uf.unite(t, it->second);
    }
  }
  std::vector<int> labels(nt, -1);
  std::map<std::size_t, int> root_label;
  int next = 0;
  for (std::size_t t = 0; t < nt; ++t) {
    const auto root = uf.find(t);
    auto [it, inserted] = root_label.emplace(root, next);
    if (inserted) ++next;
    labels[t] = it->second;
  }
  if (component_count != nullptr) *component_count = next;
  return labels;
}

std::vector<ComponentStats> component_stats(const TriMesh& mesh,
                                            std::span<const int> labels,
                                            int component_count) {
  if (labels.size() != mesh.triangles.size()) {
    throw std::invalid_argument(
        "component_stats: label count does not match triangle count");
  }
  std::vector<ComponentStats> stats(component_count);
  for (int c = 0; c < component_count; ++c) {
    std::map<int, int> vertex_seen;
    std::map<std::pair<int, int>, int> edge_use;
    int faces = 0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      if (labels[t] != c) continue;
      ++faces;
      for (int k = 0; k < 3; ++k) {
        vertex_seen[mesh.triangles[t][k]] = 1;
        ++edge_use[sorted_edge(mesh.triangles[t][k],
                               mesh.triangles[t][(k + 1) % 3])];
      }
    }
    std::vector<std::pair<int, int>> boundary;
    for (const auto& [e, uses] : edge_use) {
      if (uses == 1) boundary.push_back(e);
    }
    // Boundary rings: connected groups of boundary edges glued at shared
    // vertices.
    UnionFind rings(boundary.size());
    std::map<int, std::size_t> vertex_first_edge;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
      for (const int v : {boundary[i].first, boundary[i].second}) {
        auto [it, inserted] = vertex_first_edge.emplace(v, i);
        if (!inserted) rings.unite(i, it->second);
      }
    }
    std::map<std::size_t, int> ring_roots;
    for (std::size_t i = 0; i < boundary.size(); ++i) {
      ring_roots.emplace(rings.find(i), 1);
    }
    auto& s = stats[c];
    s.vertices = static_cast<int>(vertex_seen.size());
    s.edges = static_cast<int>(edge_use.size());
    s.triangles = faces;
    s.euler = s.vertices - s.edges + s.triangles;
    s.boundary_edges = static_cast<int>(boundary.size());
    s.boundary_rings = static_cast<int>(ring_roots.size());
    s.closed = boundary.empty();
  }
  return stats;
}

}  // namespace motorkit::meshops
