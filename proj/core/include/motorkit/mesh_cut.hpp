#pragma once
#include <array>
#include <map>
#include <span>
#include <vector>

#include "motorkit/conformal.hpp"
#include "motorkit/motion.hpp"

namespace motorkit::meshops {

// Skinned triangle mesh: the skinning payload (positions + influences) plus
// counterclockwise index triples.
struct TriMesh {
  motion::SkinnedMesh skin;
  std::vector<std::array<int, 3>> triangles;
};

// Index validity, triangle non-degeneracy (area > 1e-12), and edge manifold
// check (every edge on at most 2 triangles). Throws std::invalid_argument.
void validate_mesh(const TriMesh& mesh);

double bbox_diagonal(std::span<const geom::Vec3> points);

enum class PlaneSide { Above, Below, On };

// Sign of the conformal incidence <up(x), pi>, with |.| <= eps collapsing
// to On. Callers derive eps from the mesh scale (1e-9 x bbox diagonal).
PlaneSide classify_vertex(const geom::Vec3& x, const cga::CutPlane& plane,
                          double eps);

struct EdgeIntersection {
  geom::Vec3 point;
  double t = 0.0;  // in (0,1), measured from a toward b
};

// Crossing point of segment ab with the plane, located by the ratio of the
// two conformal incidences. The endpoints must sit strictly on opposite
// sides; anything else throws std::invalid_argument.
EdgeIntersection edge_plane_intersection(const geom::Vec3& a,
                                         const geom::Vec3& b,
                                         const cga::CutPlane& plane);

// Provenance of a vertex created by a cut: the original edge it subdivides
// and the parameter along it.
struct NewVertexOrigin {
  int edge_a = 0;  // lower original index
  int edge_b = 0;  // higher original index
  double t = 0.0;  // from edge_a toward edge_b
};

struct ComponentStats {
  int vertices = 0;
  int edges = 0;
  int triangles = 0;
  int euler = 0;           // V - E + F
  int boundary_edges = 0;  // edges on exactly one triangle
  int boundary_rings = 0;  // connected cycles of boundary edges
  bool closed = false;
};

struct CutResult {
  TriMesh mesh;
  // New-vertex index -> source edge; original vertices are absent.
  std::map<int, NewVertexOrigin> new_vertex_origins;
  std::vector<int> triangle_components;  // dense labels, first-seen order
  int component_count = 0;
  std::vector<ComponentStats> components;
};

// Split the mesh along the plane. Triangles are assigned or subdivided per
// side; intersection vertices are created once per crossing edge and per
// side (the two sides separate topologically), with skin weights linearly
// interpolated along the edge and renormalized. On-plane vertices are
// snapped onto the plane and shared by both sides. Output ordering is fully
// deterministic: original vertices first (in order), new vertices in
// first-encounter order. Cut faces are left as open boundary rings.
CutResult cut_mesh(const TriMesh& mesh, const cga::CutPlane& plane);

// Connected components over shared (undirected) edges; labels are dense and
// ordered by first triangle appearance.
std::vector<int> triangle_components(const TriMesh& mesh,
                                     int* component_count = nullptr);

// Per-component counts for an already-labelled mesh.
std::vector<ComponentStats> component_stats(const TriMesh& mesh,
                                            std::span<const int> labels,
                                            int component_count);

}  // namespace motorkit::meshops
