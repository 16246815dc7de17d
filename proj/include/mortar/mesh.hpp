#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mortar/types.hpp"

namespace mortar {

/// Interior (d-1)-facet between two cells; `minus` is the lower cell along `axis`.
struct InteriorFace {
  int axis;
  int minus;
  int plus;
};

struct BoundaryFacet {
  int axis;
  int element;
  int side;  // 0: low end of the axis, 1: high end
};

/// Tensor-product quadrilateral/hexahedral mesh of the box [0, extents].
/// Cells, vertices and dofs are numbered lexicographically with axis 0 fastest.
struct StructuredMesh {
  int dim = 2;
  std::array<int, 3> cells{1, 1, 1};
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  std::vector<Point> vertices;
  std::vector<InteriorFace> faces;
  std::vector<BoundaryFacet> boundary_facets;

  [[nodiscard]] int num_elements() const;
  [[nodiscard]] std::array<int, 3> element_coords(int element) const;
  [[nodiscard]] int element_index(const std::array<int, 3>& coords) const;
  [[nodiscard]] std::array<double, 3> cell_size() const;
  /// Id of the interior face on `axis` whose lower cell is `lower_element`.
  [[nodiscard]] int face_index(int axis, int lower_element) const;
  [[nodiscard]] Point element_centroid(int element) const;

  /// Expected interior-face count from the tensor-product formula.
  [[nodiscard]] static long expected_interior_faces(int dim, const std::array<int, 3>& cells);
};

/// Which fine entity a nodal dof is interior to.
enum class EntityKind { Vertex, Edge, Face, Interior };

struct AgglomerateTopology;

/// Nodal layout of continuous order-p Lagrange elements on a StructuredMesh.
struct DofLayout {
  int order = 1;
  int dim = 2;
  std::array<int, 3> nodes{1, 1, 1};  // p * cells + 1 along used axes
  std::vector<Point> coords;
  std::vector<EntityKind> entity;
  std::vector<int> essential_dofs;
  std::vector<char> is_essential;
  /// Per dof: Elements whose closure contains it (filled by bind()).
  Incidence dof_T_incidence;
  /// Per dof: Faces containing it (filled by bind()).
  Incidence dof_F_incidence;

  [[nodiscard]] int size() const { return static_cast<int>(coords.size()); }
  [[nodiscard]] std::array<int, 3> node_coords(int dof) const;
  [[nodiscard]] int dof_index(const std::array<int, 3>& node) const;
  /// Dofs of one cell in local lexicographic order ((p+1)^d entries).
  [[nodiscard]] std::vector<int> element_dofs(const StructuredMesh& mesh, int element) const;
  /// Cells whose closure contains the dof.
  [[nodiscard]] std::vector<int> containing_elements(const StructuredMesh& mesh, int dof) const;

  void bind(const StructuredMesh& mesh, const AgglomerateTopology& topology);
  [[nodiscard]] bool bound() const { return dof_T_incidence.size() == size(); }
};

/// Elements (agglomerates) and Faces (interfaces between two Elements).
struct AgglomerateTopology {
  std::vector<int> element_to_T;
  Incidence T_members;
  Incidence face_members;                        // fine interior-face ids per Face
  std::vector<std::pair<int, int>> face_neighbors;  // (T-, T+), T- < T+
  Incidence T_faces;                             // incident Faces per Element, ascending
  std::vector<int> fine_face_to_F;               // -1 when the fine face is inside an Element

  [[nodiscard]] int num_elements() const { return T_members.size(); }
  [[nodiscard]] int num_faces() const { return face_members.size(); }
};

std::pair<StructuredMesh, DofLayout> build_structured_mesh(int dim, std::array<int, 3> cells,
                                                          std::array<double, 3> extents, int order);

/// Axis-aligned blocks of `block_shape` cells each.
AgglomerateTopology agglomerate_structured(const StructuredMesh& mesh, std::array<int, 3> block_shape);

/// Builds Faces by intersecting the Elements' fine-face collections. Element ids must be 0..n-1,
/// each Element connected in the dual graph.
AgglomerateTopology derive_faces(const StructuredMesh& mesh, std::vector<int> element_to_T);

/// max_l |J_l|: the largest number of Elements sharing a dof.
int kappa_diagnostic(const DofLayout& layout);

/// Plain-text entity listing of the agglomeration.
void write_topology(std::ostream& out, const StructuredMesh& mesh, const AgglomerateTopology& topology);

}  // namespace mortar
