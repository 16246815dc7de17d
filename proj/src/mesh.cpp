#include "mortar/mesh.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>
#include <tuple>

#include "mortar/error.hpp"

namespace mortar {

namespace {

std::array<int, 3> unflatten(long index, const std::array<int, 3>& n) {
  std::array<int, 3> c{};
  c[0] = static_cast<int>(index % n[0]);
  index /= n[0];
  c[1] = static_cast<int>(index % n[1]);
  c[2] = static_cast<int>(index / n[1]);
  return c;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

int StructuredMesh::num_elements() const { return cells[0] * cells[1] * cells[2]; }

std::array<int, 3> StructuredMesh::element_coords(int element) const { return unflatten(element, cells); }

int StructuredMesh::element_index(const std::array<int, 3>& c) const {
  return c[0] + cells[0] * (c[1] + cells[1] * c[2]);
}

std::array<double, 3> StructuredMesh::cell_size() const {
  return {extents[0] / cells[0], extents[1] / cells[1], extents[2] / cells[2]};
}

int StructuredMesh::face_index(int axis, int lower_element) const {
  int offset = 0;
  for (int a = 0; a < axis; ++a) {
    std::array<int, 3> n = cells;
    n[a] -= 1;
    offset += n[0] * n[1] * n[2];
  }
  std::array<int, 3> n = cells;
  n[axis] -= 1;
  const auto c = element_coords(lower_element);
  return offset + c[0] + n[0] * (c[1] + n[1] * c[2]);
}

Point StructuredMesh::element_centroid(int element) const {
  const auto c = element_coords(element);
  const auto h = cell_size();
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim; ++a) x[a] = (c[a] + 0.5) * h[a];
  return x;
}

long StructuredMesh::expected_interior_faces(int dim, const std::array<int, 3>& cells) {
  long total = 0;
  for (int a = 0; a < dim; ++a) {
    long count = cells[a] - 1;
    for (int b = 0; b < dim; ++b)
      if (b != a) count *= cells[b];
    total += count;
  }
  return total;
}

std::array<int, 3> DofLayout::node_coords(int dof) const { return unflatten(dof, nodes); }

int DofLayout::dof_index(const std::array<int, 3>& i) const {
  return i[0] + nodes[0] * (i[1] + nodes[1] * i[2]);
}

std::vector<int> DofLayout::element_dofs(const StructuredMesh& mesh, int element) const {
  const auto c = mesh.element_coords(element);
  const int p = order;
  const int n1 = p + 1;
  const int n2 = dim >= 2 ? p + 1 : 1;
  const int n3 = dim == 3 ? p + 1 : 1;
  std::vector<int> dofs;
  dofs.reserve(static_cast<std::size_t>(n1) * n2 * n3);
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        std::array<int, 3> node{c[0] * p + i, c[1] * p + j, dim == 3 ? c[2] * p + k : 0};
        dofs.push_back(dof_index(node));
      }
  return dofs;
}

std::vector<int> DofLayout::containing_elements(const StructuredMesh& mesh, int dof) const {
  const auto node = node_coords(dof);
  std::array<std::vector<int>, 3> candidates;
  for (int a = 0; a < 3; ++a) {
    if (a >= dim) {
      candidates[a] = {0};
      continue;
    }
    const int i = node[a];
    if (i % order == 0) {
      const int v = i / order;
      if (v - 1 >= 0) candidates[a].push_back(v - 1);
      if (v < mesh.cells[a]) candidates[a].push_back(v);
    } else {
      candidates[a].push_back(i / order);
    }
  }
  std::vector<int> result;
  for (int z : candidates[2])
    for (int y : candidates[1])
      for (int x : candidates[0]) result.push_back(mesh.element_index({x, y, z}));
  std::sort(result.begin(), result.end());
  return result;
}

void DofLayout::bind(const StructuredMesh& mesh, const AgglomerateTopology& topology) {
  dof_T_incidence = Incidence{};
  dof_F_incidence = Incidence{};
  std::vector<int> elements;
  std::vector<int> faces;
  for (int l = 0; l < size(); ++l) {
    const auto cells = containing_elements(mesh, l);
    elements.clear();
    for (int e : cells) elements.push_back(topology.element_to_T[e]);
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    dof_T_incidence.push_row(elements);

    // A dof lies on the fine face between cells c and c + e_a when both contain it.
    faces.clear();
    for (int e : cells) {
      const auto c = mesh.element_coords(e);
      for (int a = 0; a < dim; ++a) {
        if (c[a] + 1 >= mesh.cells[a]) continue;
        auto up = c;
        up[a] += 1;
        const int neighbor = mesh.element_index(up);
        if (!std::binary_search(cells.begin(), cells.end(), neighbor)) continue;
        const int F = topology.fine_face_to_F[mesh.face_index(a, e)];
        if (F >= 0) faces.push_back(F);
      }
    }
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    dof_F_incidence.push_row(faces);
  }
}

std::pair<StructuredMesh, DofLayout> build_structured_mesh(int dim, std::array<int, 3> cells,
                                                          std::array<double, 3> extents, int order) {
  if (dim != 2 && dim != 3) throw ConfigError("mesh dimension must be 2 or 3, got " + std::to_string(dim));
  if (order < 1) throw ConfigError("polynomial order must be >= 1, got " + std::to_string(order));
  for (int a = 0; a < dim; ++a) {
    if (cells[a] < 1) throw ConfigError("cells per axis must be >= 1");
    if (!(extents[a] > 0.0)) throw GeometryError("domain extents must be positive");
  }
  for (int a = dim; a < 3; ++a) {
    cells[a] = 1;
    extents[a] = 0.0;
  }

  StructuredMesh mesh;
  mesh.dim = dim;
  mesh.cells = cells;
  mesh.extents = extents;
  for (int a = dim; a < 3; ++a) mesh.extents[a] = 1.0;  // keeps cell_size() finite

  std::array<int, 3> vn{1, 1, 1};
  for (int a = 0; a < dim; ++a) vn[a] = cells[a] + 1;
  const auto h = mesh.cell_size();
  const long num_vertices = static_cast<long>(vn[0]) * vn[1] * vn[2];
  mesh.vertices.resize(num_vertices);
  for (long v = 0; v < num_vertices; ++v) {
    const auto i = unflatten(v, vn);
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; ++a) x[a] = i[a] * h[a];
    mesh.vertices[v] = x;
  }

  const int ne = mesh.num_elements();
  for (int a = 0; a < dim; ++a)
    for (int e = 0; e < ne; ++e) {
      auto c = mesh.element_coords(e);
      if (c[a] + 1 < cells[a]) {
        auto up = c;
        up[a] += 1;
        mesh.faces.push_back({a, e, mesh.element_index(up)});
      }
    }
  for (int a = 0; a < dim; ++a)
    for (int side = 0; side < 2; ++side)
      for (int e = 0; e < ne; ++e) {
        const auto c = mesh.element_coords(e);
        if ((side == 0 && c[a] == 0) || (side == 1 && c[a] == cells[a] - 1))
          mesh.boundary_facets.push_back({a, e, side});
      }

  DofLayout layout;
  layout.order = order;
  layout.dim = dim;
  for (int a = 0; a < dim; ++a) layout.nodes[a] = order * cells[a] + 1;
  const long num_dofs = static_cast<long>(layout.nodes[0]) * layout.nodes[1] * layout.nodes[2];
  layout.coords.resize(num_dofs);
  layout.entity.resize(num_dofs);
  layout.is_essential.assign(num_dofs, 0);
  static constexpr EntityKind kinds3[] = {EntityKind::Vertex, EntityKind::Edge, EntityKind::Face,
                                          EntityKind::Interior};
  static constexpr EntityKind kinds2[] = {EntityKind::Vertex, EntityKind::Face, EntityKind::Interior};
  for (long l = 0; l < num_dofs; ++l) {
    const auto i = unflatten(l, layout.nodes);
    Point x{0.0, 0.0, 0.0};
    int entity_dim = 0;
    bool essential = false;
    for (int a = 0; a < dim; ++a) {
      x[a] = i[a] * h[a] / order;
      if (i[a] % order != 0) ++entity_dim;
      if (i[a] == 0 || i[a] == layout.nodes[a] - 1) essential = true;
    }
    layout.coords[l] = x;
    layout.entity[l] = dim == 3 ? kinds3[entity_dim] : kinds2[entity_dim];
    if (essential) {
      layout.is_essential[l] = 1;
      layout.essential_dofs.push_back(static_cast<int>(l));
    }
  }
  return {std::move(mesh), std::move(layout)};
}

AgglomerateTopology agglomerate_structured(const StructuredMesh& mesh, std::array<int, 3> block_shape) {
  std::array<int, 3> blocks{1, 1, 1};
  for (int a = 0; a < mesh.dim; ++a) {
    if (block_shape[a] < 1 || mesh.cells[a] % block_shape[a] != 0)
      throw ConfigError("block shape must divide cells per axis (axis " + std::to_string(a) + ": " +
                        std::to_string(block_shape[a]) + " vs " + std::to_string(mesh.cells[a]) + ")");
    blocks[a] = mesh.cells[a] / block_shape[a];
  }
  for (int a = mesh.dim; a < 3; ++a) block_shape[a] = 1;

  std::vector<int> element_to_T(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto c = mesh.element_coords(e);
    std::array<int, 3> b{c[0] / block_shape[0], c[1] / block_shape[1], c[2] / block_shape[2]};
    element_to_T[e] = b[0] + blocks[0] * (b[1] + blocks[1] * b[2]);
  }
  return derive_faces(mesh, std::move(element_to_T));
}

AgglomerateTopology derive_faces(const StructuredMesh& mesh, std::vector<int> element_to_T) {
  const int ne = mesh.num_elements();
  if (static_cast<int>(element_to_T.size()) != ne)
    throw TopologyError("element map size does not match the mesh");
  int num_T = 0;
  for (int T : element_to_T) {
    if (T < 0) throw TopologyError("negative Element id");
    num_T = std::max(num_T, T + 1);
  }

  AgglomerateTopology topo;
  topo.element_to_T = std::move(element_to_T);
  {
    Incidence e2T;
    for (int e = 0; e < ne; ++e) e2T.push_row(std::array<int, 1>{topo.element_to_T[e]});
    topo.T_members = e2T.transpose(num_T);
  }
  for (int T = 0; T < num_T; ++T)
    if (topo.T_members.row_size(T) == 0)
      throw TopologyError("Element ids must be contiguous; Element " + std::to_string(T) + " is empty");

  // Connectivity through fine faces internal to each Element.
  DisjointSets sets(ne);
  for (const auto& f : mesh.faces)
    if (topo.element_to_T[f.minus] == topo.element_to_T[f.plus]) sets.unite(f.minus, f.plus);
  for (int T = 0; T < num_T; ++T) {
    const auto members = topo.T_members[T];
    const int root = sets.find(members[0]);
    for (int e : members)
      if (sets.find(e) != root)
        throw TopologyError("Element " + std::to_string(T) + " is not connected in the dual graph");
  }

  struct Key {
    int lo, hi, face;
  };
  std::vector<Key> keys;
  for (int f = 0; f < static_cast<int>(mesh.faces.size()); ++f) {
    const int a = topo.element_to_T[mesh.faces[f].minus];
    const int b = topo.element_to_T[mesh.faces[f].plus];
    if (a != b) keys.push_back({std::min(a, b), std::max(a, b), f});
  }
  std::sort(keys.begin(), keys.end(), [](const Key& x, const Key& y) {
    return std::tie(x.lo, x.hi, x.face) < std::tie(y.lo, y.hi, y.face);
  });

  topo.fine_face_to_F.assign(mesh.faces.size(), -1);
  std::vector<int> members;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i;
    members.clear();
    while (j < keys.size() && keys[j].lo == keys[i].lo && keys[j].hi == keys[i].hi) {
      members.push_back(keys[j].face);
      topo.fine_face_to_F[keys[j].face] = topo.num_faces();
      ++j;
    }
    topo.face_neighbors.emplace_back(keys[i].lo, keys[i].hi);
    topo.face_members.push_row(members);
    i = j;
  }

  Incidence F2T;
  for (const auto& [lo, hi] : topo.face_neighbors) F2T.push_row(std::array<int, 2>{lo, hi});
  topo.T_faces = F2T.transpose(num_T);
  return topo;
}

int kappa_diagnostic(const DofLayout& layout) {
  if (!layout.bound()) throw TopologyError("dof layout is not bound to an agglomeration");
  int kappa = 0;
  for (int l = 0; l < layout.size(); ++l) kappa = std::max(kappa, layout.dof_T_incidence.row_size(l));
  return kappa;
}

void write_topology(std::ostream& out, const StructuredMesh& mesh, const AgglomerateTopology& topo) {
  out << "mesh " << mesh.dim << " cells";
  for (int a = 0; a < mesh.dim; ++a) out << ' ' << mesh.cells[a];
  out << "\nelements " << mesh.num_elements() << "\ninterior_faces " << mesh.faces.size()
      << "\nboundary_facets " << mesh.boundary_facets.size() << '\n';
  out << "agglomerates " << topo.num_elements() << '\n';
  for (int T = 0; T < topo.num_elements(); ++T) {
    out << "T " << T << " :";
    for (int e : topo.T_members[T]) out << ' ' << e;
    out << " | faces:";
    for (int F : topo.T_faces[T]) out << ' ' << F;
    out << '\n';
  }
  out << "faces " << topo.num_faces() << '\n';
  for (int F = 0; F < topo.num_faces(); ++F) {
    out << "F " << F << " " << topo.face_neighbors[F].first << ' ' << topo.face_neighbors[F].second << " :";
    for (int f : topo.face_members[F]) out << ' ' << f;
    out << '\n';
  }
}

}  // namespace mortar
