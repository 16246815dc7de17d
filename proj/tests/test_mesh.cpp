#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "mortar/error.hpp"
#include "mortar/mesh.hpp"

using namespace mortar;

TEST_CASE("structured mesh sizes and lexicographic numbering") {
  auto [mesh, layout] = build_structured_mesh(2, {3, 2, 1}, {3.0, 1.0, 1.0}, 2);
  CHECK(mesh.num_elements() == 6);
  CHECK(layout.size() == 7 * 5);
  CHECK(layout.nodes[0] == 7);
  CHECK(layout.nodes[1] == 5);
  // axis 0 runs fastest
  CHECK(layout.dof_index({1, 0, 0}) == 1);
  CHECK(layout.dof_index({0, 1, 0}) == 7);
  CHECK(layout.coords[8][0] == doctest::Approx(0.5));
  CHECK(layout.coords[8][1] == doctest::Approx(0.25));
  CHECK(mesh.element_index({2, 1, 0}) == 5);
  CHECK(layout.element_dofs(mesh, 0).size() == 9);
  CHECK(layout.element_dofs(mesh, 0)[3] == 7);
}

TEST_CASE("interior face count matches the tensor-product formula") {
  for (int dim : {2, 3}) {
    auto [mesh, layout] = build_structured_mesh(dim, {4, 3, 2}, {1.0, 1.0, 1.0}, 1);
    CHECK(static_cast<long>(mesh.faces.size()) == StructuredMesh::expected_interior_faces(dim, mesh.cells));
  }
  auto [mesh, layout] = build_structured_mesh(2, {4, 3, 1}, {1.0, 1.0, 1.0}, 1);
  CHECK(mesh.faces.size() == 3u * 3u + 4u * 2u);
  CHECK(mesh.boundary_facets.size() == 2u * (4u + 3u));
}

TEST_CASE("essential dofs are exactly the boundary nodes") {
  auto [mesh, layout] = build_structured_mesh(3, {2, 3, 2}, {1.0, 1.0, 1.0}, 2);
  long interior = 1;
  for (int a = 0; a < 3; ++a) interior *= layout.nodes[a] - 2;
  CHECK(static_cast<long>(layout.essential_dofs.size()) == layout.size() - interior);
}

TEST_CASE("invalid mesh parameters are rejected") {
  CHECK_THROWS_AS(build_structured_mesh(4, {2, 2, 2}, {1, 1, 1}, 1), ConfigError);
  CHECK_THROWS_AS(build_structured_mesh(2, {2, 0, 1}, {1, 1, 1}, 1), ConfigError);
  CHECK_THROWS_AS(build_structured_mesh(2, {2, 2, 1}, {1, 1, 1}, 0), ConfigError);
  CHECK_THROWS_AS(build_structured_mesh(2, {2, 2, 1}, {1, -1, 1}, 1), GeometryError);
}

TEST_CASE("box agglomeration of a 4x4 mesh into 2x2 blocks") {
  auto [mesh, layout] = build_structured_mesh(2, {4, 4, 1}, {1, 1, 1}, 1);
  const auto topo = agglomerate_structured(mesh, {2, 2, 1});
  CHECK(topo.num_elements() == 4);
  CHECK(topo.num_faces() == 4);
  for (int F = 0; F < topo.num_faces(); ++F) {
    CHECK(topo.face_neighbors[F].first < topo.face_neighbors[F].second);
    CHECK(topo.face_members.row_size(F) == 2);
  }
  for (int T = 0; T < 4; ++T) CHECK(topo.T_faces.row_size(T) == 2);
  CHECK_THROWS_AS(agglomerate_structured(mesh, {3, 2, 1}), ConfigError);
}

TEST_CASE("every fine face is inside one Element or in exactly one Face") {
  auto [mesh, layout] = build_structured_mesh(3, {4, 4, 2}, {1, 1, 1}, 1);
  const auto topo = agglomerate_structured(mesh, {2, 1, 2});
  std::vector<int> seen(mesh.faces.size(), 0);
  for (int F = 0; F < topo.num_faces(); ++F)
    for (int f : topo.face_members[F]) ++seen[f];
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const int a = topo.element_to_T[mesh.faces[f].minus];
    const int b = topo.element_to_T[mesh.faces[f].plus];
    if (a == b) {
      CHECK(seen[f] == 0);
      CHECK(topo.fine_face_to_F[f] == -1);
    } else {
      REQUIRE(seen[f] == 1);
      const auto& nb = topo.face_neighbors[topo.fine_face_to_F[f]];
      CHECK(nb.first == std::min(a, b));
      CHECK(nb.second == std::max(a, b));
    }
  }
}

TEST_CASE("derive_faces validates Element maps") {
  auto [mesh, layout] = build_structured_mesh(2, {3, 1, 1}, {1, 1, 1}, 1);
  CHECK_THROWS_AS(derive_faces(mesh, {0, 1, 0}), TopologyError);   // Element 0 disconnected
  CHECK_THROWS_AS(derive_faces(mesh, {0, 2, 2}), TopologyError);   // id 1 missing
  CHECK_THROWS_AS(derive_faces(mesh, {0, 1}), TopologyError);      // wrong size
  const auto topo = derive_faces(mesh, {1, 1, 0});
  CHECK(topo.num_faces() == 1);
  CHECK(topo.face_neighbors[0] == std::pair<int, int>{0, 1});
}

TEST_CASE("dof incidences and the sharing diagnostic") {
  {
    auto [mesh, layout] = build_structured_mesh(2, {4, 4, 1}, {1, 1, 1}, 1);
    const auto topo = agglomerate_structured(mesh, {2, 2, 1});
    layout.bind(mesh, topo);
    CHECK(kappa_diagnostic(layout) == 4);
    const int center = layout.dof_index({2, 2, 0});
    CHECK(layout.dof_T_incidence.row_size(center) == 4);
    CHECK(layout.dof_F_incidence.row_size(center) == 4);
    const int edge = layout.dof_index({2, 1, 0});
    CHECK(layout.dof_T_incidence.row_size(edge) == 2);
    CHECK(layout.dof_F_incidence.row_size(edge) == 1);
  }
  {
    auto [mesh, layout] = build_structured_mesh(3, {4, 4, 4}, {1, 1, 1}, 1);
    const auto topo = agglomerate_structured(mesh, {2, 2, 2});
    CHECK_THROWS_AS(kappa_diagnostic(layout), TopologyError);
    layout.bind(mesh, topo);
    CHECK(kappa_diagnostic(layout) == 8);
  }
}

TEST_CASE("topology listing") {
  auto [mesh, layout] = build_structured_mesh(2, {4, 2, 1}, {1, 1, 1}, 1);
  const auto topo = agglomerate_structured(mesh, {2, 2, 1});
  std::ostringstream out;
  write_topology(out, mesh, topo);
  const std::string text = out.str();
  CHECK(text.find("agglomerates 2") != std::string::npos);
  CHECK(text.find("faces 1") != std::string::npos);
  CHECK(text.find("F 0 0 1 :") != std::string::npos);
}

TEST_CASE("mesh and agglomerate counts") {
  {
    auto [mesh, layout] = build_structured_mesh(3, {16, 16, 16}, {1, 1, 1}, 1);
    CHECK(layout.size() == 4913);
    const auto topo = agglomerate_structured(mesh, {4, 4, 4});
    CHECK(topo.num_elements() == 64);
    CHECK(topo.num_faces() == 3 * 4 * 4 * (4 - 1));
  }
  {
    auto [mesh, layout] = build_structured_mesh(2, {1, 1, 1}, {1, 1, 1}, 1);
    CHECK(layout.size() == 4);
    CHECK(mesh.faces.empty());
  }
  {
    auto [mesh, layout] = build_structured_mesh(2, {2, 2, 1}, {1, 1, 1}, 2);
    CHECK(layout.size() == 25);
    CHECK(mesh.faces.size() == 4u);
    const auto whole = agglomerate_structured(mesh, {2, 2, 1});
    CHECK(whole.num_elements() == 1);
    CHECK(whole.num_faces() == 0);
    layout.bind(mesh, whole);
    CHECK(kappa_diagnostic(layout) == 1);
  }
  {
    auto [mesh, layout] = build_structured_mesh(2, {2, 1, 1}, {1, 1, 1}, 1);
    const auto topo = agglomerate_structured(mesh, {1, 1, 1});
    CHECK(topo.num_faces() == 1);
    CHECK(topo.face_members.row_size(0) == 1);
  }
  {
    auto [mesh, layout] = build_structured_mesh(2, {4, 2, 1}, {1, 1, 1}, 1);
    const auto topo = agglomerate_structured(mesh, {2, 2, 1});
    CHECK(topo.num_faces() == 1);
    CHECK(topo.face_members.row_size(0) == 2);
  }
  {
    auto [mesh, layout] = build_structured_mesh(3, {3, 2, 2}, {1, 1, 1}, 1);
    const auto topo = agglomerate_structured(mesh, {1, 1, 1});
    CHECK(topo.num_elements() == mesh.num_elements());
    CHECK(topo.num_faces() == static_cast<int>(mesh.faces.size()));
  }
}
