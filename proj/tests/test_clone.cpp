#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mortar/error.hpp"
#include "mortar/pipeline.hpp"
#include "oracles.hpp"

using namespace mortar;

namespace {

ProblemSpec problem(int dim, std::array<int, 3> cells, int p, std::array<int, 3> block, int q) {
  ProblemSpec s;
  s.dim = dim;
  s.cells = cells;
  s.order = p;
  s.block = block;
  s.coefficient = {"checkerboard", 3, 20.0};
  s.trace = {TraceSpaceKind::Polynomial, q};
  return s;
}

}  // namespace

TEST_CASE("clone numbering") {
  const auto disc = build_discretization(problem(2, {6, 4, 1}, 2, {2, 2, 1}, 1));
  const CloneMap& c = disc->clone;
  const auto& layout = disc->layout;
  const auto& free = disc->system.free;

  long total = 0;
  for (int l = 0; l < c.num_dofs; ++l) {
    total += c.J.row_size(l);
    CHECK(c.J.row_size(l) == layout.dof_T_incidence.row_size(free.free_to_dof[l]));
    for (int j : c.J[l]) CHECK(c.edof_to_dof[j] == l);
  }
  CHECK(total == c.num_edofs());

  for (int j = 1; j < c.num_edofs(); ++j) {
    const bool same = c.edof_to_T[j] == c.edof_to_T[j - 1];
    CHECK((c.edof_to_T[j] > c.edof_to_T[j - 1] || (same && c.edof_to_dof[j] > c.edof_to_dof[j - 1])));
  }
  for (int b = 1; b < c.num_bdofs(); ++b) {
    const bool same = c.bdof_to_F[b] == c.bdof_to_F[b - 1];
    CHECK((c.bdof_to_F[b] > c.bdof_to_F[b - 1] || (same && c.bdof_to_dof[b] > c.bdof_to_dof[b - 1])));
  }

  for (int T = 0; T < c.num_elements(); ++T)
    for (int p = c.T_pair_offset[T]; p < c.T_pair_offset[T + 1]; ++p) {
      const auto& pair = c.pairs[p];
      CHECK(pair.element == T);
      if (p > c.T_pair_offset[T]) CHECK(pair.face > c.pairs[p - 1].face);
      for (int i = 0; i < c.face_bdofs(pair.face); ++i) {
        const int j = c.T_edof_offset[T] + pair.trace[i];
        CHECK(c.edof_to_dof[j] == c.bdof_to_dof[c.F_bdof_offset[pair.face] + i]);
        CHECK(c.edof_on_interface[j] == 1);
      }
    }
}

TEST_CASE("averaging, injection and energy stability") {
  for (int dim : {2, 3}) {
    const auto disc = dim == 2 ? build_discretization(problem(2, {8, 8, 1}, 2, {2, 4, 1}, 1))
                               : build_discretization(problem(3, {4, 4, 4}, 1, {2, 2, 2}, 0));
    const auto& t = disc->transfer;
    const int n = disc->clone.num_dofs;
    CsrMatrix I(n, n);
    I.setIdentity();
    CHECK(CsrMatrix(CsrMatrix(t.averaging * t.injection) - I).norm() <= 1e-12 * std::sqrt(double(n)));
    const CsrMatrix Aee = disc->blocks.assemble_ee();
    const CsrMatrix stable = CsrMatrix(t.injection.transpose()) * Aee * t.injection;
    CHECK(CsrMatrix(stable - disc->system.A).norm() <= 1e-12 * disc->system.A.norm());
    std::mt19937_64 rng(5);
    const Vector v = oracle::random_vector(rng, n);
    CHECK((apply_averaging(t, apply_injection(t, v)) - v).norm() <= 1e-12 * v.norm());
    CHECK_THROWS_AS(apply_averaging(t, v), DimensionError);
  }
}

TEST_CASE("monomial counts") {
  CHECK(monomial_count(0, 2) == 1);
  CHECK(monomial_count(2, 2) == 6);
  CHECK(monomial_count(3, 1) == 4);
  CHECK(monomial_count(1, 0) == 1);
  CHECK(monomial_count(-1, 2) == 0);
}

TEST_CASE("Face trace bases are D-orthonormal and contain constants") {
  const auto disc = build_discretization(problem(3, {4, 4, 4}, 2, {2, 2, 2}, 2));
  int checked = 0;
  for (const auto& b : disc->bases) {
    if (b.trace_dimension() == 0) continue;
    const DenseMatrix gram = b.basis.transpose() * b.weights.asDiagonal() * b.basis;
    CHECK((gram - DenseMatrix::Identity(b.size(), b.size())).norm() <= 1e-12);
    const Vector ones = Vector::Ones(b.trace_dimension());
    CHECK((apply_QF(b, ones) - ones).norm() <= 1e-12 * ones.norm());
    std::mt19937_64 rng(b.face);
    const Vector v = oracle::random_vector(rng, b.trace_dimension());
    const Vector q = apply_QF(b, v);
    CHECK((apply_QF(b, q) - q).norm() <= 1e-12 * v.norm());
    CHECK(b.size() == 6);
    ++checked;
  }
  CHECK(checked == disc->clone.num_faces());
}

TEST_CASE("dependent monomials are dropped") {
  std::vector<Point> pts;
  for (int i = 0; i < 5; ++i) pts.push_back({0.25 * i, 0.25 * i, 0.0});
  const Vector w = Vector::Constant(5, 2.0);
  const auto basis = build_face_trace_basis(3, pts, w, 1);
  CHECK(basis.dropped == 1);
  CHECK(basis.size() == 2);
  CHECK((basis.basis.transpose() * w.asDiagonal() * basis.basis - DenseMatrix::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("over-constrained trace spaces are rejected") {
  std::vector<Point> pts{{0.0, 0.5, 0.0}, {1.0, 0.5, 0.0}};
  CHECK_THROWS_AS(build_face_trace_basis(0, pts, Vector::Ones(2), 1), ConfigError);
  CHECK_NOTHROW(build_face_trace_basis(0, pts, Vector::Ones(2), 0));
  CHECK_THROWS_AS(build_discretization(problem(2, {4, 4, 1}, 1, {1, 1, 1}, 1)), ConfigError);
}

TEST_CASE("the full trace space") {
  const Vector w = (Vector(3) << 1.0, 4.0, 9.0).finished();
  const auto b = full_trace_basis(2, w);
  CHECK(b.full());
  CHECK(b.size() == 3);
  CHECK((b.basis.transpose() * w.asDiagonal() * b.basis - DenseMatrix::Identity(3, 3)).norm() <= 1e-14);
  const Vector v = (Vector(3) << 1.0, -2.0, 0.5).finished();
  CHECK((apply_QF(b, v) - v).norm() <= 1e-14);
}

TEST_CASE("clone incidences at Face interiors and cross points") {
  const auto disc = build_discretization(problem(2, {4, 4, 1}, 2, {2, 2, 1}, 0));
  const auto& c = disc->clone;
  auto bdofs_of = [&](int l) { return std::count(c.bdof_to_dof.begin(), c.bdof_to_dof.end(), l); };
  const int cross = disc->system.free.dof_to_free[disc->layout.dof_index({4, 4, 0})];
  CHECK(c.J.row_size(cross) == 4);
  CHECK(bdofs_of(cross) == 4);
  const int face_interior = disc->system.free.dof_to_free[disc->layout.dof_index({4, 1, 0})];
  CHECK(c.J.row_size(face_interior) == 2);
  CHECK(bdofs_of(face_interior) == 1);
  const int inside = disc->system.free.dof_to_free[disc->layout.dof_index({1, 1, 0})];
  CHECK(c.J.row_size(inside) == 1);
  CHECK(bdofs_of(inside) == 0);

  const auto& t = disc->transfer;
  Vector e = Vector::Zero(c.num_edofs());
  e[c.J[face_interior][0]] = 3.0;
  e[c.J[face_interior][1]] = 5.0;
  e[c.J[inside][0]] = -2.5;
  const Vector v = apply_averaging(t, e);
  CHECK(v[face_interior] == doctest::Approx(4.0));
  CHECK(v[inside] == -2.5);
  CHECK(apply_injection(t, Vector::Ones(c.num_dofs)) == Vector::Ones(c.num_edofs()));
}

TEST_CASE("cloned vectors have no projected jumps") {
  const auto disc = build_discretization(problem(3, {4, 4, 4}, 2, {2, 2, 2}, 1));
  const auto& c = disc->clone;
  std::mt19937_64 rng(17);
  const Vector v = oracle::random_vector(rng, c.num_dofs);
  const Vector e = apply_injection(disc->transfer, v);
  std::vector<std::vector<Vector>> sides(c.num_faces());
  for (const auto& pair : c.pairs) {
    Vector trace(c.face_bdofs(pair.face));
    for (int i = 0; i < trace.size(); ++i) trace[i] = e[c.T_edof_offset[pair.element] + pair.trace[i]];
    sides[pair.face].push_back(apply_QF(disc->bases[pair.face], trace));
  }
  for (const auto& s : sides) {
    REQUIRE(s.size() == 2);
    CHECK((s[0] - s[1]).norm() == 0.0);
  }
}

TEST_CASE("trace basis sizes and low-order projections") {
  const Vector d = (Vector(4) << 1.0, 2.0, 3.0, 4.0).finished();
  std::vector<Point> line;
  for (int i = 0; i < 4; ++i) line.push_back({0.5, 0.2 * (i + 1), 0.0});
  const auto q0 = build_face_trace_basis(0, line, d, 0);
  REQUIRE(q0.size() == 1);
  CHECK((q0.basis.col(0) - Vector::Constant(4, 1.0 / std::sqrt(10.0))).norm() <= 1e-15);
  CHECK(build_face_trace_basis(0, line, d, 1).size() == 2);

  std::vector<Point> plane;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) plane.push_back({0.25 * (i + 1), 0.5, 0.25 * (j + 1)});
  CHECK(build_face_trace_basis(0, plane, Vector::Ones(9), 1).size() == 3);

  const Vector v = (Vector(4) << 1.0, 4.0, -2.0, 5.0).finished();
  const auto mean = build_face_trace_basis(0, line, Vector::Ones(4), 0);
  CHECK((apply_QF(mean, v) - Vector::Constant(4, 2.0)).norm() <= 1e-14);
  CHECK((apply_QF(q0, Vector::Constant(4, -3.5)) - Vector::Constant(4, -3.5)).norm() <= 1e-14);
}

TEST_CASE("a single Element has no Bdofs") {
  const auto disc = build_discretization(problem(2, {4, 4, 1}, 1, {4, 4, 1}, 0));
  CHECK(disc->clone.num_bdofs() == 0);
  CHECK(disc->clone.num_edofs() == disc->clone.num_dofs);
}
