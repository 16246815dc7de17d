#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SparseCholesky>

#include "mortar/error.hpp"
#include "mortar/fem.hpp"
#include "mortar/krylov.hpp"
#include "oracles.hpp"

using namespace mortar;

namespace {

AssembledSystem laplacian() {
  auto [mesh, layout] = build_structured_mesh(2, {10, 10, 1}, {1, 1, 1}, 1);
  return apply_dirichlet(assemble_global(mesh, layout, CoefficientField::constant(mesh)), layout.essential_dofs);
}

CsrMatrix diagonal_matrix(const Vector& d) {
  CsrMatrix D(d.size(), d.size());
  for (int i = 0; i < d.size(); ++i) D.insert(i, i) = d[i];
  D.makeCompressed();
  return D;
}

}  // namespace

TEST_CASE("the exact inverse as preconditioner") {
  const auto sys = laplacian();
  const Eigen::SparseMatrix<double> S = sys.A;
  const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(S);
  const MatrixOperator A(sys.A);
  const FunctionOperator B(sys.A.rows(), [&](const Vector& r) { return Vector(ldlt.solve(r)); });
  const auto result = pcg(A, B, sys.f);
  CHECK(result.report.converged);
  CHECK(result.report.iterations == 1);
  REQUIRE(result.report.spectrum);
  CHECK(result.report.spectrum->lmin == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(result.report.spectrum->lmax == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("indefinite operators are reported") {
  const Vector d = (Vector(4) << 1.0, 2.0, -1.0, 3.0).finished();
  const CsrMatrix D = diagonal_matrix(d);
  const CsrMatrix I = diagonal_matrix(Vector::Ones(4));
  const Vector f = Vector::Ones(4);
  CHECK_THROWS_AS(pcg(MatrixOperator(D), MatrixOperator(I), f), IndefiniteOperatorError);
  const CsrMatrix negative = diagonal_matrix(-Vector::Ones(4));
  CHECK_THROWS_AS(pcg(MatrixOperator(I), MatrixOperator(negative), f), IndefiniteOperatorError);
  CHECK_THROWS_AS(pcg(MatrixOperator(I), MatrixOperator(I), Vector::Ones(3)), DimensionError);
}

TEST_CASE("energy error decreases monotonically and the stopping test uses r^T z") {
  const auto sys = laplacian();
  const Eigen::SparseMatrix<double> S = sys.A;
  const Vector exact = Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>(S).solve(sys.f);
  const MatrixOperator A(sys.A);
  const Vector winv = sys.diagonal.cwiseInverse();
  const FunctionOperator B(sys.A.rows(), [&](const Vector& r) { return Vector(winv.cwiseProduct(r)); });
  auto energy = [&](const Vector& x) {
    const Vector e = exact - x;
    return std::sqrt(e.dot(sys.A * e));
  };
  double previous = energy(Vector::Zero(exact.size()));
  for (int k = 1; k <= 12; ++k) {
    const auto result = pcg(A, B, sys.f, {1e-30, k});
    CHECK_FALSE(result.report.converged);
    CHECK(result.report.iterations == k);
    const double e = energy(result.x);
    CHECK(e <= previous * (1 + 1e-12));
    previous = e;
  }

  const auto result = pcg(A, B, sys.f, {1e-6, 500});
  REQUIRE(result.report.converged);
  const auto& h = result.report.history;
  CHECK(h.size() == static_cast<std::size_t>(result.report.iterations + 1));
  CHECK(h.back() <= 1e-12 * h.front());
  CHECK(h[h.size() - 2] > 1e-12 * h.front());
}

TEST_CASE("Lanczos estimates match the spectrum after full convergence") {
  Vector d(12);
  for (int i = 0; i < 12; ++i) d[i] = 1.0 + i;
  const CsrMatrix D = diagonal_matrix(d);
  const CsrMatrix I = diagonal_matrix(Vector::Ones(12));
  const auto result = pcg(MatrixOperator(D), MatrixOperator(I), Vector::Ones(12), {1e-10, 100});
  CHECK(result.report.iterations == 12);
  REQUIRE(result.report.spectrum);
  CHECK(result.report.spectrum->lmin == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.report.spectrum->lmax == doctest::Approx(12.0).epsilon(1e-6));
  CHECK(result.report.spectrum->condition() == doctest::Approx(12.0).epsilon(1e-6));
  CHECK_FALSE(lanczos_estimates({}, {}).has_value());
}

TEST_CASE("zero right-hand side") {
  const CsrMatrix I = diagonal_matrix(Vector::Ones(3));
  const auto result = pcg(MatrixOperator(I), MatrixOperator(I), Vector::Zero(3));
  CHECK(result.report.converged);
  CHECK(result.report.iterations == 0);
  CHECK(result.x.norm() == 0.0);
}
