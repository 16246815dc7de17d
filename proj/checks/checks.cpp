#include "checks.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "mortar/error.hpp"

namespace mortar::checks {

namespace {

Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

double sparse_norm(const CsrMatrix& m) { return m.norm(); }

// V_k(t) = T_{2k+1}(√t)/√t through V_{k+1} = 2(2t − 1)V_k − V_{k−1}, V_0 = V_{−1} = 1.
template <class Apply>
Vector chebyshev_odd_quotient(int nu, const Apply& G, const Vector& x) {
  Vector prev = x, cur = x;
  for (int k = 0; k < nu; ++k) {
    Vector next = 4.0 * G(cur) - 2.0 * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// p_ν(G)x = (I − G U(G)²) c U(G) x, U = V_ν, c = (−1)^ν/(2ν+1).
template <class Apply>
Vector closed_form_polynomial(int nu, const Apply& G, const Vector& x) {
  const double c = (nu % 2 == 0 ? 1.0 : -1.0) / (2 * nu + 1);
  const Vector y = c * chebyshev_odd_quotient(nu, G, x);
  return y - G(chebyshev_odd_quotient(nu, G, chebyshev_odd_quotient(nu, G, y)));
}

double closed_form_scalar(int nu, double t) {
  Vector x(1);
  x[0] = 1.0;
  return closed_form_polynomial(nu, [t](const Vector& v) { return Vector(t * v); }, x)[0];
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

}  // namespace

std::string format(const CheckResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, " value=%.3e threshold=%.3e", r.value, r.threshold);
  std::string line = (r.passed ? "PASS " : "FAIL ") + r.name + buf;
  if (!r.detail.empty()) line += " (" + r.detail + ")";
  return line;
}

CheckResult make_result(std::string name, double value, double threshold, std::string detail) {
  return CheckResult{std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

DenseMatrix dense_schur_oracle(const MortarBlocks& blocks) {
  const DenseMatrix full = DenseMatrix(blocks.assemble());
  const int k = blocks.num_edofs + blocks.num_multipliers;
  const int b = blocks.num_bdofs;
  const Eigen::PartialPivLU<DenseMatrix> lu(full.topLeftCorner(k, k));
  return full.bottomRightCorner(b, b) - full.bottomLeftCorner(b, k) * lu.solve(full.topRightCorner(k, b));
}

std::vector<CheckResult> identity_checks(const Discretization& disc) {
  std::vector<CheckResult> out;
  const CsrMatrix& A = disc.system.A;
  const int n = static_cast<int>(A.rows());

  CsrMatrix identity(n, n);
  identity.setIdentity();
  const CsrMatrix PiI = disc.transfer.averaging * disc.transfer.injection;
  out.push_back(make_result("averaging of injection is the identity",
                            sparse_norm(CsrMatrix(PiI - identity)) / std::sqrt(static_cast<double>(n)), 1e-12));

  const CsrMatrix Aee = disc.blocks.assemble_ee();
  const CsrMatrix It = disc.transfer.injection.transpose();
  const CsrMatrix stable = It * Aee * disc.transfer.injection;
  out.push_back(make_result("injected Element matrices reproduce A",
                            sparse_norm(CsrMatrix(stable - A)) / sparse_norm(A), 1e-12));

  if (disc.local.empty()) throw ConfigError("identity checks need the Element matrices (non-lean build)");
  std::vector<Triplet> t;
  for (const auto& ls : disc.local)
    for (std::size_t i = 0; i < ls.dofs.size(); ++i)
      for (std::size_t j = 0; j < ls.dofs.size(); ++j)
        t.emplace_back(ls.dofs[i], ls.dofs[j], ls.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
  CsrMatrix summed(disc.layout.size(), disc.layout.size());
  summed.setFromTriplets(t.begin(), t.end());
  const GlobalSystem global = assemble_global(disc.mesh, disc.layout, disc.coefficient, disc.spec.source);
  out.push_back(make_result("sum of Element matrices equals the global matrix",
                            sparse_norm(CsrMatrix(summed - global.matrix)) / sparse_norm(global.matrix), 1e-12));
  return out;
}

std::vector<CheckResult> schur_checks(const Discretization& disc) {
  std::vector<CheckResult> out;
  const DenseMatrix oracle = dense_schur_oracle(disc.blocks);
  const DenseMatrix sigma = DenseMatrix(disc.schur.matrix);
  const double scale = std::max(oracle.norm(), 1e-300);
  out.push_back(make_result("assembled Schur complement matches dense elimination", (sigma - oracle).norm() / scale,
                            1e-10, "saddle dimension " + std::to_string(disc.blocks.size())));

  const Eigen::SparseMatrix<double> sigma_c = disc.schur.matrix;
  const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sigma_c);
  const bool spd = disc.schur.matrix.rows() == 0 || llt.info() == Eigen::Success;
  CheckResult r = make_result("Schur complement admits a Cholesky factorization", spd ? 0.0 : 1.0, 0.0);
  r.detail = spd ? "SPD" : "factorization failed";
  out.push_back(r);
  return out;
}

std::vector<CheckResult> full_trace_checks(const Discretization& disc, int probes, unsigned seed) {
  std::vector<CheckResult> out;
  SolverOptions options;
  options.mode = AuxMode::Multiplicative;
  const Solver solver = build_solver(disc, options);
  const Eigen::SparseMatrix<double> A = disc.system.A;
  const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> direct(A);
  if (direct.info() != Eigen::Success) throw DataError("reference factorization of A failed");

  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    const Vector r = random_vector(rng, A.rows());
    const Vector exact = direct.solve(r);
    const Vector approx = solver.preconditioner->apply(r);
    worst = std::max(worst, (approx - exact).norm() / exact.norm());
  }
  out.push_back(make_result("multiplicative preconditioner equals the inverse of A", worst, 1e-8,
                            std::to_string(probes) + " random vectors"));

  PcgOptions pcg_options;
  const PcgResult result = solve(disc, solver, pcg_options);
  CheckResult it = make_result("PCG iterations with the full trace space", result.report.iterations, 1.0);
  it.passed = result.report.converged && result.report.iterations == 1;
  out.push_back(it);
  return out;
}

std::vector<CheckResult> spd_checks(const Discretization& disc, int probes, unsigned seed) {
  std::vector<CheckResult> out;
  struct Variant {
    const char* name;
    AuxMode mode;
    SchurKind schur;
  };
  const Variant variants[] = {{"B_add, exact inner inverse", AuxMode::Additive, SchurKind::Exact},
                              {"B_mult, exact inner inverse", AuxMode::Multiplicative, SchurKind::Exact},
                              {"B_add, condensed inner inverse", AuxMode::Additive, SchurKind::Chebyshev},
                              {"B_mult, condensed inner inverse", AuxMode::Multiplicative, SchurKind::Chebyshev}};
  const Eigen::Index n = disc.system.A.rows();
  for (const auto& variant : variants) {
    SolverOptions options;
    options.mode = variant.mode;
    options.schur.kind = variant.schur;
    const Solver solver = build_solver(disc, options);
    const auto& B = *solver.preconditioner;
    std::mt19937_64 rng(seed);
    double asym = 0.0, min_ratio = std::numeric_limits<double>::infinity();
    for (int k = 0; k < probes; ++k) {
      const Vector u = random_vector(rng, n);
      const Vector v = random_vector(rng, n);
      const Vector Bu = B.apply(u), Bv = B.apply(v);
      asym = std::max(asym, std::abs(u.dot(Bv) - v.dot(Bu)) / (u.norm() * v.norm()));
      min_ratio = std::min(min_ratio, u.dot(Bu) / u.squaredNorm());
    }
    out.push_back(make_result(std::string(variant.name) + ": symmetry", asym, 1e-12,
                              std::to_string(probes) + " probe pairs"));
    CheckResult pos = make_result(std::string(variant.name) + ": positivity", -min_ratio, 0.0,
                                  fmt("min rᵀB⁻¹r/rᵀr = %.3e", min_ratio));
    pos.passed = min_ratio > 0.0;
    out.push_back(pos);
  }
  return out;
}

std::vector<CheckResult> smoother_checks(const CsrMatrix& A, int max_nu, unsigned seed) {
  std::vector<CheckResult> out;
  const Vector w = weighted_l1_diagonal(A);
  const Vector winv = w.cwiseInverse();
  const auto G = [&](const Vector& x) { return Vector(winv.cwiseProduct(A * x)); };

  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int nu = 1; nu <= max_nu; ++nu) {
    const ChebyshevSmoother smoother(A, nu);
    for (int k = 0; k < 5; ++k) {
      const Vector e = random_vector(rng, A.rows());
      const Vector propagated = e - smoother.apply_inverse(A * e);
      worst = std::max(worst, (propagated - closed_form_polynomial(nu, G, e)).norm() / e.norm());
    }
  }
  out.push_back(make_result("smoother error propagation equals p_nu(W^-1 A)", worst, 1e-10,
                            "nu = 1.." + std::to_string(max_nu)));

  const Vector s = w.cwiseSqrt().cwiseInverse();
  const DenseMatrix scaled = s.asDiagonal() * DenseMatrix(A) * s.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(scaled, Eigen::EigenvaluesOnly);
  const double lmax = eig.eigenvalues().maxCoeff();
  out.push_back(make_result("lambda_max(W^-1 A) <= 1", lmax - 1.0, 1e-8, fmt("lambda_max = %.15f", lmax)));

  double p0 = 0.0, root_residual = 0.0;
  bool counts = true;
  for (int nu = 1; nu <= 5; ++nu) {
    p0 = std::max(p0, std::abs(closed_form_scalar(nu, 0.0) - 1.0));
    const auto roots = chebyshev_roots(nu);
    counts = counts && static_cast<int>(roots.size()) == 3 * nu + 1;
    for (double t : roots) root_residual = std::max(root_residual, std::abs(closed_form_scalar(nu, t)));
  }
  out.push_back(make_result("p_nu(0) = 1 for nu = 1..5", p0, 1e-14));
  CheckResult roots = make_result("3nu+1 roots of p_nu for nu = 1..5", root_residual, 1e-12,
                                  "max |p_nu(t_k)| over listed roots");
  roots.passed = roots.passed && counts;
  out.push_back(roots);
  return out;
}

ProblemSpec small_problem_2d() {
  ProblemSpec spec;
  spec.dim = 2;
  spec.cells = {8, 8, 1};
  spec.order = 2;
  spec.block = {2, 2, 1};
  spec.coefficient = {"checkerboard", 2, 10.0};
  spec.trace = {TraceSpaceKind::Polynomial, 1};
  return spec;
}

ProblemSpec strip_problem_2d() {
  ProblemSpec spec = small_problem_2d();
  spec.block = {8, 2, 1};
  spec.trace = {TraceSpaceKind::Full, 0};
  return spec;
}

ProblemSpec small_problem_3d() {
  ProblemSpec spec;
  spec.dim = 3;
  spec.cells = {4, 4, 4};
  spec.order = 1;
  spec.block = {2, 2, 2};
  spec.coefficient = {"layers", 2, 10.0};
  spec.trace = {TraceSpaceKind::Polynomial, 0};
  return spec;
}

std::vector<CheckResult> run_verify_suite() {
  std::vector<CheckResult> all;
  auto append = [&all](std::vector<CheckResult> part) { all.insert(all.end(), part.begin(), part.end()); };
  const auto small = build_discretization(small_problem_2d());
  append(identity_checks(*small));
  append(schur_checks(*small));
  append(schur_checks(*build_discretization(small_problem_3d())));
  append(full_trace_checks(*build_discretization(strip_problem_2d()), 10, 7));
  append(spd_checks(*small, 100, 11));
  append(smoother_checks(small->system.A, 5, 13));
  return all;
}

}  // namespace mortar::checks
