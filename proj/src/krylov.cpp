#include "mortar/krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "mortar/error.hpp"

namespace mortar {

PcgResult pcg(const LinearOperator& A, const LinearOperator& Binv, const Vector& f, const PcgOptions& options) {
  if (f.size() != A.rows() || Binv.rows() != A.rows()) throw DimensionError("PCG operand sizes disagree");
  if (options.tol <= 0.0 || options.max_it < 1) throw ConfigError("PCG needs tol > 0 and max_it >= 1");
  const auto start = std::chrono::steady_clock::now();

  PcgResult out;
  SolveReport& report = out.report;
  out.x = Vector::Zero(f.size());
  Vector r = f;
  Vector z = Binv.apply(r);
  double rz = r.dot(z);
  if (rz < 0.0) throw IndefiniteOperatorError("preconditioner is not positive: rᵀB⁻¹r < 0");
  report.history.push_back(rz);
  const double target = options.tol * options.tol * rz;
  Vector p = z;

  if (rz == 0.0) {
    report.converged = true;
  } else {
    for (int it = 1; it <= options.max_it; ++it) {
      const Vector q = A.apply(p);
      const double curvature = p.dot(q);
      if (!(curvature > 0.0))
        throw IndefiniteOperatorError("non-positive curvature pᵀAp at iteration " + std::to_string(it));
      const double alpha = rz / curvature;
      out.x += alpha * p;
      r -= alpha * q;
      z = Binv.apply(r);
      const double rz_new = r.dot(z);
      if (rz_new < 0.0)
        throw IndefiniteOperatorError("preconditioner is not positive at iteration " + std::to_string(it));
      report.alphas.push_back(alpha);
      report.history.push_back(rz_new);
      report.iterations = it;
      if (rz_new <= target) {
        report.converged = true;
        break;
      }
      const double beta = rz_new / rz;
      report.betas.push_back(beta);
      p = z + beta * p;
      rz = rz_new;
    }
  }
  report.spectrum = lanczos_estimates(report.alphas, report.betas);
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::optional<SpectrumEstimate> lanczos_estimates(std::span<const double> alphas, std::span<const double> betas) {
  const int k = static_cast<int>(alphas.size());
  if (k == 0 || static_cast<int>(betas.size()) < k - 1) return std::nullopt;
  Vector diag(k), off(std::max(k - 1, 0));
  for (int j = 0; j < k; ++j) {
    diag[j] = 1.0 / alphas[j];
    if (j > 0) diag[j] += betas[j - 1] / alphas[j - 1];
    if (j + 1 < k) off[j] = std::sqrt(betas[j]) / alphas[j];
  }
  if (k == 1) return SpectrumEstimate{diag[0], diag[0]};
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  const Vector& ev = solver.eigenvalues();
  return SpectrumEstimate{ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace mortar
