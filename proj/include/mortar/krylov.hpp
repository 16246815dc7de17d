#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mortar/precond.hpp"
#include "mortar/types.hpp"

namespace mortar {

struct PcgOptions {
  double tol = 1e-8;
  int max_it = 500;
};

/// Extreme Ritz values of B⁻¹A.
struct SpectrumEstimate {
  double lmin = 0.0;
  double lmax = 0.0;
  [[nodiscard]] double condition() const { return lmax / lmin; }
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // rᵀB⁻¹r, starting with the initial residual
  std::vector<double> alphas;
  std::vector<double> betas;
  std::optional<SpectrumEstimate> spectrum;
  double seconds = 0.0;
};

struct PcgResult {
  Vector x;
  SolveReport report;
};

/// Zero initial guess; stops once rᵀB⁻¹r <= tol²·r₀ᵀB⁻¹r₀. Raises IndefiniteOperatorError on
/// pᵀAp <= 0 or rᵀB⁻¹r < 0. Reaching max_it returns with converged = false.
PcgResult pcg(const LinearOperator& A, const LinearOperator& Binv, const Vector& f, const PcgOptions& options = {});

/// Ritz values of the Lanczos tridiagonal built from the PCG coefficients; empty without iterations.
std::optional<SpectrumEstimate> lanczos_estimates(std::span<const double> alphas, std::span<const double> betas);

}  // namespace mortar
