#pragma once

// Property checks shared by `mortar_cli verify` and the acceptance suite. Each check compares
// library output against an independent dense computation.

#include <string>
#include <vector>

#include "mortar/pipeline.hpp"

namespace mortar::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

std::string format(const CheckResult& result);
CheckResult make_result(std::string name, double value, double threshold, std::string detail = {});

/// Dense Schur complement of 𝒜 onto its Bdof block (edofs and multipliers eliminated).
DenseMatrix dense_schur_oracle(const MortarBlocks& blocks);

/// Πℐ = I, ℐᵀ A_ee ℐ = A and A = Σ_T A_T. Needs a discretization built without `lean`.
std::vector<CheckResult> identity_checks(const Discretization& disc);

/// Σ against the dense oracle, plus a sparse Cholesky SPD check.
std::vector<CheckResult> schur_checks(const Discretization& disc);

/// Full trace space and exact S: B_mult⁻¹ = A⁻¹ on random vectors and one PCG iteration.
std::vector<CheckResult> full_trace_checks(const Discretization& disc, int probes, unsigned seed);

/// Symmetry and positivity of B_add and B_mult, with exact 𝒜⁻¹ and with ℬ_sc⁻¹.
std::vector<CheckResult> spd_checks(const Discretization& disc, int probes, unsigned seed);

/// Error propagation against the closed-form p_ν, λ_max(W⁻¹A) <= 1, p_ν(0) = 1, root counts.
std::vector<CheckResult> smoother_checks(const CsrMatrix& A, int max_nu, unsigned seed);

/// Small instances used by `verify` and the acceptance suite.
ProblemSpec small_problem_2d();
/// Horizontal strip Elements, so no free dof lies on two Faces.
ProblemSpec strip_problem_2d();
ProblemSpec small_problem_3d();

std::vector<CheckResult> run_verify_suite();

}  // namespace mortar::checks
