#pragma once

#include <vector>

#include "mortar/types.hpp"

namespace mortar {

/// Roots of p_ν on (0, 1] with multiplicity (3ν+1 values), sorted in decreasing order.
std::vector<double> chebyshev_roots(int nu);

/// p_ν(t) = Π_k (1 − t / t_k).
double chebyshev_polynomial(int nu, double t);

enum class SmootherDiagonal { WeightedL1, Jacobi };

/// Largest eigenvalue of diag⁻¹A by power iteration on the symmetric form diag^{-1/2} A diag^{-1/2}.
double estimate_lambda_max(const CsrMatrix& A, const Vector& diag, int iterations = 100);

/// Polynomial smoother M with I − M⁻¹A = p_ν(W⁻¹A). M is SPD.
class ChebyshevSmoother {
 public:
  /// WeightedL1 uses W with b = 1; Jacobi uses b·D with b = 1.1 × the power-iteration estimate.
  ChebyshevSmoother(const CsrMatrix& A, int nu, SmootherDiagonal kind = SmootherDiagonal::WeightedL1);

  /// 3ν+1 sweeps x ← x + (1/t_k) W⁻¹(b − A x), roots in decreasing order.
  void smooth(const Vector& b, Vector& x) const;
  /// M⁻¹ r: the sweeps started from x = 0.
  [[nodiscard]] Vector apply_inverse(const Vector& r) const;

  [[nodiscard]] const Vector& diagonal() const { return diag_; }
  [[nodiscard]] const std::vector<double>& roots() const { return roots_; }
  [[nodiscard]] int nu() const { return nu_; }
  [[nodiscard]] const CsrMatrix& matrix() const { return *A_; }

 private:
  const CsrMatrix* A_;
  int nu_;
  Vector diag_;
  Vector inv_diag_;
  std::vector<double> roots_;
};

}  // namespace mortar
