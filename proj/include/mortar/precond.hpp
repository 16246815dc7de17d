#pragma once

#include <functional>

#include "mortar/clone.hpp"
#include "mortar/mortar.hpp"
#include "mortar/smoother.hpp"
#include "mortar/types.hpp"

namespace mortar {

/// Square linear operator acting on vectors.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  [[nodiscard]] virtual Vector apply(const Vector& x) const = 0;
  [[nodiscard]] virtual int rows() const = 0;
};

class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(const CsrMatrix& A) : A_(&A) {}
  [[nodiscard]] Vector apply(const Vector& x) const override { return (*A_) * x; }
  [[nodiscard]] int rows() const override { return static_cast<int>(A_->rows()); }

 private:
  const CsrMatrix* A_;
};

class FunctionOperator final : public LinearOperator {
 public:
  FunctionOperator(int rows, std::function<Vector(const Vector&)> f) : rows_(rows), f_(std::move(f)) {}
  [[nodiscard]] Vector apply(const Vector& x) const override { return f_(x); }
  [[nodiscard]] int rows() const override { return rows_; }

 private:
  int rows_;
  std::function<Vector(const Vector&)> f_;
};

enum class AuxMode { Additive, Multiplicative };

/// B⁻¹ built from the smoother M, the averaging transfer Π_{h,e} and the mortar inner inverse ℬ⁻¹.
/// Additive: M⁻¹r + Π ℬ⁻¹_ee Πᵀ r. Multiplicative: the two-level pre-smooth/correct/post-smooth cycle.
class AuxSpacePreconditioner final : public LinearOperator {
 public:
  AuxSpacePreconditioner(const CsrMatrix& A, const ChebyshevSmoother& smoother, const TransferOps& transfer,
                         const MortarInverse& inner, AuxMode mode);

  [[nodiscard]] Vector apply(const Vector& r) const override;
  [[nodiscard]] int rows() const override { return static_cast<int>(A_->rows()); }
  [[nodiscard]] AuxMode mode() const { return mode_; }
  /// Π_{h,e} (ℬ⁻¹[Π_{h,e}ᵀ r; 0; 0])_edofs.
  [[nodiscard]] Vector auxiliary_correction(const Vector& r) const;

 private:
  const CsrMatrix* A_;
  const ChebyshevSmoother* smoother_;
  const TransferOps* transfer_;
  const MortarInverse* inner_;
  AuxMode mode_;
};

/// Π_{h,e} ℬ_ee⁻¹ Π_{h,e}ᵀ with an arbitrary inner operator over edofs.
class FictitiousSpacePreconditioner final : public LinearOperator {
 public:
  FictitiousSpacePreconditioner(const TransferOps& transfer, std::function<Vector(const Vector&)> inner_ee);

  [[nodiscard]] Vector apply(const Vector& r) const override;
  [[nodiscard]] int rows() const override { return static_cast<int>(transfer_->averaging.rows()); }

 private:
  const TransferOps* transfer_;
  std::function<Vector(const Vector&)> inner_;
};

}  // namespace mortar
