#include "mortar/precond.hpp"

#include "mortar/error.hpp"

namespace mortar {

AuxSpacePreconditioner::AuxSpacePreconditioner(const CsrMatrix& A, const ChebyshevSmoother& smoother,
                                               const TransferOps& transfer, const MortarInverse& inner,
                                               AuxMode mode)
    : A_(&A), smoother_(&smoother), transfer_(&transfer), inner_(&inner), mode_(mode) {
  if (transfer.averaging.rows() != A.rows()) throw DimensionError("transfer does not match the system size");
}

Vector AuxSpacePreconditioner::auxiliary_correction(const Vector& r) const {
  const Vector g = transfer_->averaging.transpose() * r;
  return transfer_->averaging * inner_->apply_edofs(g);
}

Vector AuxSpacePreconditioner::apply(const Vector& r) const {
  if (r.size() != A_->rows()) throw DimensionError("preconditioner input has the wrong size");
  if (mode_ == AuxMode::Additive) return smoother_->apply_inverse(r) + auxiliary_correction(r);

  Vector x = smoother_->apply_inverse(r);
  x += auxiliary_correction(r - (*A_) * x);
  smoother_->smooth(r, x);
  return x;
}

FictitiousSpacePreconditioner::FictitiousSpacePreconditioner(const TransferOps& transfer,
                                                             std::function<Vector(const Vector&)> inner_ee)
    : transfer_(&transfer), inner_(std::move(inner_ee)) {}

Vector FictitiousSpacePreconditioner::apply(const Vector& r) const {
  if (r.size() != transfer_->averaging.rows()) throw DimensionError("preconditioner input has the wrong size");
  return transfer_->averaging * inner_(Vector(transfer_->averaging.transpose() * r));
}

}  // namespace mortar
