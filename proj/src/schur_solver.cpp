#include <Eigen/CholmodSupport>

#include "mortar/error.hpp"
#include "mortar/mortar.hpp"
#include "mortar/smoother.hpp"

namespace mortar {

namespace {

class ExactSchurSolver final : public SchurSolver {
 public:
  explicit ExactSchurSolver(const CsrMatrix& sigma) : n_(sigma.rows()) {
    if (n_ == 0) return;
    matrix_ = sigma;
    llt_.compute(matrix_);
    if (llt_.info() != Eigen::Success) throw DataError("Schur complement is not SPD (Cholesky failed)");
  }
  [[nodiscard]] Vector solve(const Vector& rhs) const override {
    if (rhs.size() != n_) throw DimensionError("Schur solve size mismatch");
    if (n_ == 0) return rhs;
    return llt_.solve(rhs);
  }
  [[nodiscard]] std::string name() const override { return "exact"; }

 private:
  Eigen::Index n_;
  Eigen::SparseMatrix<double> matrix_;
  Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>, Eigen::Lower> llt_;
};

class ChebyshevSchurSolver final : public SchurSolver {
 public:
  ChebyshevSchurSolver(const CsrMatrix& sigma, int sweeps, int nu)
      : sigma_(sigma), smoother_(sigma_, nu), sweeps_(sweeps) {
    if (sweeps < 1) throw ConfigError("Schur smoother sweeps must be >= 1");
  }
  [[nodiscard]] Vector solve(const Vector& rhs) const override {
    Vector x = smoother_.apply_inverse(rhs);
    for (int k = 1; k < sweeps_; ++k) smoother_.smooth(rhs, x);
    return x;
  }
  [[nodiscard]] std::string name() const override { return "chebyshev"; }

 private:
  CsrMatrix sigma_;
  ChebyshevSmoother smoother_;
  int sweeps_;
};

class PcgSchurSolver final : public SchurSolver {
 public:
  PcgSchurSolver(const CsrMatrix& sigma, int iterations, int nu)
      : sigma_(sigma), smoother_(sigma_, nu), iterations_(iterations) {
    if (iterations < 1) throw ConfigError("inner PCG iterations must be >= 1");
  }
  [[nodiscard]] Vector solve(const Vector& rhs) const override {
    Vector x = Vector::Zero(rhs.size());
    Vector r = rhs;
    Vector z = smoother_.apply_inverse(r);
    Vector p = z;
    double rz = r.dot(z);
    for (int it = 0; it < iterations_ && rz > 0.0; ++it) {
      const Vector q = sigma_ * p;
      const double alpha = rz / p.dot(q);
      x += alpha * p;
      if (it + 1 == iterations_) break;
      r -= alpha * q;
      z = smoother_.apply_inverse(r);
      const double rz_new = r.dot(z);
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    return x;
  }
  [[nodiscard]] std::string name() const override { return "pcg"; }

 private:
  CsrMatrix sigma_;
  ChebyshevSmoother smoother_;
  int iterations_;
};

}  // namespace

std::unique_ptr<SchurSolver> make_exact_schur_solver(const CsrMatrix& sigma) {
  return std::make_unique<ExactSchurSolver>(sigma);
}

std::unique_ptr<SchurSolver> make_chebyshev_schur_solver(const CsrMatrix& sigma, int sweeps, int nu) {
  return std::make_unique<ChebyshevSchurSolver>(sigma, sweeps, nu);
}

std::unique_ptr<SchurSolver> make_pcg_schur_solver(const CsrMatrix& sigma, int iterations, int nu) {
  return std::make_unique<PcgSchurSolver>(sigma, iterations, nu);
}

}  // namespace mortar
