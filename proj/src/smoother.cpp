#include "mortar/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "mortar/error.hpp"
#include "mortar/fem.hpp"

namespace mortar {

std::vector<double> chebyshev_roots(int nu) {
  if (nu < 1) throw ConfigError("smoother degree parameter must be >= 1");
  const double pi = std::numbers::pi;
  std::vector<double> roots;
  roots.reserve(3 * nu + 1);
  for (int j = 1; j <= nu; ++j) {
    const double c = std::cos((2 * j - 1) * pi / (2.0 * (2 * nu + 1)));
    roots.push_back(c * c);
  }
  roots.push_back(1.0);
  for (int j = 1; j <= nu; ++j) {
    const double c = std::cos(j * pi / (2 * nu + 1));
    roots.push_back(c * c);
    roots.push_back(c * c);
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return roots;
}

double chebyshev_polynomial(int nu, double t) {
  double value = 1.0;
  for (double root : chebyshev_roots(nu)) value *= 1.0 - t / root;
  return value;
}

double estimate_lambda_max(const CsrMatrix& A, const Vector& diag, int iterations) {
  const Eigen::Index n = A.rows();
  if (n == 0) return 0.0;
  const Vector s = diag.cwiseSqrt().cwiseInverse();
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const Vector w = s.cwiseProduct(A * s.cwiseProduct(v));
    lambda = v.dot(w);
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
  }
  return lambda;
}

ChebyshevSmoother::ChebyshevSmoother(const CsrMatrix& A, int nu, SmootherDiagonal kind)
    : A_(&A), nu_(nu), roots_(chebyshev_roots(nu)) {
  if (A.rows() != A.cols()) throw DimensionError("smoother requires a square matrix");
  if (kind == SmootherDiagonal::WeightedL1) {
    diag_ = weighted_l1_diagonal(A);
  } else {
    diag_ = A.diagonal();
    if ((diag_.array() <= 0.0).any()) throw DataError("non-positive diagonal entry");
    diag_ *= 1.1 * estimate_lambda_max(A, diag_);
  }
  inv_diag_ = diag_.cwiseInverse();
}

void ChebyshevSmoother::smooth(const Vector& b, Vector& x) const {
  if (b.size() != A_->rows() || x.size() != A_->rows()) throw DimensionError("smoother vector size mismatch");
  Vector r(b.size());
  for (double t : roots_) {
    r.noalias() = b - (*A_) * x;
    x.noalias() += (1.0 / t) * inv_diag_.cwiseProduct(r);
  }
}

Vector ChebyshevSmoother::apply_inverse(const Vector& r) const {
  if (r.size() != A_->rows()) throw DimensionError("smoother vector size mismatch");
  Vector x = (1.0 / roots_.front()) * inv_diag_.cwiseProduct(r);
  Vector residual(r.size());
  for (std::size_t k = 1; k < roots_.size(); ++k) {
    residual.noalias() = r - (*A_) * x;
    x.noalias() += (1.0 / roots_[k]) * inv_diag_.cwiseProduct(residual);
  }
  return x;
}

}  // namespace mortar
