#pragma once

// Independent reference computations for the unit tests. Nothing here calls into the library's
// numerical kernels; only plain Eigen dense algebra is used.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "mortar/types.hpp"

namespace oracle {

using mortar::DenseMatrix;
using mortar::Vector;

/// Monomial coefficients of the 1D Lagrange basis on p+1 equispaced nodes in [0, 1] (column i = φ_i).
inline DenseMatrix lagrange_coefficients(int p) {
  DenseMatrix V(p + 1, p + 1);
  for (int i = 0; i <= p; ++i)
    for (int k = 0; k <= p; ++k) V(i, k) = std::pow(static_cast<double>(i) / p, k);
  return V.inverse();  // V c_i = e_i
}

/// ∫_0^1 a(x) b(x) dx for monomial coefficient vectors.
inline double integrate_product(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) s += a[i] * b[j] / (i + j + 1);
  return s;
}

inline Vector derivative(const Vector& c) {
  Vector d = Vector::Zero(std::max<Eigen::Index>(c.size() - 1, 1));
  for (int k = 1; k < c.size(); ++k) d[k - 1] = k * c[k];
  return d;
}

/// κ∫∇φ_i·∇φ_j over a box with sides h, exact polynomial integration, lexicographic local order.
inline DenseMatrix box_stiffness(int dim, int p, const std::array<double, 3>& h, double kappa) {
  const DenseMatrix C = lagrange_coefficients(p);
  const int n1 = p + 1;
  DenseMatrix mass(n1, n1), stiff(n1, n1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      mass(i, j) = integrate_product(C.col(i), C.col(j));
      stiff(i, j) = integrate_product(derivative(C.col(i)), derivative(C.col(j)));
    }
  int n = 1;
  for (int a = 0; a < dim; ++a) n *= n1;
  DenseMatrix K = DenseMatrix::Zero(n, n);
  auto digits = [&](int idx) {
    std::array<int, 3> d{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      d[a] = idx % n1;
      idx /= n1;
    }
    return d;
  };
  for (int I = 0; I < n; ++I)
    for (int J = 0; J < n; ++J) {
      const auto di = digits(I), dj = digits(J);
      for (int g = 0; g < dim; ++g) {
        double term = kappa;
        for (int a = 0; a < dim; ++a)
          term *= a == g ? stiff(di[a], dj[a]) / h[a] : mass(di[a], dj[a]) * h[a];
        K(I, J) += term;
      }
    }
  return K;
}

/// Schur complement of a dense symmetric matrix onto its trailing `b` unknowns.
inline DenseMatrix schur_complement(const DenseMatrix& full, int b) {
  const int k = static_cast<int>(full.rows()) - b;
  const Eigen::FullPivLU<DenseMatrix> lu(full.topLeftCorner(k, k));
  return full.bottomRightCorner(b, b) - full.bottomLeftCorner(b, k) * lu.solve(full.topRightCorner(k, b));
}

/// p_ν(G) x from the closed form (1 − t U²) c U with U(t) = T_{2ν+1}(√t)/√t, c = (−1)^ν/(2ν+1),
/// U evaluated by the Chebyshev three-term recurrence.
template <class Apply>
Vector polynomial_action(int nu, const Apply& G, const Vector& x) {
  auto U = [&](const Vector& v) {
    Vector prev = v, cur = v;
    for (int k = 0; k < nu; ++k) {
      Vector next = 4.0 * G(cur) - 2.0 * cur - prev;
      prev = std::move(cur);
      cur = std::move(next);
    }
    return cur;
  };
  const double c = (nu % 2 == 0 ? 1.0 : -1.0) / (2 * nu + 1);
  const Vector y = c * U(x);
  return y - G(U(U(y)));
}

inline double polynomial_value(int nu, double t) {
  Vector x(1);
  x[0] = 1.0;
  return polynomial_action(nu, [t](const Vector& v) { return Vector(t * v); }, x)[0];
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// Dense matrix of a linear map given by its action.
template <class Apply>
DenseMatrix dense_of(Eigen::Index n, const Apply& apply) {
  DenseMatrix M(n, n);
  for (Eigen::Index j = 0; j < n; ++j) M.col(j) = apply(Vector(Vector::Unit(n, j)));
  return M;
}

}  // namespace oracle
