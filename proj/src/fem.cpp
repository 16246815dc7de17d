#include "mortar/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mortar/error.hpp"

namespace mortar {

namespace {

// Unit-κ element matrices on a box, built from 1D factors:
// K = Σ_a (Π_{b≠a} h_b / h_a) K1 ⊗_a M1 ⊗ ..., load = Π h_a L1 ⊗ ... .
struct ReferenceFactors {
  DenseMatrix stiffness;  // ∫ φ_i' φ_j' on [0, 1]
  DenseMatrix mass;       // ∫ φ_i φ_j on [0, 1]
  Vector integral;        // ∫ φ_i on [0, 1]
};

// Equispaced Lagrange basis on [0, 1]; returns values and derivatives at x.
void lagrange_1d(int order, double x, std::vector<double>& value, std::vector<double>& derivative) {
  const int n = order + 1;
  value.assign(n, 0.0);
  derivative.assign(n, 0.0);
  std::vector<double> nodes(n);
  for (int j = 0; j < n; ++j) nodes[j] = static_cast<double>(j) / order;
  for (int j = 0; j < n; ++j) {
    double v = 1.0;
    for (int m = 0; m < n; ++m)
      if (m != j) v *= (x - nodes[m]) / (nodes[j] - nodes[m]);
    value[j] = v;
    double d = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      double term = 1.0 / (nodes[j] - nodes[k]);
      for (int m = 0; m < n; ++m)
        if (m != j && m != k) term *= (x - nodes[m]) / (nodes[j] - nodes[m]);
      d += term;
    }
    derivative[j] = d;
  }
}

ReferenceFactors reference_factors(int order, int quadrature_points) {
  const int n = order + 1;
  ReferenceFactors r{DenseMatrix::Zero(n, n), DenseMatrix::Zero(n, n), Vector::Zero(n)};
  const auto rule = gauss_legendre(quadrature_points);
  std::vector<double> phi, dphi;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    lagrange_1d(order, rule.points[q], phi, dphi);
    const double w = rule.weights[q];
    for (int i = 0; i < n; ++i) {
      r.integral[i] += w * phi[i];
      for (int j = 0; j < n; ++j) {
        r.stiffness(i, j) += w * dphi[i] * dphi[j];
        r.mass(i, j) += w * phi[i] * phi[j];
      }
    }
  }
  return r;
}

ElementMatrix tensor_element(int dim, int order, const std::array<double, 3>& h, const ReferenceFactors& r) {
  const int n = order + 1;
  const int size = dim == 3 ? n * n * n : n * n;
  ElementMatrix m{DenseMatrix::Zero(size, size), Vector::Zero(size)};
  auto split = [&](int local) {
    std::array<int, 3> i{local % n, (local / n) % n, dim == 3 ? local / (n * n) : 0};
    return i;
  };
  double volume = 1.0;
  for (int a = 0; a < dim; ++a) volume *= h[a];
  for (int I = 0; I < size; ++I) {
    const auto i = split(I);
    double load = volume;
    for (int a = 0; a < dim; ++a) load *= r.integral[i[a]];
    m.load[I] = load;
    for (int J = 0; J < size; ++J) {
      const auto j = split(J);
      double value = 0.0;
      for (int a = 0; a < dim; ++a) {
        double term = volume / (h[a] * h[a]) * r.stiffness(i[a], j[a]);
        for (int b = 0; b < dim; ++b)
          if (b != a) term *= r.mass(i[b], j[b]);
        value += term;
      }
      m.stiffness(I, J) = value;
    }
  }
  return m;
}

void check_geometry(const StructuredMesh& mesh) {
  const auto h = mesh.cell_size();
  for (int a = 0; a < mesh.dim; ++a)
    if (!(h[a] > 0.0)) throw GeometryError("non-positive Jacobian: cell size along axis " + std::to_string(a));
}

ElementMatrix unit_element(const StructuredMesh& mesh, int order) {
  check_geometry(mesh);
  return tensor_element(mesh.dim, order, mesh.cell_size(), reference_factors(order, order + 1));
}

}  // namespace

QuadratureRule gauss_legendre(int num_points) {
  if (num_points < 1) throw ConfigError("quadrature needs at least one point");
  const int n = num_points;
  // Legendre P_n(x) and P_n'(x) by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    // [-1, 1] -> [0, 1], ascending
    rule.points[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

CoefficientField CoefficientField::constant(const StructuredMesh& mesh, double value) {
  if (!(value > 0.0)) throw ConfigError("coefficient must be positive");
  return {std::vector<double>(mesh.num_elements(), value)};
}

CoefficientField CoefficientField::checkerboard(const StructuredMesh& mesh, int k, double contrast) {
  if (k < 1 || !(contrast > 0.0)) throw ConfigError("checkerboard needs k >= 1 and positive contrast");
  CoefficientField field{std::vector<double>(mesh.num_elements())};
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto x = mesh.element_centroid(e);
    int parity = 0;
    for (int a = 0; a < mesh.dim; ++a) parity += static_cast<int>(std::floor(k * x[a] / mesh.extents[a]));
    field.kappa[e] = parity % 2 == 0 ? 1.0 : contrast;
  }
  return field;
}

CoefficientField CoefficientField::layers(const StructuredMesh& mesh, int k, double contrast) {
  if (k < 1 || !(contrast > 0.0)) throw ConfigError("layers needs k >= 1 and positive contrast");
  CoefficientField field{std::vector<double>(mesh.num_elements())};
  const int axis = mesh.dim - 1;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto x = mesh.element_centroid(e);
    const int layer = static_cast<int>(std::floor(k * x[axis] / mesh.extents[axis]));
    field.kappa[e] = layer % 2 == 0 ? 1.0 : contrast;
  }
  return field;
}

CoefficientField CoefficientField::from_pattern(const StructuredMesh& mesh, const std::string& pattern, int k,
                                                double contrast) {
  if (pattern == "constant") return constant(mesh, 1.0);
  if (pattern == "checkerboard") return checkerboard(mesh, k, contrast);
  if (pattern == "layers") return layers(mesh, k, contrast);
  throw ConfigError("unknown coefficient pattern '" + pattern + "'");
}

ElementMatrix element_stiffness(const StructuredMesh& mesh, int element, double kappa, int order,
                                int quadrature_points, double source) {
  if (element < 0 || element >= mesh.num_elements()) throw ConfigError("element id out of range");
  if (order < 1) throw ConfigError("polynomial order must be >= 1");
  if (!(kappa > 0.0)) throw DataError("coefficient must be positive");
  if (quadrature_points == 0) quadrature_points = order + 1;
  if (quadrature_points < order + 1)
    throw ConfigError("quadrature with " + std::to_string(quadrature_points) +
                      " points per axis is not exact for order " + std::to_string(order));
  check_geometry(mesh);
  auto m = tensor_element(mesh.dim, order, mesh.cell_size(), reference_factors(order, quadrature_points));
  m.stiffness *= kappa;
  m.load *= source;
  return m;
}

std::vector<LocalStiffness> agglomerate_stiffness(const StructuredMesh& mesh, const DofLayout& layout,
                                                  const AgglomerateTopology& topology,
                                                  const CoefficientField& coefficient, double source) {
  const auto ref = unit_element(mesh, layout.order);
  std::vector<LocalStiffness> local(topology.num_elements());
  std::vector<int> position(layout.size(), -1);
  for (int T = 0; T < topology.num_elements(); ++T) {
    auto& out = local[T];
    for (int e : topology.T_members[T]) {
      const auto dofs = layout.element_dofs(mesh, e);
      out.dofs.insert(out.dofs.end(), dofs.begin(), dofs.end());
    }
    std::sort(out.dofs.begin(), out.dofs.end());
    out.dofs.erase(std::unique(out.dofs.begin(), out.dofs.end()), out.dofs.end());
    const int n = static_cast<int>(out.dofs.size());
    for (int i = 0; i < n; ++i) position[out.dofs[i]] = i;
    out.matrix = DenseMatrix::Zero(n, n);
    out.load = Vector::Zero(n);
    for (int e : topology.T_members[T]) {
      const auto dofs = layout.element_dofs(mesh, e);
      const double kappa = coefficient.kappa[e];
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        const int li = position[dofs[i]];
        out.load[li] += source * ref.load[i];
        for (std::size_t j = 0; j < dofs.size(); ++j) out.matrix(li, position[dofs[j]]) += kappa * ref.stiffness(i, j);
      }
    }
    for (int d : out.dofs) position[d] = -1;
  }
  return local;
}

GlobalSystem assemble_global(const StructuredMesh& mesh, const DofLayout& layout,
                             const CoefficientField& coefficient, double source) {
  const auto ref = unit_element(mesh, layout.order);
  const int n = layout.size();
  const auto local = static_cast<std::size_t>(ref.load.size());
  std::vector<Triplet> triplets;
  triplets.reserve(local * local * mesh.num_elements());
  Vector load = Vector::Zero(n);
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto dofs = layout.element_dofs(mesh, e);
    const double kappa = coefficient.kappa[e];
    for (std::size_t i = 0; i < local; ++i) {
      load[dofs[i]] += source * ref.load[i];
      for (std::size_t j = 0; j < local; ++j) triplets.emplace_back(dofs[i], dofs[j], kappa * ref.stiffness(i, j));
    }
  }
  GlobalSystem system{CsrMatrix(n, n), std::move(load)};
  system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return system;
}

FreeDofMap make_free_dof_map(int num_dofs, std::span<const int> essential_dofs) {
  FreeDofMap map;
  map.dof_to_free.assign(num_dofs, 0);
  for (int d : essential_dofs) map.dof_to_free.at(d) = -1;
  for (int d = 0; d < num_dofs; ++d) {
    if (map.dof_to_free[d] < 0) continue;
    map.dof_to_free[d] = static_cast<int>(map.free_to_dof.size());
    map.free_to_dof.push_back(d);
  }
  return map;
}

AssembledSystem apply_dirichlet(const GlobalSystem& system, std::span<const int> essential_dofs) {
  AssembledSystem out;
  out.free = make_free_dof_map(static_cast<int>(system.matrix.rows()), essential_dofs);
  const int n = out.free.size();
  if (n == 0) throw ConfigError("no free dofs remain after eliminating essential boundary dofs");
  std::vector<Triplet> triplets;
  triplets.reserve(system.matrix.nonZeros());
  out.f.resize(n);
  for (int i = 0; i < n; ++i) {
    const int row = out.free.free_to_dof[i];
    out.f[i] = system.load[row];
    for (CsrMatrix::InnerIterator it(system.matrix, row); it; ++it) {
      const int col = out.free.dof_to_free[it.col()];
      if (col >= 0) triplets.emplace_back(i, col, it.value());
    }
  }
  out.A.resize(n, n);
  out.A.setFromTriplets(triplets.begin(), triplets.end());
  out.diagonal = out.A.diagonal();
  out.l1_weights = weighted_l1_diagonal(out.A);
  return out;
}

Vector weighted_l1_diagonal(const CsrMatrix& A) {
  const Vector d = A.diagonal();
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0)) throw DataError("weighted l1 diagonal needs a positive diagonal (row " + std::to_string(i) + ")");
  Vector w = Vector::Zero(A.rows());
  for (Eigen::Index i = 0; i < A.outerSize(); ++i)
    for (CsrMatrix::InnerIterator it(A, i); it; ++it)
      w[i] += std::abs(it.value()) * std::sqrt(d[i] / d[it.col()]);
  return w;
}

}  // namespace mortar
