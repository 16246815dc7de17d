#pragma once

#include <string>
#include <vector>

#include "mortar/mesh.hpp"
#include "mortar/types.hpp"

namespace mortar {

/// Piecewise-constant κ, one value per fine element.
struct CoefficientField {
  std::vector<double> kappa;

  static CoefficientField constant(const StructuredMesh& mesh, double value = 1.0);
  /// k^d cubes over the unit-scaled domain, κ alternating between 1 and `contrast`.
  static CoefficientField checkerboard(const StructuredMesh& mesh, int k, double contrast);
  /// k slabs stacked along the last axis, alternating between 1 and `contrast`.
  static CoefficientField layers(const StructuredMesh& mesh, int k, double contrast);
  /// Named pattern: "constant", "checkerboard" or "layers".
  static CoefficientField from_pattern(const StructuredMesh& mesh, const std::string& pattern, int k,
                                       double contrast);
};

/// Gauss–Legendre rule on [0, 1].
struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int num_points);

struct ElementMatrix {
  DenseMatrix stiffness;
  Vector load;
};

/// Q_p stiffness (κ ∇u, ∇v) and load (f, v) on one box cell, dofs in local lexicographic order.
/// `quadrature_points` per axis must be at least p + 1 (exact for the bilinear form on boxes).
ElementMatrix element_stiffness(const StructuredMesh& mesh, int element, double kappa, int order,
                                int quadrature_points = 0, double source = 1.0);

/// Per-Element matrix A_T over all dofs in the Element's closure (before boundary conditions).
struct LocalStiffness {
  std::vector<int> dofs;  // ascending global dof ids
  DenseMatrix matrix;
  Vector load;
};

std::vector<LocalStiffness> agglomerate_stiffness(const StructuredMesh& mesh, const DofLayout& layout,
                                                  const AgglomerateTopology& topology,
                                                  const CoefficientField& coefficient, double source = 1.0);

/// Conforming system over all dofs, before boundary conditions.
struct GlobalSystem {
  CsrMatrix matrix;
  Vector load;
};

GlobalSystem assemble_global(const StructuredMesh& mesh, const DofLayout& layout,
                             const CoefficientField& coefficient, double source = 1.0);

/// Free-dof numbering: free index is the rank of the dof among non-essential dofs.
struct FreeDofMap {
  std::vector<int> free_to_dof;
  std::vector<int> dof_to_free;  // -1 for essential dofs

  [[nodiscard]] int size() const { return static_cast<int>(free_to_dof.size()); }
};

FreeDofMap make_free_dof_map(int num_dofs, std::span<const int> essential_dofs);

/// Reduced SPD system over free dofs.
struct AssembledSystem {
  FreeDofMap free;
  CsrMatrix A;
  Vector f;
  Vector diagonal;
  Vector l1_weights;
};

/// Eliminates rows and columns of essential dofs.
AssembledSystem apply_dirichlet(const GlobalSystem& system, std::span<const int> essential_dofs);

/// w_i = Σ_j |a_ij| sqrt(a_ii / a_jj); satisfies vᵀAv <= vᵀWv.
Vector weighted_l1_diagonal(const CsrMatrix& A);

}  // namespace mortar
