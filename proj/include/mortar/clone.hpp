#pragma once

#include <span>
#include <vector>

#include "mortar/fem.hpp"
#include "mortar/mesh.hpp"
#include "mortar/types.hpp"

namespace mortar {

/// A (T, F) pair with F ⊂ ∂T; the position of each of F's bdofs inside T's edof block.
struct ElementFacePair {
  int element;
  int face;
  std::vector<int> trace;  // local edof index in T for each bdof of F, in F's bdof order
};

/// Realizes the Element-discontinuous space (edofs) and the Face trace space (bdofs) by cloning
/// free dofs. Edofs are numbered Element-major then by dof id; bdofs Face-major then by dof id.
struct CloneMap {
  int num_dofs = 0;  // free dofs
  std::vector<int> edof_to_dof;
  std::vector<int> edof_to_T;
  std::vector<char> edof_on_interface;  // "s" edofs map to at least one bdof, "i" edofs to none
  std::vector<int> T_edof_offset;       // edofs of T: [T_edof_offset[T], T_edof_offset[T+1])
  Incidence J;                          // per free dof: its edofs, ascending by Element
  std::vector<int> F_bdof_offset;
  std::vector<int> bdof_to_dof;
  std::vector<int> bdof_to_F;
  std::vector<ElementFacePair> pairs;  // sorted by (T, F)
  std::vector<int> T_pair_offset;

  [[nodiscard]] int num_edofs() const { return static_cast<int>(edof_to_dof.size()); }
  [[nodiscard]] int num_bdofs() const { return static_cast<int>(bdof_to_dof.size()); }
  [[nodiscard]] int num_elements() const { return static_cast<int>(T_edof_offset.size()) - 1; }
  [[nodiscard]] int num_faces() const { return static_cast<int>(F_bdof_offset.size()) - 1; }
  [[nodiscard]] int element_edofs(int T) const { return T_edof_offset[T + 1] - T_edof_offset[T]; }
  [[nodiscard]] int face_bdofs(int F) const { return F_bdof_offset[F + 1] - F_bdof_offset[F]; }
};

/// `layout` must be bound to `topology`; essential dofs are not cloned.
CloneMap build_clone_map(const DofLayout& layout, const AgglomerateTopology& topology, const FreeDofMap& free);

/// Π_{h,e} (free dofs × edofs, arithmetic averaging) and ℐ_{h,e} (edofs × free dofs, copying).
struct TransferOps {
  CsrMatrix averaging;
  CsrMatrix injection;
};

TransferOps build_transfer(const CloneMap& clone);
Vector apply_averaging(const TransferOps& transfer, const Vector& edof_vector);
Vector apply_injection(const TransferOps& transfer, const Vector& dof_vector);

/// Coarse trace basis 𝒫_F on one Face, orthonormal in the D_F inner product (𝒫ᵀ D_F 𝒫 = I).
struct FaceTraceBasis {
  int face = -1;
  int order = 0;             // monomial order q; -1 for the full fine trace space
  DenseMatrix basis;         // bdofs × m_F
  Vector weights;            // D_F
  int dropped = 0;           // columns removed as linearly dependent

  [[nodiscard]] int size() const { return static_cast<int>(basis.cols()); }
  [[nodiscard]] int trace_dimension() const { return static_cast<int>(basis.rows()); }
  [[nodiscard]] bool full() const { return order < 0; }
};

/// Number of monomials of total degree <= q in `variables` coordinates.
int monomial_count(int q, int variables);

/// Monomials of total degree <= q in Face-local coordinates (varying axes scaled to [-1, 1]),
/// D_F-orthonormalized. Requires m_F < number of bdofs (otherwise ConfigError).
FaceTraceBasis build_face_trace_basis(int face, std::span<const Point> bdof_coords, const Vector& weights, int q);

/// The full fine trace space on F: 𝒫_F = D_F^{-1/2}. Used for exactness checks only.
FaceTraceBasis full_trace_basis(int face, const Vector& weights);

/// Q_F v = 𝒫_F 𝒫_Fᵀ D_F v.
Vector apply_QF(const FaceTraceBasis& basis, const Vector& v);

enum class TraceSpaceKind { Polynomial, Full };

struct TraceSpec {
  TraceSpaceKind kind = TraceSpaceKind::Polynomial;
  int order = 0;
};

/// Number of Face-local coordinates spanned by the bdof nodes.
int face_variables(std::span<const Point> bdof_coords);

/// Rejects trace spaces with m_F >= bdofs on some Face, before any assembly.
void check_trace_dimensions(const CloneMap& clone, const DofLayout& layout, const FreeDofMap& free,
                            const TraceSpec& spec);

/// Bases for every Face; D_F taken from `diagonal` (diagonal of the reduced global A).
std::vector<FaceTraceBasis> build_trace_bases(const CloneMap& clone, const DofLayout& layout,
                                              const FreeDofMap& free, const Vector& diagonal,
                                              const TraceSpec& spec);

}  // namespace mortar
