#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mortar/clone.hpp"
#include "mortar/fem.hpp"
#include "mortar/types.hpp"

namespace mortar {

/// Element-local pieces of the mortar matrix. Multipliers of T follow its (T, F) pairs, F ascending.
struct ElementBlocks {
  DenseMatrix stiffness;    // A_T over T's free edofs
  DenseMatrix constraints;  // C_T: T's multipliers × T's edofs
  std::vector<int> bdofs;   // global Bdof index of each multiplier row (X_T is the identity on these)
  int edof_offset = 0;
  int multiplier_offset = 0;

  [[nodiscard]] int num_edofs() const { return static_cast<int>(stiffness.rows()); }
  [[nodiscard]] int num_multipliers() const { return static_cast<int>(constraints.rows()); }
};

/// 𝒜 = [[A_ee, Cᵀ, 0], [C, 0, −X], [0, −Xᵀ, 0]], unknowns ordered edofs | multipliers | Bdofs.
/// Bdofs here are the coarse Face unknowns: m_F per Face, Face-major.
struct MortarBlocks {
  std::vector<ElementBlocks> elements;
  std::vector<int> face_offset;  // Bdofs of F: [face_offset[F], face_offset[F+1])
  int num_edofs = 0;
  int num_multipliers = 0;
  int num_bdofs = 0;

  [[nodiscard]] int size() const { return num_edofs + num_multipliers + num_bdofs; }
  [[nodiscard]] CsrMatrix assemble_ee() const;
  [[nodiscard]] CsrMatrix assemble_C() const;
  [[nodiscard]] CsrMatrix assemble_X() const;
  [[nodiscard]] CsrMatrix assemble() const;
  /// 𝒜 x, block by block.
  [[nodiscard]] Vector multiply(const Vector& x) const;
};

/// `local` as returned by agglomerate_stiffness; `bases` one per Face.
MortarBlocks assemble_mortar_blocks(std::span<const LocalStiffness> local, const FreeDofMap& free,
                                    const CloneMap& clone, std::span<const FaceTraceBasis> bases);

/// Dense LDLᵀ of a symmetric indefinite matrix with Bunch–Kaufman pivoting.
class LocalSaddleFactor {
 public:
  LocalSaddleFactor() = default;
  /// Returns false when the matrix is (numerically) singular.
  bool factor(const DenseMatrix& matrix);
  void solve_in_place(DenseMatrix& rhs) const;
  [[nodiscard]] Vector solve(const Vector& rhs) const;
  [[nodiscard]] int size() const { return static_cast<int>(factor_.rows()); }

 private:
  DenseMatrix factor_;
  std::vector<int> pivots_;
};

/// 𝔄_T = [[A_T, C_Tᵀ], [C_T, 0]].
DenseMatrix saddle_matrix(const ElementBlocks& element);

/// One factorization per Element; a singular 𝔄_T raises SingularElementError naming the lowest such T.
std::vector<LocalSaddleFactor> factor_local_saddles(const MortarBlocks& blocks);

/// Σ_T = −(𝔄_T⁻¹)₂₂ over T's multipliers (equivalently T's Bdofs, since X_T = I).
DenseMatrix local_schur(const LocalSaddleFactor& factor, int num_edofs, int num_multipliers);

struct SchurComplement {
  std::vector<DenseMatrix> local;
  CsrMatrix matrix;
  long nnz = 0;  // stored entries, both triangles
};

/// Forms every Σ_T and assembles Σ = Σ_T X_Tᵀ Σ_T X_T.
SchurComplement assemble_schur(const MortarBlocks& blocks, std::span<const LocalSaddleFactor> factors);

/// Action of an approximate inverse S⁻¹ of Σ.
class SchurSolver {
 public:
  virtual ~SchurSolver() = default;
  [[nodiscard]] virtual Vector solve(const Vector& rhs) const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

/// Sparse Cholesky; raises DataError if Σ is not SPD.
std::unique_ptr<SchurSolver> make_exact_schur_solver(const CsrMatrix& sigma);
/// `sweeps` stationary iterations with the weighted-ℓ₁ Chebyshev smoother of degree ν, from zero.
std::unique_ptr<SchurSolver> make_chebyshev_schur_solver(const CsrMatrix& sigma, int sweeps, int nu);
/// Exactly `iterations` PCG steps on Σ preconditioned by the Chebyshev smoother, from zero.
std::unique_ptr<SchurSolver> make_pcg_schur_solver(const CsrMatrix& sigma, int iterations, int nu);

/// 𝒜⁻¹ by block elimination when S is exact, ℬ_sc⁻¹ otherwise.
class MortarInverse {
 public:
  MortarInverse(const MortarBlocks& blocks, std::span<const LocalSaddleFactor> factors, const SchurSolver& schur);

  /// rhs and result ordered (edofs, multipliers, Bdofs).
  [[nodiscard]] Vector apply(const Vector& rhs) const;
  /// Edof part of apply([g_e; 0; 0]).
  [[nodiscard]] Vector apply_edofs(const Vector& g_e) const;

 private:
  const MortarBlocks* blocks_;
  std::span<const LocalSaddleFactor> factors_;
  const SchurSolver* schur_;
};

struct OperatorComplexity {
  double oc_m = 1.0;
  double oc_aux = 1.0;
  double oc_orig = 1.0;
};

/// `hierarchy` lists NNZ of coarser levels built on Σ (empty when Σ is inverted directly).
OperatorComplexity oc_metrics(long nnz_A, long nnz_sigma, std::span<const long> hierarchy = {});

}  // namespace mortar
