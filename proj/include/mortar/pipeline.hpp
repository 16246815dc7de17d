#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "mortar/clone.hpp"
#include "mortar/fem.hpp"
#include "mortar/krylov.hpp"
#include "mortar/mesh.hpp"
#include "mortar/mortar.hpp"
#include "mortar/precond.hpp"
#include "mortar/smoother.hpp"

namespace mortar {

struct CoefficientSpec {
  std::string pattern = "constant";
  int k = 1;
  double contrast = 1.0;
};

/// A structured problem: mesh, Q_p space, box agglomerates, κ and the Face trace space.
struct ProblemSpec {
  int dim = 2;
  std::array<int, 3> cells{8, 8, 1};
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  int order = 1;
  std::array<int, 3> block{2, 2, 1};
  CoefficientSpec coefficient;
  TraceSpec trace;
  double source = 1.0;
};

/// Everything from the mesh to the assembled Σ.
struct Discretization {
  ProblemSpec spec;
  StructuredMesh mesh;
  DofLayout layout;
  AgglomerateTopology topology;
  CoefficientField coefficient;
  AssembledSystem system;
  std::vector<LocalStiffness> local;  // empty for lean builds
  CloneMap clone;
  TransferOps transfer;
  std::vector<FaceTraceBasis> bases;
  MortarBlocks blocks;
  std::vector<LocalSaddleFactor> factors;
  SchurComplement schur;  // `local` empty for lean builds
  long nnz_A = 0;

  [[nodiscard]] int num_dofs() const { return layout.size(); }
  [[nodiscard]] int num_bdofs() const { return blocks.num_bdofs; }
  [[nodiscard]] OperatorComplexity complexity() const { return oc_metrics(nnz_A, schur.nnz); }
};

/// Validates the trace space before assembling anything. `lean` drops intermediates not needed to solve.
std::unique_ptr<Discretization> build_discretization(const ProblemSpec& spec, bool lean = false);

enum class SchurKind { Exact, Chebyshev, Pcg };

struct SchurOptions {
  SchurKind kind = SchurKind::Exact;
  int iterations = 2;
  int nu = 2;
};

struct SolverOptions {
  AuxMode mode = AuxMode::Multiplicative;
  int nu = 4;
  SmootherDiagonal diagonal = SmootherDiagonal::WeightedL1;
  SchurOptions schur;
  PcgOptions pcg;
};

std::unique_ptr<SchurSolver> make_schur_solver(const CsrMatrix& sigma, const SchurOptions& options);

/// The auxiliary-space preconditioner and the pieces it references.
struct Solver {
  std::unique_ptr<ChebyshevSmoother> smoother;
  std::unique_ptr<SchurSolver> schur;
  std::unique_ptr<MortarInverse> inner;
  std::unique_ptr<AuxSpacePreconditioner> preconditioner;
};

Solver build_solver(const Discretization& disc, const SolverOptions& options);

/// PCG on A u = f with the configured preconditioner.
PcgResult solve(const Discretization& disc, const Solver& solver, const PcgOptions& options);

}  // namespace mortar
