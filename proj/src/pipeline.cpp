#include "mortar/pipeline.hpp"

#include "mortar/error.hpp"

namespace mortar {

std::unique_ptr<Discretization> build_discretization(const ProblemSpec& spec, bool lean) {
  auto disc = std::make_unique<Discretization>();
  disc->spec = spec;
  auto [mesh, layout] = build_structured_mesh(spec.dim, spec.cells, spec.extents, spec.order);
  disc->mesh = std::move(mesh);
  disc->layout = std::move(layout);
  disc->topology = agglomerate_structured(disc->mesh, spec.block);
  disc->layout.bind(disc->mesh, disc->topology);

  const FreeDofMap free = make_free_dof_map(disc->layout.size(), disc->layout.essential_dofs);
  if (free.size() == 0) throw ConfigError("no free dofs: every dof is constrained");
  disc->clone = build_clone_map(disc->layout, disc->topology, free);
  check_trace_dimensions(disc->clone, disc->layout, free, spec.trace);

  disc->coefficient =
      CoefficientField::from_pattern(disc->mesh, spec.coefficient.pattern, spec.coefficient.k, spec.coefficient.contrast);
  {
    GlobalSystem global = assemble_global(disc->mesh, disc->layout, disc->coefficient, spec.source);
    disc->system = apply_dirichlet(global, disc->layout.essential_dofs);
  }
  disc->nnz_A = static_cast<long>(disc->system.A.nonZeros());
  disc->transfer = build_transfer(disc->clone);
  disc->bases = build_trace_bases(disc->clone, disc->layout, disc->system.free, disc->system.diagonal, spec.trace);

  disc->local = agglomerate_stiffness(disc->mesh, disc->layout, disc->topology, disc->coefficient, spec.source);
  disc->blocks = assemble_mortar_blocks(disc->local, disc->system.free, disc->clone, disc->bases);
  if (lean) std::vector<LocalStiffness>().swap(disc->local);
  disc->factors = factor_local_saddles(disc->blocks);
  disc->schur = assemble_schur(disc->blocks, disc->factors);
  if (lean) std::vector<DenseMatrix>().swap(disc->schur.local);
  return disc;
}

std::unique_ptr<SchurSolver> make_schur_solver(const CsrMatrix& sigma, const SchurOptions& options) {
  switch (options.kind) {
    case SchurKind::Exact:
      return make_exact_schur_solver(sigma);
    case SchurKind::Chebyshev:
      return make_chebyshev_schur_solver(sigma, options.iterations, options.nu);
    case SchurKind::Pcg:
      return make_pcg_schur_solver(sigma, options.iterations, options.nu);
  }
  throw ConfigError("unknown Schur solver");
}

Solver build_solver(const Discretization& disc, const SolverOptions& options) {
  Solver s;
  s.smoother = std::make_unique<ChebyshevSmoother>(disc.system.A, options.nu, options.diagonal);
  s.schur = make_schur_solver(disc.schur.matrix, options.schur);
  s.inner = std::make_unique<MortarInverse>(disc.blocks, disc.factors, *s.schur);
  s.preconditioner =
      std::make_unique<AuxSpacePreconditioner>(disc.system.A, *s.smoother, disc.transfer, *s.inner, options.mode);
  return s;
}

PcgResult solve(const Discretization& disc, const Solver& solver, const PcgOptions& options) {
  const MatrixOperator A(disc.system.A);
  return pcg(A, *solver.preconditioner, disc.system.f, options);
}

}  // namespace mortar
