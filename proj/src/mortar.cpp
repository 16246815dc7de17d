#include "mortar/mortar.hpp"

#include <lapacke.h>

#include <algorithm>
#include <string>

#include "mortar/error.hpp"

namespace mortar {

namespace {

void append_dense(std::vector<Triplet>& out, const DenseMatrix& block, int row0, int col0, bool transpose = false) {
  for (Eigen::Index j = 0; j < block.cols(); ++j)
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      const double v = block(i, j);
      if (v == 0.0) continue;
      if (transpose)
        out.emplace_back(col0 + static_cast<int>(j), row0 + static_cast<int>(i), v);
      else
        out.emplace_back(row0 + static_cast<int>(i), col0 + static_cast<int>(j), v);
    }
}

CsrMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& triplets) {
  CsrMatrix m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace

CsrMatrix MortarBlocks::assemble_ee() const {
  std::vector<Triplet> t;
  for (const auto& e : elements) append_dense(t, e.stiffness, e.edof_offset, e.edof_offset);
  return from_triplets(num_edofs, num_edofs, t);
}

CsrMatrix MortarBlocks::assemble_C() const {
  std::vector<Triplet> t;
  for (const auto& e : elements) append_dense(t, e.constraints, e.multiplier_offset, e.edof_offset);
  return from_triplets(num_multipliers, num_edofs, t);
}

CsrMatrix MortarBlocks::assemble_X() const {
  std::vector<Triplet> t;
  for (const auto& e : elements)
    for (int k = 0; k < e.num_multipliers(); ++k) t.emplace_back(e.multiplier_offset + k, e.bdofs[k], 1.0);
  return from_triplets(num_multipliers, num_bdofs, t);
}

CsrMatrix MortarBlocks::assemble() const {
  std::vector<Triplet> t;
  const int mu0 = num_edofs;
  const int b0 = num_edofs + num_multipliers;
  for (const auto& e : elements) {
    append_dense(t, e.stiffness, e.edof_offset, e.edof_offset);
    append_dense(t, e.constraints, mu0 + e.multiplier_offset, e.edof_offset);
    append_dense(t, e.constraints, mu0 + e.multiplier_offset, e.edof_offset, true);
    for (int k = 0; k < e.num_multipliers(); ++k) {
      t.emplace_back(mu0 + e.multiplier_offset + k, b0 + e.bdofs[k], -1.0);
      t.emplace_back(b0 + e.bdofs[k], mu0 + e.multiplier_offset + k, -1.0);
    }
  }
  return from_triplets(size(), size(), t);
}

Vector MortarBlocks::multiply(const Vector& x) const {
  if (x.size() != size()) throw DimensionError("mortar vector has the wrong size");
  Vector y = Vector::Zero(size());
  const int mu0 = num_edofs;
  const int b0 = num_edofs + num_multipliers;
  for (const auto& e : elements) {
    const auto u = x.segment(e.edof_offset, e.num_edofs());
    const auto mu = x.segment(mu0 + e.multiplier_offset, e.num_multipliers());
    y.segment(e.edof_offset, e.num_edofs()) += e.stiffness * u + e.constraints.transpose() * mu;
    auto ymu = y.segment(mu0 + e.multiplier_offset, e.num_multipliers());
    ymu += e.constraints * u;
    for (int k = 0; k < e.num_multipliers(); ++k) {
      ymu[k] -= x[b0 + e.bdofs[k]];
      y[b0 + e.bdofs[k]] -= mu[k];
    }
  }
  return y;
}

MortarBlocks assemble_mortar_blocks(std::span<const LocalStiffness> local, const FreeDofMap& free,
                                    const CloneMap& clone, std::span<const FaceTraceBasis> bases) {
  const int nT = clone.num_elements();
  const int nF = clone.num_faces();
  if (static_cast<int>(local.size()) != nT) throw DimensionError("one local stiffness per Element expected");
  if (static_cast<int>(bases.size()) != nF) throw DimensionError("one trace basis per Face expected");

  MortarBlocks blocks;
  blocks.face_offset.assign(1, 0);
  for (int F = 0; F < nF; ++F) {
    const auto& basis = bases[F];
    if (basis.trace_dimension() != clone.face_bdofs(F))
      throw DimensionError("trace basis of Face " + std::to_string(F) + " does not match its bdofs");
    if (!basis.full() && basis.trace_dimension() > 0 && basis.size() >= basis.trace_dimension())
      throw ConfigError("Face " + std::to_string(F) + " is over-constrained");
    blocks.face_offset.push_back(blocks.face_offset.back() + basis.size());
  }
  blocks.num_bdofs = blocks.face_offset.back();
  blocks.num_edofs = clone.num_edofs();

  blocks.elements.resize(nT);
  int multipliers = 0;
  for (int T = 0; T < nT; ++T) {
    ElementBlocks& e = blocks.elements[T];
    const LocalStiffness& ls = local[T];
    std::vector<int> keep;
    for (std::size_t k = 0; k < ls.dofs.size(); ++k)
      if (free.dof_to_free[ls.dofs[k]] >= 0) keep.push_back(static_cast<int>(k));
    const int n = static_cast<int>(keep.size());
    if (n != clone.element_edofs(T)) throw TopologyError("Element " + std::to_string(T) + " edof count mismatch");
    for (int a = 0; a < n; ++a)
      if (free.dof_to_free[ls.dofs[keep[a]]] != clone.edof_to_dof[clone.T_edof_offset[T] + a])
        throw TopologyError("Element " + std::to_string(T) + " edof order mismatch");

    e.edof_offset = clone.T_edof_offset[T];
    e.multiplier_offset = multipliers;
    e.stiffness.resize(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) e.stiffness(a, b) = ls.matrix(keep[a], keep[b]);

    int m = 0;
    for (int p = clone.T_pair_offset[T]; p < clone.T_pair_offset[T + 1]; ++p) m += bases[clone.pairs[p].face].size();
    e.constraints = DenseMatrix::Zero(m, n);
    int row = 0;
    for (int p = clone.T_pair_offset[T]; p < clone.T_pair_offset[T + 1]; ++p) {
      const auto& pair = clone.pairs[p];
      const auto& basis = bases[pair.face];
      for (int r = 0; r < basis.size(); ++r) {
        for (int i = 0; i < basis.trace_dimension(); ++i)
          e.constraints(row, pair.trace[i]) = basis.basis(i, r) * basis.weights[i];
        e.bdofs.push_back(blocks.face_offset[pair.face] + r);
        ++row;
      }
    }
    multipliers += m;
  }
  blocks.num_multipliers = multipliers;
  return blocks;
}

bool LocalSaddleFactor::factor(const DenseMatrix& matrix) {
  const lapack_int n = static_cast<lapack_int>(matrix.rows());
  factor_ = matrix;
  pivots_.assign(n, 0);
  if (n == 0) return true;
  const double anorm = LAPACKE_dlansy(LAPACK_COL_MAJOR, '1', 'L', n, matrix.data(), n);
  std::vector<lapack_int> ipiv(n);
  const lapack_int info = LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, ipiv.data());
  std::copy(ipiv.begin(), ipiv.end(), pivots_.begin());
  if (info != 0) return false;
  double rcond = 0.0;
  if (LAPACKE_dsycon(LAPACK_COL_MAJOR, 'L', n, factor_.data(), n, ipiv.data(), anorm, &rcond) != 0) return false;
  return rcond > 1e-14;
}

void LocalSaddleFactor::solve_in_place(DenseMatrix& rhs) const {
  const lapack_int n = static_cast<lapack_int>(factor_.rows());
  if (rhs.rows() != n) throw DimensionError("local saddle solve size mismatch");
  if (n == 0 || rhs.cols() == 0) return;
  std::vector<lapack_int> ipiv(pivots_.begin(), pivots_.end());
  LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', n, static_cast<lapack_int>(rhs.cols()), factor_.data(), n, ipiv.data(),
                 rhs.data(), n);
}

Vector LocalSaddleFactor::solve(const Vector& rhs) const {
  DenseMatrix x = rhs;
  solve_in_place(x);
  return x.col(0);
}

DenseMatrix saddle_matrix(const ElementBlocks& element) {
  const int n = element.num_edofs();
  const int m = element.num_multipliers();
  DenseMatrix K = DenseMatrix::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = element.stiffness;
  K.bottomLeftCorner(m, n) = element.constraints;
  K.topRightCorner(n, m) = element.constraints.transpose();
  return K;
}

std::vector<LocalSaddleFactor> factor_local_saddles(const MortarBlocks& blocks) {
  const int nT = static_cast<int>(blocks.elements.size());
  std::vector<LocalSaddleFactor> factors(nT);
  std::vector<char> ok(nT, 1);
#pragma omp parallel for schedule(static)
  for (int T = 0; T < nT; ++T) ok[T] = factors[T].factor(saddle_matrix(blocks.elements[T])) ? 1 : 0;
  for (int T = 0; T < nT; ++T)
    if (!ok[T])
      throw SingularElementError(T, "local saddle matrix of Element " + std::to_string(T) +
                                        " is singular (Element constraints do not fix its null space)");
  return factors;
}

DenseMatrix local_schur(const LocalSaddleFactor& factor, int num_edofs, int num_multipliers) {
  if (factor.size() != num_edofs + num_multipliers) throw DimensionError("local Schur size mismatch");
  DenseMatrix rhs = DenseMatrix::Zero(factor.size(), num_multipliers);
  rhs.bottomRows(num_multipliers).setIdentity();
  factor.solve_in_place(rhs);
  return -rhs.bottomRows(num_multipliers);
}

SchurComplement assemble_schur(const MortarBlocks& blocks, std::span<const LocalSaddleFactor> factors) {
  const int nT = static_cast<int>(blocks.elements.size());
  if (static_cast<int>(factors.size()) != nT) throw DimensionError("one factorization per Element expected");
  SchurComplement out;
  out.local.resize(nT);
#pragma omp parallel for schedule(static)
  for (int T = 0; T < nT; ++T) {
    const auto& e = blocks.elements[T];
    out.local[T] = local_schur(factors[T], e.num_edofs(), e.num_multipliers());
  }
  std::vector<Triplet> t;
  for (int T = 0; T < nT; ++T) {
    const auto& e = blocks.elements[T];
    const DenseMatrix& S = out.local[T];
    for (int i = 0; i < e.num_multipliers(); ++i)
      for (int j = 0; j < e.num_multipliers(); ++j)
        t.emplace_back(e.bdofs[i], e.bdofs[j], 0.5 * (S(i, j) + S(j, i)));
  }
  out.matrix = from_triplets(blocks.num_bdofs, blocks.num_bdofs, t);
  out.matrix.makeCompressed();
  out.nnz = static_cast<long>(out.matrix.nonZeros());
  return out;
}

MortarInverse::MortarInverse(const MortarBlocks& blocks, std::span<const LocalSaddleFactor> factors,
                             const SchurSolver& schur)
    : blocks_(&blocks), factors_(factors), schur_(&schur) {
  if (factors.size() != blocks.elements.size()) throw DimensionError("one factorization per Element expected");
}

Vector MortarInverse::apply(const Vector& rhs) const {
  const MortarBlocks& B = *blocks_;
  if (rhs.size() != B.size()) throw DimensionError("mortar right-hand side has the wrong size");
  const int nT = static_cast<int>(B.elements.size());
  const int mu0 = B.num_edofs;
  const int b0 = B.num_edofs + B.num_multipliers;

  Vector w(b0);
#pragma omp parallel for schedule(static)
  for (int T = 0; T < nT; ++T) {
    const auto& e = B.elements[T];
    const int n = e.num_edofs(), m = e.num_multipliers();
    Vector local(n + m);
    local.head(n) = rhs.segment(e.edof_offset, n);
    local.tail(m) = rhs.segment(mu0 + e.multiplier_offset, m);
    local = factors_[T].solve(local);
    w.segment(e.edof_offset, n) = local.head(n);
    w.segment(mu0 + e.multiplier_offset, m) = local.tail(m);
  }

  Vector reduced = rhs.tail(B.num_bdofs);
  for (const auto& e : B.elements)
    for (int k = 0; k < e.num_multipliers(); ++k) reduced[e.bdofs[k]] += w[mu0 + e.multiplier_offset + k];
  const Vector rho = B.num_bdofs > 0 ? schur_->solve(reduced) : Vector();

  Vector z(B.size());
  z.tail(B.num_bdofs) = rho;
#pragma omp parallel for schedule(static)
  for (int T = 0; T < nT; ++T) {
    const auto& e = B.elements[T];
    const int n = e.num_edofs(), m = e.num_multipliers();
    Vector local = Vector::Zero(n + m);
    for (int k = 0; k < m; ++k) local[n + k] = rho[e.bdofs[k]];
    local = factors_[T].solve(local);
    z.segment(e.edof_offset, n) = w.segment(e.edof_offset, n) + local.head(n);
    z.segment(mu0 + e.multiplier_offset, m) = w.segment(mu0 + e.multiplier_offset, m) + local.tail(m);
  }
  return z;
}

Vector MortarInverse::apply_edofs(const Vector& g_e) const {
  if (g_e.size() != blocks_->num_edofs) throw DimensionError("edof vector has the wrong size");
  Vector rhs = Vector::Zero(blocks_->size());
  rhs.head(blocks_->num_edofs) = g_e;
  return apply(rhs).head(blocks_->num_edofs);
}

OperatorComplexity oc_metrics(long nnz_A, long nnz_sigma, std::span<const long> hierarchy) {
  if (nnz_A <= 0) throw DataError("NNZ(A) must be positive");
  OperatorComplexity oc;
  oc.oc_m = 1.0 + static_cast<double>(nnz_sigma) / static_cast<double>(nnz_A);
  double coarse = 0.0;
  for (long nnz : hierarchy) coarse += static_cast<double>(nnz);
  oc.oc_aux = nnz_sigma > 0 ? 1.0 + coarse / static_cast<double>(nnz_sigma) : 1.0;
  oc.oc_orig = 1.0 + oc.oc_aux * (oc.oc_m - 1.0);
  return oc;
}

}  // namespace mortar
