#include "mortar/clone.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>

#include "mortar/error.hpp"

namespace mortar {

CloneMap build_clone_map(const DofLayout& layout, const AgglomerateTopology& topology, const FreeDofMap& free) {
  if (!layout.bound()) throw TopologyError("dof layout is not bound to the agglomeration");
  const int nT = topology.num_elements();
  const int nF = topology.num_faces();

  Incidence free_T, free_F;
  for (int d : free.free_to_dof) {
    free_T.push_row(layout.dof_T_incidence[d]);
    free_F.push_row(layout.dof_F_incidence[d]);
  }
  const Incidence T_free = free_T.transpose(nT);
  const Incidence F_free = free_F.transpose(nF);

  CloneMap clone;
  clone.num_dofs = free.size();
  clone.T_edof_offset.assign(1, 0);
  for (int T = 0; T < nT; ++T) {
    for (int l : T_free[T]) {
      clone.edof_to_dof.push_back(l);
      clone.edof_to_T.push_back(T);
    }
    clone.T_edof_offset.push_back(clone.num_edofs());
  }
  {
    Incidence edof_dof;
    for (int l : clone.edof_to_dof) edof_dof.push_row(std::array<int, 1>{l});
    clone.J = edof_dof.transpose(clone.num_dofs);
  }

  clone.F_bdof_offset.assign(1, 0);
  for (int F = 0; F < nF; ++F) {
    for (int l : F_free[F]) {
      clone.bdof_to_dof.push_back(l);
      clone.bdof_to_F.push_back(F);
    }
    clone.F_bdof_offset.push_back(clone.num_bdofs());
  }

  clone.edof_on_interface.assign(clone.num_edofs(), 0);
  clone.T_pair_offset.assign(1, 0);
  for (int T = 0; T < nT; ++T) {
    const auto local = T_free[T];
    for (int F : topology.T_faces[T]) {
      ElementFacePair pair{T, F, {}};
      for (int l : F_free[F]) {
        const auto it = std::lower_bound(local.begin(), local.end(), l);
        if (it == local.end() || *it != l)
          throw TopologyError("Face " + std::to_string(F) + " dof outside the closure of Element " + std::to_string(T));
        const int position = static_cast<int>(it - local.begin());
        pair.trace.push_back(position);
        clone.edof_on_interface[clone.T_edof_offset[T] + position] = 1;
      }
      clone.pairs.push_back(std::move(pair));
    }
    clone.T_pair_offset.push_back(static_cast<int>(clone.pairs.size()));
  }
  return clone;
}

TransferOps build_transfer(const CloneMap& clone) {
  std::vector<Triplet> avg, inj;
  avg.reserve(clone.num_edofs());
  inj.reserve(clone.num_edofs());
  for (int l = 0; l < clone.num_dofs; ++l) {
    const auto edofs = clone.J[l];
    const double w = 1.0 / static_cast<double>(edofs.size());
    for (int j : edofs) {
      avg.emplace_back(l, j, w);
      inj.emplace_back(j, l, 1.0);
    }
  }
  TransferOps t{CsrMatrix(clone.num_dofs, clone.num_edofs()), CsrMatrix(clone.num_edofs(), clone.num_dofs)};
  t.averaging.setFromTriplets(avg.begin(), avg.end());
  t.injection.setFromTriplets(inj.begin(), inj.end());
  return t;
}

Vector apply_averaging(const TransferOps& transfer, const Vector& edof_vector) {
  if (edof_vector.size() != transfer.averaging.cols())
    throw DimensionError("averaging expects a vector over " + std::to_string(transfer.averaging.cols()) + " edofs");
  return transfer.averaging * edof_vector;
}

Vector apply_injection(const TransferOps& transfer, const Vector& dof_vector) {
  if (dof_vector.size() != transfer.injection.cols())
    throw DimensionError("injection expects a vector over " + std::to_string(transfer.injection.cols()) + " dofs");
  return transfer.injection * dof_vector;
}

int monomial_count(int q, int variables) {
  if (q < 0) return 0;
  long count = 1;  // C(q + k, k)
  for (int i = 1; i <= variables; ++i) count = count * (q + i) / i;
  return static_cast<int>(count);
}

namespace {

struct Frame {
  std::vector<int> axes;
  Point low{}, high{};
};

Frame face_frame(std::span<const Point> coords) {
  Frame frame;
  if (coords.empty()) return frame;
  frame.low = frame.high = coords[0];
  for (const auto& x : coords)
    for (int a = 0; a < 3; ++a) {
      frame.low[a] = std::min(frame.low[a], x[a]);
      frame.high[a] = std::max(frame.high[a], x[a]);
    }
  double scale = 0.0;
  for (int a = 0; a < 3; ++a) scale = std::max(scale, frame.high[a] - frame.low[a]);
  for (int a = 0; a < 3; ++a)
    if (frame.high[a] - frame.low[a] > 1e-12 * std::max(scale, 1.0)) frame.axes.push_back(a);
  return frame;
}

// Exponent tuples of total degree <= q, graded then lexicographic.
std::vector<std::vector<int>> exponents(int q, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(k, 0);
  for (int degree = 0; degree <= q; ++degree) {
    auto recurse = [&](auto&& self, int var, int remaining) -> void {
      if (var == k - 1) {
        e[var] = remaining;
        out.push_back(e);
        return;
      }
      for (int d = remaining; d >= 0; --d) {
        e[var] = d;
        self(self, var + 1, remaining - d);
      }
    };
    if (k == 0) {
      if (degree == 0) out.emplace_back();
    } else {
      recurse(recurse, 0, degree);
    }
  }
  return out;
}

}  // namespace

int face_variables(std::span<const Point> bdof_coords) {
  return static_cast<int>(face_frame(bdof_coords).axes.size());
}

FaceTraceBasis build_face_trace_basis(int face, std::span<const Point> bdof_coords, const Vector& weights, int q) {
  if (q < 0) throw ConfigError("trace order must be >= 0");
  const int n = static_cast<int>(bdof_coords.size());
  if (weights.size() != n) throw DimensionError("D_F size does not match the Face's bdofs");
  FaceTraceBasis out;
  out.face = face;
  out.order = q;
  out.weights = weights;
  if (n == 0) {
    out.basis.resize(0, 0);
    return out;
  }
  const Frame frame = face_frame(bdof_coords);
  const int k = static_cast<int>(frame.axes.size());
  const auto powers = exponents(q, k);
  const int m = static_cast<int>(powers.size());
  if (m >= n)
    throw ConfigError("Face " + std::to_string(face) + " is over-constrained: " + std::to_string(m) +
                      " trace basis functions for " + std::to_string(n) + " bdofs");

  DenseMatrix V(n, m);
  for (int i = 0; i < n; ++i) {
    std::vector<double> xi(k);
    for (int v = 0; v < k; ++v) {
      const int a = frame.axes[v];
      xi[v] = 2.0 * (bdof_coords[i][a] - frame.low[a]) / (frame.high[a] - frame.low[a]) - 1.0;
    }
    for (int c = 0; c < m; ++c) {
      double value = 1.0;
      for (int v = 0; v < k; ++v) value *= std::pow(xi[v], powers[c][v]);
      V(i, c) = value;
    }
  }

  // Modified Gram-Schmidt in the D_F inner product, two passes per column.
  std::vector<Vector> kept;
  for (int c = 0; c < m; ++c) {
    Vector v = V.col(c);
    const double original = std::sqrt(v.dot(weights.cwiseProduct(v)));
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : kept) v -= u.dot(weights.cwiseProduct(v)) * u;
    const double norm = std::sqrt(v.dot(weights.cwiseProduct(v)));
    if (!(norm > 1e-10 * original)) {
      ++out.dropped;
      continue;
    }
    kept.push_back(v / norm);
  }
  if (out.dropped > 0)
    std::cerr << "warning: Face " << face << ": dropped " << out.dropped
              << " linearly dependent trace basis vector(s)\n";
  out.basis.resize(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) out.basis.col(static_cast<Eigen::Index>(c)) = kept[c];
  return out;
}

FaceTraceBasis full_trace_basis(int face, const Vector& weights) {
  FaceTraceBasis out;
  out.face = face;
  out.order = -1;
  out.weights = weights;
  out.basis = weights.cwiseSqrt().cwiseInverse().asDiagonal();
  return out;
}

Vector apply_QF(const FaceTraceBasis& basis, const Vector& v) {
  if (v.size() != basis.trace_dimension()) throw DimensionError("Q_F input has the wrong size");
  return basis.basis * (basis.basis.transpose() * basis.weights.cwiseProduct(v));
}

namespace {

std::vector<Point> bdof_points(const CloneMap& clone, const DofLayout& layout, const FreeDofMap& free, int F) {
  std::vector<Point> points;
  for (int b = clone.F_bdof_offset[F]; b < clone.F_bdof_offset[F + 1]; ++b)
    points.push_back(layout.coords[free.free_to_dof[clone.bdof_to_dof[b]]]);
  return points;
}

}  // namespace

void check_trace_dimensions(const CloneMap& clone, const DofLayout& layout, const FreeDofMap& free,
                            const TraceSpec& spec) {
  if (spec.kind == TraceSpaceKind::Full) return;
  if (spec.order < 0) throw ConfigError("trace order must be >= 0");
  for (int F = 0; F < clone.num_faces(); ++F) {
    const int n = clone.face_bdofs(F);
    if (n == 0) continue;
    const auto points = bdof_points(clone, layout, free, F);
    const int m = monomial_count(spec.order, face_variables(points));
    if (m >= n)
      throw ConfigError("trace order " + std::to_string(spec.order) + " over-constrains Face " + std::to_string(F) +
                        " (" + std::to_string(m) + " basis functions for " + std::to_string(n) + " bdofs)");
  }
}

std::vector<FaceTraceBasis> build_trace_bases(const CloneMap& clone, const DofLayout& layout,
                                              const FreeDofMap& free, const Vector& diagonal,
                                              const TraceSpec& spec) {
  std::vector<FaceTraceBasis> bases;
  bases.reserve(clone.num_faces());
  for (int F = 0; F < clone.num_faces(); ++F) {
    Vector weights(clone.face_bdofs(F));
    for (int i = 0; i < weights.size(); ++i) weights[i] = diagonal[clone.bdof_to_dof[clone.F_bdof_offset[F] + i]];
    if (spec.kind == TraceSpaceKind::Full) {
      bases.push_back(full_trace_basis(F, weights));
    } else {
      const auto points = bdof_points(clone, layout, free, F);
      bases.push_back(build_face_trace_basis(F, points, weights, spec.order));
    }
  }
  return bases;
}

}  // namespace mortar
