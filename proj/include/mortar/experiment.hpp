#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mortar/pipeline.hpp"

namespace mortar {

enum class StudyKind { Refinement, Order };

/// Experiment configuration, read from JSON. Every field has a default; unknown keys are rejected.
///
///   dim            2 | 3                       (3)
///   cells          cells per axis at level 0   ([4, 4, 4])
///   extents        domain size per axis        ([1, 1, 1])
///   refinements    levels after the first      (0)
///   order          p                           (1)
///   orders         p list for the order study  ([2, 3, 4, 5])
///   trace_order    q, or "p-1"                 ("p-1", clamped at 0)
///   trace_space    "polynomial" | "full"       ("polynomial")
///   block          cells per Element per axis  ([2, 2, 2])
///   coefficient    {pattern: "constant" | "checkerboard" | "layers", k: 1, contrast: 1}
///   smoother       {nu: 4, diagonal: "l1" | "jacobi"}
///   preconditioner "mult" | "add"              ("mult")
///   schur          {solver: "exact" | "chebyshev" | "pcg", iterations: 2, nu: 2}
///   tol, max_it    PCG controls                (1e-8, 500)
///   study          "refinement" | "order"      ("refinement")
///   max_dofs       refuse larger levels        (300000)
///   csv_timing     write wall times to CSV     (false: the column holds 0)
///   dump_dir       write A and Σ per level     ("": no dumps)
struct RunConfig {
  int dim = 3;
  std::array<int, 3> cells{4, 4, 4};
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  int refinements = 0;
  int order = 1;
  std::vector<int> orders{2, 3, 4, 5};
  std::optional<int> trace_order;  // empty: q = max(p - 1, 0)
  TraceSpaceKind trace_space = TraceSpaceKind::Polynomial;
  std::array<int, 3> block{2, 2, 2};
  CoefficientSpec coefficient;
  SolverOptions solver;
  StudyKind study = StudyKind::Refinement;
  long max_dofs = 300000;
  bool csv_timing = false;
  std::string dump_dir;

  [[nodiscard]] int trace_order_for(int p) const;
  [[nodiscard]] ProblemSpec problem(int level, int p) const;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Structural checks plus the trace-space dimension check, before anything is assembled.
void validate_run_config(const RunConfig& config);

struct ReportRow {
  int level = 0;  // refinement level, or p in the order study
  long dofs = 0;
  long bdofs = 0;
  double oc_m = 1.0;
  double oc_aux = 1.0;
  double oc_orig = 1.0;
  int n_it = 0;
  double lmin = 0.0;
  double lmax = 0.0;
  double seconds = 0.0;

  bool operator==(const ReportRow&) const = default;
};

/// Builds and solves one instance; `converged` reports the PCG outcome.
ReportRow run_instance(const RunConfig& config, int level, int p, bool* converged = nullptr);

/// One row per level: cells double per level, the Element block shape stays fixed.
std::vector<ReportRow> run_refinement_study(const RunConfig& config, bool* all_converged = nullptr);
/// One row per p on the level-0 mesh.
std::vector<ReportRow> run_order_study(const RunConfig& config, bool* all_converged = nullptr);

inline constexpr const char* kCsvHeader = "level,dofs,bdofs,oc_m,oc_aux,oc_orig,n_it,lmin,lmax,seconds";

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, bool include_timing);
std::vector<ReportRow> read_csv(std::istream& in);
void write_table(std::ostream& out, const std::vector<ReportRow>& rows, const RunConfig& config);

/// Writes <stem>.csv and <stem>.txt into `dir` (created if missing).
void emit_report(const std::string& dir, const std::string& stem, const std::vector<ReportRow>& rows,
                 const RunConfig& config);

}  // namespace mortar
