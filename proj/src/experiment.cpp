#include "mortar/experiment.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "mortar/error.hpp"
#include "mortar/io.hpp"

namespace mortar {

using nlohmann::json;

int RunConfig::trace_order_for(int p) const { return trace_order ? *trace_order : std::max(p - 1, 0); }

ProblemSpec RunConfig::problem(int level, int p) const {
  ProblemSpec spec;
  spec.dim = dim;
  spec.extents = extents;
  spec.order = p;
  spec.block = block;
  for (int a = 0; a < 3; ++a) spec.cells[a] = a < dim ? cells[a] << level : 1;
  for (int a = dim; a < 3; ++a) spec.block[a] = 1;
  spec.coefficient = coefficient;
  spec.trace = TraceSpec{trace_space, trace_order_for(p)};
  return spec;
}

namespace {

template <class T>
std::array<T, 3> read_axes(const json& j, const char* key, T fill) {
  if (!j.is_array() || j.empty() || j.size() > 3) throw ConfigError(std::string(key) + " must be an array of 1-3 numbers");
  std::array<T, 3> out{fill, fill, fill};
  for (std::size_t a = 0; a < j.size(); ++a) out[a] = j[a].get<T>();
  if (j.size() == 1) out[1] = out[2] = out[0];
  return out;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  RunConfig c;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(j,
                   {"dim", "cells", "extents", "refinements", "order", "orders", "trace_order", "trace_space",
                    "block", "coefficient", "smoother", "preconditioner", "schur", "tol", "max_it", "study",
                    "max_dofs", "csv_timing", "dump_dir"},
                   "configuration");
    c.dim = j.value("dim", c.dim);
    if (j.contains("cells")) c.cells = read_axes<int>(j["cells"], "cells", 1);
    if (j.contains("extents")) c.extents = read_axes<double>(j["extents"], "extents", 1.0);
    if (j.contains("block")) c.block = read_axes<int>(j["block"], "block", 1);
    c.refinements = j.value("refinements", c.refinements);
    c.order = j.value("order", c.order);
    if (j.contains("orders")) c.orders = j["orders"].get<std::vector<int>>();
    if (j.contains("trace_order")) {
      const auto& q = j["trace_order"];
      if (q.is_string()) {
        if (q.get<std::string>() != "p-1") throw ConfigError("trace_order must be an integer or \"p-1\"");
      } else {
        c.trace_order = q.get<int>();
      }
    }
    const std::string space = j.value("trace_space", std::string("polynomial"));
    if (space == "polynomial")
      c.trace_space = TraceSpaceKind::Polynomial;
    else if (space == "full")
      c.trace_space = TraceSpaceKind::Full;
    else
      throw ConfigError("trace_space must be \"polynomial\" or \"full\"");
    if (j.contains("coefficient")) {
      const auto& k = j["coefficient"];
      reject_unknown(k, {"pattern", "k", "contrast"}, "coefficient");
      c.coefficient.pattern = k.value("pattern", c.coefficient.pattern);
      c.coefficient.k = k.value("k", c.coefficient.k);
      c.coefficient.contrast = k.value("contrast", c.coefficient.contrast);
    }
    if (j.contains("smoother")) {
      const auto& s = j["smoother"];
      reject_unknown(s, {"nu", "diagonal"}, "smoother");
      c.solver.nu = s.value("nu", c.solver.nu);
      const std::string diag = s.value("diagonal", std::string("l1"));
      if (diag == "l1")
        c.solver.diagonal = SmootherDiagonal::WeightedL1;
      else if (diag == "jacobi")
        c.solver.diagonal = SmootherDiagonal::Jacobi;
      else
        throw ConfigError("smoother.diagonal must be \"l1\" or \"jacobi\"");
    }
    const std::string mode = j.value("preconditioner", std::string("mult"));
    if (mode == "mult")
      c.solver.mode = AuxMode::Multiplicative;
    else if (mode == "add")
      c.solver.mode = AuxMode::Additive;
    else
      throw ConfigError("preconditioner must be \"mult\" or \"add\"");
    if (j.contains("schur")) {
      const auto& s = j["schur"];
      reject_unknown(s, {"solver", "iterations", "nu"}, "schur");
      const std::string kind = s.value("solver", std::string("exact"));
      if (kind == "exact")
        c.solver.schur.kind = SchurKind::Exact;
      else if (kind == "chebyshev")
        c.solver.schur.kind = SchurKind::Chebyshev;
      else if (kind == "pcg")
        c.solver.schur.kind = SchurKind::Pcg;
      else
        throw ConfigError("schur.solver must be \"exact\", \"chebyshev\" or \"pcg\"");
      c.solver.schur.iterations = s.value("iterations", c.solver.schur.iterations);
      c.solver.schur.nu = s.value("nu", c.solver.schur.nu);
    }
    c.solver.pcg.tol = j.value("tol", c.solver.pcg.tol);
    c.solver.pcg.max_it = j.value("max_it", c.solver.pcg.max_it);
    const std::string study = j.value("study", std::string("refinement"));
    if (study == "refinement")
      c.study = StudyKind::Refinement;
    else if (study == "order")
      c.study = StudyKind::Order;
    else
      throw ConfigError("study must be \"refinement\" or \"order\"");
    c.max_dofs = j.value("max_dofs", c.max_dofs);
    c.csv_timing = j.value("csv_timing", c.csv_timing);
    c.dump_dir = j.value("dump_dir", c.dump_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read configuration " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

namespace {

long count_dofs(const ProblemSpec& spec) {
  long n = 1;
  for (int a = 0; a < spec.dim; ++a) n *= static_cast<long>(spec.order) * spec.cells[a] + 1;
  return n;
}

std::vector<std::pair<int, int>> instances(const RunConfig& c) {
  std::vector<std::pair<int, int>> out;  // (level, p)
  if (c.study == StudyKind::Refinement)
    for (int l = 0; l <= c.refinements; ++l) out.emplace_back(l, c.order);
  else
    for (int p : c.orders) out.emplace_back(0, p);
  return out;
}

void check_trace_space(const ProblemSpec& spec) {
  auto [mesh, layout] = build_structured_mesh(spec.dim, spec.cells, spec.extents, spec.order);
  const AgglomerateTopology topology = agglomerate_structured(mesh, spec.block);
  layout.bind(mesh, topology);
  const FreeDofMap free = make_free_dof_map(layout.size(), layout.essential_dofs);
  const CloneMap clone = build_clone_map(layout, topology, free);
  check_trace_dimensions(clone, layout, free, spec.trace);
}

}  // namespace

void validate_run_config(const RunConfig& c) {
  if (c.dim != 2 && c.dim != 3) throw ConfigError("dim must be 2 or 3");
  for (int a = 0; a < c.dim; ++a) {
    if (c.cells[a] < 1) throw ConfigError("cells must be positive");
    if (c.block[a] < 1) throw ConfigError("block must be positive");
    if (c.cells[a] % c.block[a] != 0) throw ConfigError("block shape must divide the cell counts");
    if (!(c.extents[a] > 0.0)) throw ConfigError("extents must be positive");
  }
  if (c.refinements < 0) throw ConfigError("refinements must be >= 0");
  if (c.order < 1) throw ConfigError("order must be >= 1");
  if (c.study == StudyKind::Order && c.orders.empty()) throw ConfigError("orders must not be empty");
  for (int p : c.orders)
    if (p < 1) throw ConfigError("orders must be >= 1");
  if (c.trace_order && *c.trace_order < 0) throw ConfigError("trace_order must be >= 0");
  const auto& k = c.coefficient;
  if (k.pattern != "constant" && k.pattern != "checkerboard" && k.pattern != "layers")
    throw ConfigError("unknown coefficient pattern '" + k.pattern + "'");
  if (k.k < 1) throw ConfigError("coefficient.k must be >= 1");
  if (!(k.contrast > 0.0)) throw ConfigError("coefficient.contrast must be positive");
  if (c.solver.nu < 1 || c.solver.schur.nu < 1) throw ConfigError("smoother nu must be >= 1");
  if (c.solver.schur.iterations < 1) throw ConfigError("schur.iterations must be >= 1");
  if (!(c.solver.pcg.tol > 0.0) || c.solver.pcg.max_it < 1) throw ConfigError("need tol > 0 and max_it >= 1");
  if (c.max_dofs < 1) throw ConfigError("max_dofs must be positive");

  const auto runs = instances(c);
  for (const auto& [level, p] : runs) {
    const long n = count_dofs(c.problem(level, p));
    if (n > c.max_dofs)
      throw ConfigError("level " + std::to_string(level) + " has " + std::to_string(n) + " dofs, above max_dofs " +
                        std::to_string(c.max_dofs));
  }
  // Faces keep their shape under refinement, so level 0 settles the refinement study.
  if (c.study == StudyKind::Refinement)
    check_trace_space(c.problem(0, c.order));
  else
    for (int p : c.orders) check_trace_space(c.problem(0, p));
}

ReportRow run_instance(const RunConfig& config, int level, int p, bool* converged) {
  const auto start = std::chrono::steady_clock::now();
  const auto disc = build_discretization(config.problem(level, p), true);
  const Solver solver = build_solver(*disc, config.solver);
  const PcgResult result = solve(*disc, solver, config.solver.pcg);

  if (!config.dump_dir.empty()) {
    std::filesystem::create_directories(config.dump_dir);
    const std::string tag = std::to_string(config.study == StudyKind::Refinement ? level : p);
    write_coordinate(config.dump_dir + "/A_" + tag + ".txt", disc->system.A);
    write_coordinate(config.dump_dir + "/sigma_" + tag + ".txt", disc->schur.matrix);
  }

  ReportRow row;
  row.level = config.study == StudyKind::Refinement ? level : p;
  row.dofs = disc->num_dofs();
  row.bdofs = disc->num_bdofs();
  const OperatorComplexity oc = disc->complexity();
  row.oc_m = oc.oc_m;
  row.oc_aux = oc.oc_aux;
  row.oc_orig = oc.oc_orig;
  row.n_it = result.report.iterations;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.lmin = result.report.spectrum ? result.report.spectrum->lmin : nan;
  row.lmax = result.report.spectrum ? result.report.spectrum->lmax : nan;
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (converged != nullptr) *converged = result.report.converged;
  return row;
}

namespace {

std::vector<ReportRow> run_all(const RunConfig& config, bool* all_converged) {
  validate_run_config(config);
  std::vector<ReportRow> rows;
  bool all = true;
  for (const auto& [level, p] : instances(config)) {
    bool ok = false;
    rows.push_back(run_instance(config, level, p, &ok));
    all = all && ok;
  }
  if (all_converged != nullptr) *all_converged = all;
  return rows;
}

}  // namespace

std::vector<ReportRow> run_refinement_study(const RunConfig& config, bool* all_converged) {
  RunConfig c = config;
  c.study = StudyKind::Refinement;
  return run_all(c, all_converged);
}

std::vector<ReportRow> run_order_study(const RunConfig& config, bool* all_converged) {
  RunConfig c = config;
  c.study = StudyKind::Order;
  return run_all(c, all_converged);
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows, bool include_timing) {
  out << kCsvHeader << '\n';
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%ld,%ld,%.17g,%.17g,%.17g,%d,%.17g,%.17g,%.17g\n", r.level, r.dofs, r.bdofs,
                  r.oc_m, r.oc_aux, r.oc_orig, r.n_it, r.lmin, r.lmax, include_timing ? r.seconds : 0.0);
    out << buf;
  }
}

std::vector<ReportRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("unexpected CSV header");
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 10) throw IoError("CSV row has " + std::to_string(f.size()) + " fields");
    try {
      ReportRow r;
      r.level = std::stoi(f[0]);
      r.dofs = std::stol(f[1]);
      r.bdofs = std::stol(f[2]);
      r.oc_m = std::strtod(f[3].c_str(), nullptr);
      r.oc_aux = std::strtod(f[4].c_str(), nullptr);
      r.oc_orig = std::strtod(f[5].c_str(), nullptr);
      r.n_it = std::stoi(f[6]);
      r.lmin = std::strtod(f[7].c_str(), nullptr);
      r.lmax = std::strtod(f[8].c_str(), nullptr);
      r.seconds = std::strtod(f[9].c_str(), nullptr);
      rows.push_back(r);
    } catch (const std::logic_error&) {
      throw IoError("malformed CSV row: " + line);
    }
  }
  return rows;
}

void write_table(std::ostream& out, const std::vector<ReportRow>& rows, const RunConfig& config) {
  char buf[256];
  const bool order = config.study == StudyKind::Order;
  if (order)
    out << " p |  q |    # dofs |  # Bdofs |  OC_m | n_it\n";
  else
    out << "Refs |    # dofs |  # Bdofs |  OC_m | n_it\n";
  for (const auto& r : rows) {
    if (order)
      std::snprintf(buf, sizeof buf, "%2d | %2d | %9ld | %8ld | %5.3f | %4d\n", r.level, config.trace_order_for(r.level),
                    r.dofs, r.bdofs, r.oc_m, r.n_it);
    else
      std::snprintf(buf, sizeof buf, "%4d | %9ld | %8ld | %5.3f | %4d\n", r.level, r.dofs, r.bdofs, r.oc_m, r.n_it);
    out << buf;
  }
}

void emit_report(const std::string& dir, const std::string& stem, const std::vector<ReportRow>& rows,
                 const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);
  const std::string csv = dir + "/" + stem + ".csv";
  const std::string txt = dir + "/" + stem + ".txt";
  std::ofstream c(csv);
  if (!c) throw IoError("cannot write " + csv);
  write_csv(c, rows, config.csv_timing);
  std::ofstream t(txt);
  if (!t) throw IoError("cannot write " + txt);
  write_table(t, rows, config);
  if (!c || !t) throw IoError("error while writing reports into " + dir);
}

}  // namespace mortar
