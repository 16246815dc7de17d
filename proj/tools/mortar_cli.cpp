// Command-line driver: single runs, refinement/order studies and the verification suite.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "checks.hpp"
#include "mortar/error.hpp"
#include "mortar/experiment.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 1, kSolver = 2, kIo = 3 };

int report(const std::vector<mortar::ReportRow>& rows, const mortar::RunConfig& config, const std::string& out,
           const std::string& stem, bool converged) {
  mortar::write_table(std::cout, rows, config);
  if (!out.empty()) mortar::emit_report(out, stem, rows, config);
  if (!converged) {
    std::cerr << "error: PCG did not reach the tolerance within max_it iterations\n";
    return kSolver;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Auxiliary-space preconditioning with condensed mortar reformulations"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int threads = 0;

  auto add_common = [&](CLI::App* cmd, bool config_required) {
    auto* opt = cmd->add_option("--config", config_path, "JSON run configuration");
    if (config_required) opt->required();
    cmd->add_option("--out", out_dir, "directory for CSV and table output");
    cmd->add_option("--threads", threads, "OpenMP thread count (0: runtime default)")->check(CLI::NonNegativeNumber);
  };
  auto* run = app.add_subcommand("run", "build and solve the first instance of a configuration");
  add_common(run, true);
  auto* study = app.add_subcommand("study", "refinement or order study");
  add_common(study, true);
  auto* verify = app.add_subcommand("verify", "property suite on small instances");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (verify->parsed()) {
      const auto results = mortar::checks::run_verify_suite();
      bool ok = true;
      for (const auto& r : results) {
        std::cout << mortar::checks::format(r) << '\n';
        ok = ok && r.passed;
      }
      return ok ? kOk : kSolver;
    }

    mortar::RunConfig config = mortar::load_run_config(config_path);
    mortar::validate_run_config(config);
    if (run->parsed()) {
      const int p = config.study == mortar::StudyKind::Order ? config.orders.front() : config.order;
      bool converged = false;
      const auto row = mortar::run_instance(config, 0, p, &converged);
      return report({row}, config, out_dir, "run", converged);
    }
    bool converged = false;
    const auto rows = config.study == mortar::StudyKind::Order ? mortar::run_order_study(config, &converged)
                                                                : mortar::run_refinement_study(config, &converged);
    return report(rows, config, out_dir, "study", converged);
  } catch (const mortar::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const mortar::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const mortar::Error& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
}
