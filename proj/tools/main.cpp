#include <iostream>

#include <CLI11.hpp>

#include "runner.hpp"

namespace {

int run(int argc, char** argv) {
  using specopt::tools::ConfigError;
  using specopt::tools::ExperimentConfig;

  CLI::App app{"specopt: spectral-constraint solver experiments"};
  app.require_subcommand(0, 1);
  auto* run_cmd = app.add_subcommand("run", "run an experiment (default)");
  run_cmd->fallthrough();

  std::string config_path, experiment, n_list, m_list, seeds, deltas, formats, out_dir;
  double eps = 0.0;
  int max_outer = -1, restarts = 0, samples = 0, region = -1;
  bool trace = false;
  app.add_option("--config", config_path, "JSON config file; flags override its keys");
  app.add_option("--experiment", experiment, "gensdp | qcqp | selftest");
  app.add_option("--n", n_list, "matrix sizes for gensdp, e.g. 5,10,25");
  app.add_option("--m", m_list, "constraint counts for qcqp, e.g. 10");
  app.add_option("--seeds", seeds, "seed list, e.g. 0..9 or 1,3,5");
  app.add_option("--delta", deltas, "eigenvalue-band widths for qcqp, e.g. 1e-6,1e-4");
  app.add_option("--eps", eps, "stationarity tolerance (all phases and active widths)");
  app.add_option("--max-outer", max_outer, "outer iteration cap");
  app.add_option("--restarts", restarts, "starts per qcqp relaxation solve");
  app.add_option("--samples", samples, "Gaussian randomization samples");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", formats, "csv or csv,json");
  app.add_flag("--trace", trace, "write trace.jsonl");
  app.add_option("--region", region, "grid points per axis for region_*.csv (qcqp)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = specopt::tools::load_config_file(config_path);
    if (!experiment.empty()) cfg.experiment = experiment;
    if (!n_list.empty()) cfg.sizes = specopt::tools::parse_int_list(n_list);
    if (!m_list.empty()) cfg.sizes = specopt::tools::parse_int_list(m_list);
    if (app.count("--seeds") > 0) cfg.seeds = specopt::tools::parse_seed_list(seeds);
    if (!deltas.empty()) cfg.deltas = specopt::tools::parse_double_list(deltas);
    if (app.count("--eps") > 0) cfg.eps = eps;
    if (app.count("--max-outer") > 0) cfg.max_outer = max_outer;
    if (app.count("--restarts") > 0) cfg.restarts = restarts;
    if (app.count("--samples") > 0) cfg.samples = samples;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!formats.empty()) {
      cfg.formats.clear();
      std::string cur;
      for (char c : formats + ",") {
        if (c == ',') {
          if (!cur.empty()) cfg.formats.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
    }
    if (trace) cfg.trace = true;
    if (app.count("--region") > 0) cfg.region_grid = region;
    if (cfg.experiment == "selftest" && cfg.seeds.empty()) cfg.seeds = {0};

    const auto report = specopt::tools::run_experiment(cfg);
    std::cout << "wrote " << cfg.out_dir << " (" << report.wall_seconds << " s)";
    if (report.exit_code != 0) std::cout << "; some instances reported errors";
    std::cout << '\n';
    return report.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n\n" << app.help();
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
