#include "stationary/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace rn = stationary::runner;

int main(int argc, char** argv) {
  CLI::App app{"Stationary spacetime scattering experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::optional<unsigned> seed;
  int jobs = 1;
  std::optional<double> abs_tol, rel_tol;

  auto* run = app.add_subcommand("run", "Run every experiment in a JSON configuration");
  run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output_dir, "Output directory (default $STATIONARY_OUTPUT_DIR or ./stationary-out)");
  run->add_option("--seed", seed, "Override every experiment seed");
  run->add_option("-j,--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--abs-tol", abs_tol, "Absolute integrator tolerance")->check(CLI::PositiveNumber);
  run->add_option("--rel-tol", rel_tol, "Relative integrator tolerance")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-gallery", "Describe the built-in manifolds");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a configuration without integrating");
  validate->add_option("config", validate_path, "Configuration file")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      std::cout << rn::gallery_listing();
      return 0;
    }
    if (validate->parsed()) {
      const auto cfg = rn::load_config(validate_path);
      const auto issues = rn::validate_config(cfg);
      for (const auto& i : issues) std::cerr << "error: " << i << "\n";
      if (!issues.empty()) return 2;
      std::cout << validate_path << ": " << cfg.experiments.size() << " experiment(s) OK\n";
      return 0;
    }
    rn::RunOptions opts;
    opts.output_dir = output_dir.empty() ? rn::default_output_dir() : std::filesystem::path(output_dir);
    opts.seed = seed;
    opts.jobs = jobs;
    opts.abs_tol = abs_tol;
    opts.rel_tol = rel_tol;
    const auto cfg = rn::load_config(config_path);
    const auto summary = rn::run(cfg, opts);
    std::cout << rn::summary_text(summary);
    std::cout << "results written to " << opts.output_dir.string() << "\n";
    return summary.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
