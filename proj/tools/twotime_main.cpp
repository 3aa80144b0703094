// twotime: reproduces the two-time realism scenarios and writes CSV tables.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twotime/cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace twotime::cli;

  CLI::App app{"Two-time observables, two-point measurements and irreality"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format = "csv";
  std::string out_dir = cfg.out_dir.string();
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "samples per radius")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--out", out_dir, "output directory (default $TWOTIME_OUT_DIR or .)");
    sub->add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "tsv"}));
  };

  auto* figure1 = app.add_subcommand("figure1", "torque vs spin irreality scan");
  add_common(figure1);
  std::vector<double> radii = default_radii();
  figure1->add_option("--r-list", radii, "Bloch radii")->delimiter(',')->check(CLI::Range(0.0, 1.0));

  auto* lambda = app.add_subcommand("lambda", "Bloch norm of the conditional Lambda operator");
  add_common(lambda);
  std::size_t theta_steps = 180;
  lambda->add_option("--theta-steps", theta_steps, "theta grid size")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 24));

  auto* tpm = app.add_subcommand("tpm-gap", "TPM vs Heisenberg correlator gap");
  add_common(tpm);
  int dim = 2;
  std::size_t trials = 1000;
  tpm->add_option("--dim", dim, "Hilbert-space dimension")->check(CLI::IsMember({2, 3}));
  tpm->add_option("--trials", trials, "random instances");

  auto* report = app.add_subcommand("report", "run an invariant suite");
  add_common(report);
  std::string name;
  report->add_option("name", name, "torque-bound | eigenprep | displacement | precession")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.out_dir = out_dir;
    cfg.format = parse_format(format);
    if (figure1->parsed()) return cmd_figure1(cfg, radii, std::cout);
    if (lambda->parsed()) return cmd_lambda(cfg, theta_steps, std::cout);
    if (tpm->parsed()) return cmd_tpm_gap(cfg, dim, trials, std::cout);
    return cmd_report(cfg, name, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
