#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "whf/cli.hpp"

int main(int argc, char** argv) {
  using namespace whf::cli;
  CLI::App app{"Wiener-Hopf factorisation of symmetric monodromy matrices"};
  app.require_subcommand(1);

  std::string config;
  std::optional<double> rho, v;
  std::string out;
  int workers = 0;

  auto* fac = app.add_subcommand("factorize", "factorise at one point and write a report");
  auto* grid = app.add_subcommand("grid", "tabulate Delta, B, psi and the field residual on the grid");
  auto* ver = app.add_subcommand("verify", "run the invariant suite on the grid points");
  for (auto* sub : {fac, grid, ver}) {
    sub->add_option("--config", config, "configuration file")->required();
    sub->add_option("--workers", workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  }
  fac->add_option("--rho", rho, "rho override");
  fac->add_option("--v", v, "v override");
  fac->add_option("--out", out, "report path");
  grid->add_option("--out", out, "table path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitBadConfig;
  }

  try {
    const RunConfig cfg = load_config(config);
    if (*fac) return cmd_factorize(cfg, {rho, v}, out, std::cerr);
    if (*grid) return cmd_grid(cfg, out, workers, std::cerr);
    return cmd_verify(cfg, workers, std::cerr);
  } catch (const whf::Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  }
}
