#include <iostream>

#ifdef HDHN_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace hdhn;
  cli::Options o;
  CLI::App app{"Throughput of hybrid half-/full-duplex heterogeneous networks"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("config", o.config_path, "network description file (default: built-in two-tier setup)");
    sub->add_flag("--simulate", o.simulate, "add Monte Carlo columns");
    sub->add_option("--realizations", o.realizations, "Monte Carlo realizations")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--approximation", o.approximation, "Monte Carlo geometry: colocated or exact");
    sub->add_option("--grid-step", o.grid_step, "FD-portion grid step");
  };

  auto* compute = app.add_subcommand("compute", "print analytic quantities as CSV");
  common(compute);
  compute->add_option("--metric", o.metric, "throughput, cell_throughput, stp, association or optimum");
  compute->add_option("--tier", o.tier, "tier index (0-based)");
  compute->add_option("--mode", o.mode, "hd or fd");
  compute->add_option("--direction", o.direction, "downlink or uplink");
  compute->add_option("--theta", o.theta, "SIR target (default from the link rates)");

  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "write figure data as CSV");
  figure->add_option("id", figure_id, "fig2 ... fig10")->required();
  common(figure);
  figure->add_option("--out", o.out, "output directory");
  figure->add_flag("--svg", o.svg, "also write a simple SVG chart");
  figure->add_flag("--quick", o.quick, "fewer Monte Carlo realizations");

  auto* validate = app.add_subcommand("validate", "run the cross-check suite");
  common(validate);
  validate->add_option("--tol", o.tol, "relative tolerance of deterministic checks");
  validate->add_flag("--quick", o.quick, "reduced suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kBadInput;
  }

  try {
    if (*compute) return cli::cmd_compute(o, std::cout);
    if (*figure) return cli::cmd_figure(figure_id, o, std::cout);
    if (*validate) return cli::cmd_validate(o, std::cout);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kBadInput;
  }
  return cli::kOk;
}
