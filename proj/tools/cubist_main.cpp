#include <iostream>

#include "CLI11.hpp"
#include "cubist/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"third-order spectral transform toolkit"};
  app.require_subcommand(1);

  cubist::VerifyIdentitiesOptions vopt;
  auto* verify = app.add_subcommand(
      "verify-identities", "residuals of the generalized-exponential laws");
  verify->add_option("--samples", vopt.samples, "random (z, w) pairs");
  verify->add_option("--radius", vopt.radius, "|z|, |w| bound");
  verify->add_option("--seed", vopt.seed, "RNG seed");
  verify->add_option("--out", vopt.out, "CSV output path");

  cubist::ForwardOptions fopt;
  auto* forward =
      app.add_subcommand("forward", "transition matrix over a lambda grid");
  forward->add_option("--potential", fopt.potential_path, "potential JSON/CSV")
      ->required();
  forward->add_option("--lambda-grid", fopt.grid_path,
                      "grid JSON (default: built-in grid)");
  forward->add_option("--out", fopt.out, "CSV output path");
  forward->add_option("--panels", fopt.jost.panels, "integration panels");

  cubist::BoundStatesOptions bopt;
  auto* bound =
      app.add_subcommand("bound-states", "discrete spectrum scan on both rays");
  bound->add_option("--potential", bopt.potential_path, "potential JSON/CSV")
      ->required();
  bound->add_option("--out", bopt.out, "JSON output path");
  bound->add_option("--scan-points", bopt.scan_points, "radii per ray");
  bound->add_option("--panels", bopt.jost.panels, "integration panels");

  cubist::InvertOptions iopt;
  auto* invert =
      app.add_subcommand("invert", "reconstruct q from spectral data");
  invert->add_option("--data", iopt.data_path, "spectral data JSON")
      ->required();
  invert->add_option("--x-min", iopt.x_min, "left edge");
  invert->add_option("--x-max", iopt.x_max, "right edge");
  invert->add_option("--dx", iopt.dx, "grid step");
  invert->add_option("--out", iopt.out, "CSV output path");
  invert->add_option("--nodes", iopt.nodes, "half-line quadrature nodes");

  cubist::RoundtripOptions ropt;
  auto* roundtrip = app.add_subcommand(
      "roundtrip", "invert, then scatter the reconstruction forward");
  roundtrip->add_option("--data", ropt.data_path, "spectral data JSON")
      ->required();
  roundtrip->add_option("--out", ropt.out, "JSON report path");
  roundtrip->add_option("--x-min", ropt.x_min, "left edge");
  roundtrip->add_option("--x-max", ropt.x_max, "right edge");
  roundtrip->add_option("--dx", ropt.dx, "grid step");
  roundtrip->add_option("--nodes", ropt.nodes, "half-line quadrature nodes");
  roundtrip->add_option("--scan-points", ropt.scan_points, "radii per ray");
  roundtrip->add_option("--panels", ropt.jost.panels, "integration panels");

  cubist::JumpResidualOptions jopt;
  auto* jump = app.add_subcommand(
      "jump-residual", "ray matching relations for a small-norm potential");
  jump->add_option("--potential", jopt.potential_path, "potential JSON/CSV")
      ->required();
  jump->add_option("--t", jopt.t_points, "ray radii");
  jump->add_option("--x", jopt.x, "evaluation point");
  jump->add_option("--out", jopt.out, "CSV output path");
  jump->add_option("--scan-points", jopt.scan_points, "radii per ray");
  jump->add_option("--panels", jopt.jost.panels, "integration panels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed())
      return cubist::cmd_verify_identities(vopt, std::cout);
    if (forward->parsed()) return cubist::cmd_forward(fopt, std::cout);
    if (bound->parsed()) return cubist::cmd_bound_states(bopt, std::cout);
    if (invert->parsed()) return cubist::cmd_invert(iopt, std::cout);
    if (roundtrip->parsed()) return cubist::cmd_roundtrip(ropt, std::cout);
    if (jump->parsed()) return cubist::cmd_jump_residual(jopt, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
