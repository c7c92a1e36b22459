#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "cubist/invscatter.hpp"
#include "cubist/jost.hpp"
#include "cubist/potential.hpp"
#include "cubist/report.hpp"
#include "cubist/scatter.hpp"

namespace cubist {

// Config ingestion.  Potentials come from a JSON descriptor
// {type, params..., decay_rate} or a two-column x,q CSV with the declared
// decay rate in a "# decay_rate = a" comment line; see docs/formats.md.
Potential potential_from_json_text(const std::string& text);
Potential potential_from_file(const std::string& path);

// Inverse data: bound / boundHat state lists plus an optional sampled
// reflection coefficient (sc2 must be absent or null).
ScatteringData data_from_json_text(const std::string& text);
ScatteringData data_from_file(const std::string& path);

// 20 points on the real segment (0.02, a/3), 10 on each of the two jump
// rays at arg 210 and 330 degrees, 10 at i omega with omega in [5, 40].
std::vector<cd> default_lambda_grid(double decay_rate);
std::vector<cd> lambda_grid_from_file(const std::string& path,
                                      double decay_rate);

struct VerifyIdentitiesOptions {
  int samples = 1000;
  double radius = 5.0;
  std::uint64_t seed = 7;
  std::string out = "identities.csv";
};

struct ForwardOptions {
  std::string potential_path;
  std::string grid_path;  // empty: default grid for the declared decay rate
  std::string out = "scatter.csv";
  JostOptions jost;
};

struct BoundStatesOptions {
  std::string potential_path;
  std::string out = "bs.json";
  int scan_points = 400;
  JostOptions jost;
};

struct InvertOptions {
  std::string data_path;
  double x_min = -5.0, x_max = 5.0, dx = 0.01;
  std::string out = "q.csv";
  int nodes = 200;
};

struct RoundtripOptions {
  std::string data_path;
  std::string out = "roundtrip.json";
  double x_min = -8.0, x_max = 8.0, dx = 0.01;
  int nodes = 200;
  int scan_points = 400;
  JostOptions jost;
};

struct JumpResidualOptions {
  std::string potential_path;
  std::vector<double> t_points = {0.5, 0.75, 1.0, 1.5, 2.0};
  double x = 0.25;
  std::string out = "jump.csv";
  int scan_points = 400;
  JostOptions jost;
};

// Each verb returns 0 iff every check it ran passed; hard input errors
// throw and the CLI maps them to exit code 2.
int cmd_verify_identities(const VerifyIdentitiesOptions& opt,
                          std::ostream& log);
int cmd_forward(const ForwardOptions& opt, std::ostream& log);
int cmd_bound_states(const BoundStatesOptions& opt, std::ostream& log);
int cmd_invert(const InvertOptions& opt, std::ostream& log);
int cmd_roundtrip(const RoundtripOptions& opt, std::ostream& log);
int cmd_jump_residual(const JumpResidualOptions& opt, std::ostream& log);

}  // namespace cubist
