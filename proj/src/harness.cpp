#include "cubist/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cubist/threads.hpp"

namespace cubist {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Sorted samples with cubic Lagrange interpolation, zero outside the range.
struct SampledCurve {
  std::vector<double> x;
  std::vector<cd> y;

  cd at(double xq) const {
    const int n = static_cast<int>(x.size());
    if (n == 0 || xq < x.front() || xq > x.back()) return cd(0.0, 0.0);
    if (n == 1) return y[0];
    int j = static_cast<int>(std::upper_bound(x.begin(), x.end(), xq) -
                             x.begin()) -
            1;
    if (n < 4) {
      j = std::min(j, n - 2);
      double f = (xq - x[j]) / (x[j + 1] - x[j]);
      return (1.0 - f) * y[j] + f * y[j + 1];
    }
    int j0 = std::clamp(j - 1, 0, n - 4);
    cd acc(0.0, 0.0);
    for (int a = 0; a < 4; ++a) {
      double lk = 1.0;
      for (int b = 0; b < 4; ++b)
        if (b != a) lk *= (xq - x[j0 + b]) / (x[j0 + a] - x[j0 + b]);
      acc += lk * y[j0 + a];
    }
    return acc;
  }
};

Potential sampled_potential(std::vector<double> xs, std::vector<cd> qs,
                            double decay_rate, bool is_real) {
  if (xs.size() != qs.size() || xs.size() < 2)
    throw std::invalid_argument("sampled potential needs matching x,q lists");
  if (!std::is_sorted(xs.begin(), xs.end()))
    throw std::invalid_argument("sampled potential abscissae must ascend");
  auto curve = std::make_shared<SampledCurve>();
  curve->x = std::move(xs);
  curve->y = std::move(qs);
  Potential p;
  p.q = [curve](double x) { return curve->at(x); };
  p.decay_rate = decay_rate;
  p.is_real = is_real;
  p.name = "samples";
  return p;
}

void log_potential(const Potential& p, std::ostream& log) {
  PotentialMoments m = potential_moments(p);
  double cpl = coupling_diagnostic(m);
  log << "potential " << p.name << ": q1=" << g17(m.l1) << " q2=" << g17(m.l2)
      << " sup=" << g17(m.sup) << " weighted=" << g17(m.weighted) << "\n";
  log << "coupling-diagnostic: 3*max(2*sqrt(q1),2*sqrt(q2),9) = " << g17(cpl)
      << " vs decay rate a = " << g17(p.decay_rate)
      << (cpl < p.decay_rate ? "  (small-norm margin satisfied)"
                             : "  (outside the small-norm regime)")
      << "\n";
}

void check_distinct(const std::vector<BoundInput>& v, const char* family) {
  for (const auto& s : v)
    if (!(s.kappa > 0.0))
      throw std::invalid_argument(std::string(family) +
                                  " kappa values must be positive");
  std::vector<double> k;
  for (const auto& s : v) k.push_back(s.kappa);
  std::sort(k.begin(), k.end());
  for (std::size_t i = 1; i < k.size(); ++i)
    if (k[i] - k[i - 1] < 1e-12)
      throw std::invalid_argument(std::string(family) +
                                  " kappa values must be distinct");
}

}  // namespace

Potential potential_from_json_text(const std::string& text) {
  json j = json::parse(text);
  const std::string type = j.at("type").get<std::string>();
  if (type == "gaussian") {
    Potential p = gaussian_potential(j.at("q0").get<double>(),
                                     j.value("width", 1.0),
                                     j.value("decay_rate", 3.0));
    return p;
  }
  if (type == "bump") {
    Potential p =
        bump_potential(j.at("q0").get<double>(), j.value("width", 1.0));
    if (j.contains("decay_rate")) p.decay_rate = j.at("decay_rate").get<double>();
    return p;
  }
  if (type == "two-sided-exp") {
    Potential p = two_sided_exp_potential(j.at("q0").get<double>(),
                                          j.at("rate").get<double>());
    if (j.contains("decay_rate")) {
      double a = j.at("decay_rate").get<double>();
      if (a >= j.at("rate").get<double>())
        throw std::invalid_argument(
            "two-sided-exp decay_rate must be below the profile rate");
      p.decay_rate = a;
    }
    return p;
  }
  if (type == "samples") {
    std::vector<double> xs = j.at("x").get<std::vector<double>>();
    std::vector<double> qs = j.at("q").get<std::vector<double>>();
    std::vector<cd> qc(qs.begin(), qs.end());
    return sampled_potential(std::move(xs), std::move(qc),
                             j.at("decay_rate").get<double>(), true);
  }
  throw std::invalid_argument("unknown potential type: " + type);
}

Potential potential_from_file(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    std::vector<double> xs;
    std::vector<cd> qs;
    double decay_rate = 1.0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      if (line[0] == '#') {
        auto pos = line.find("decay_rate");
        if (pos != std::string::npos) {
          auto eq = line.find_first_of("=:", pos);
          if (eq != std::string::npos)
            decay_rate = std::stod(line.substr(eq + 1));
        }
        continue;
      }
      std::istringstream ls(line);
      double x, q;
      char comma;
      if (ls >> x >> comma >> q) {
        xs.push_back(x);
        qs.push_back(cd(q, 0.0));
      }
    }
    return sampled_potential(std::move(xs), std::move(qs), decay_rate, true);
  }
  return potential_from_json_text(text);
}

ScatteringData data_from_json_text(const std::string& text) {
  json j = json::parse(text);
  if (j.contains("sc2") && !j["sc2"].is_null())
    throw std::invalid_argument(
        "only data with vanishing second reflection coefficient is supported");
  ScatteringData d;
  for (const auto& s : j.value("bound", json::array()))
    d.states.push_back({s.at("kappa").get<double>(),
                        cd(s.value("b_re", 1.0), s.value("b_im", 0.0))});
  for (const auto& s : j.value("boundHat", json::array()))
    d.hat_states.push_back({s.at("kappa").get<double>(),
                            cd(s.value("b_re", 1.0), s.value("b_im", 0.0))});
  check_distinct(d.states, "bound");
  check_distinct(d.hat_states, "boundHat");
  if (j.contains("sc1") && !j["sc1"].is_null()) {
    auto curve = std::make_shared<SampledCurve>();
    for (const auto& s : j["sc1"]) {
      curve->x.push_back(s.at("t").get<double>());
      curve->y.push_back(cd(s.value("re", 0.0), s.value("im", 0.0)));
    }
    if (!std::is_sorted(curve->x.begin(), curve->x.end()))
      throw std::invalid_argument("sc1 samples must ascend in t");
    if (!curve->x.empty()) {
      d.reflection = [curve](double t) { return curve->at(t); };
      d.has_reflection = true;
    }
  }
  return d;
}

ScatteringData data_from_file(const std::string& path) {
  return data_from_json_text(read_file(path));
}

std::vector<cd> default_lambda_grid(double decay_rate) {
  std::vector<cd> g;
  const double hi = decay_rate / 3.0;
  if (hi <= 0.02)
    throw std::invalid_argument("decay rate too small for the default grid");
  for (int j = 0; j < 20; ++j)
    g.push_back(cd(0.02 + (hi - 0.02) * (j + 0.5) / 20.0, 0.0));
  const cd ray210 = cd(0.0, 1.0) * zeta(1);
  const cd ray330 = cd(0.0, 1.0) * zeta(2);
  for (int j = 0; j < 10; ++j)
    g.push_back((0.02 + (hi - 0.02) * (j + 0.5) / 10.0) * ray210);
  for (int j = 0; j < 10; ++j)
    g.push_back((0.02 + (hi - 0.02) * (j + 0.5) / 10.0) * ray330);
  for (int j = 0; j < 10; ++j)
    g.push_back(cd(0.0, 5.0 + 35.0 * j / 9.0));
  return g;
}

std::vector<cd> lambda_grid_from_file(const std::string& path,
                                      double decay_rate) {
  json j = json::parse(read_file(path));
  if (j.contains("points")) {
    std::vector<cd> g;
    for (const auto& p : j["points"])
      g.push_back(cd(p.at("re").get<double>(), p.value("im", 0.0)));
    if (g.empty()) throw std::invalid_argument("empty lambda grid");
    return g;
  }
  if (j.value("default", false)) return default_lambda_grid(decay_rate);
  throw std::invalid_argument(
      "lambda grid file needs a points array or default=true");
}

int cmd_verify_identities(const VerifyIdentitiesOptions& opt,
                          std::ostream& log) {
  if (opt.samples < 1 || opt.radius <= 0.0)
    throw std::invalid_argument("samples and radius must be positive");
  std::mt19937_64 rng(opt.seed);
  auto draw = [&]() {
    for (;;) {
      cd z(opt.radius * (2.0 * uniform_double(rng) - 1.0),
           opt.radius * (2.0 * uniform_double(rng) - 1.0));
      if (std::abs(z) <= opt.radius) return z;
    }
  };

  static const char* names[11] = {
      "derivative-shift", "conjugation", "parity",     "exp-recombination",
      "initial-data",     "cubic-sum",   "addition",   "product",
      "squaring",         "reflection",  "taylor-tail"};
  double mx[11] = {0.0};
  for (int s = 0; s < opt.samples; ++s) {
    const cd z = draw(), w = draw();
    const IdentityResiduals r = identity_residuals(z, w);
    const double vals[11] = {r.derivative_shift, r.conjugation, r.p_evenness,
                             r.euler,            r.initial_data, r.main_identity,
                             r.addition,         r.product,      r.squaring,
                             r.reflection,       r.taylor};
    for (int k = 0; k < 11; ++k) mx[k] = std::max(mx[k], vals[k]);
  }

  Report rep;
  std::vector<std::string> rows;
  for (int k = 0; k < 11; ++k) {
    rep.add(names[k], std::string("identity-") + names[k], mx[k], 1e-11);
    rows.push_back(std::string(names[k]) + "," + g17(mx[k]) + "," +
                   std::to_string(opt.samples));
  }
  if (!opt.out.empty()) write_csv(opt.out, "identity,max_residual,samples", rows);
  return rep.print(log) ? 1 : 0;
}

namespace {

// The transition matrix is only well conditioned inside the closed disk
// |lambda| <= a/3 (plus its boundary rays); the large imaginary points of the
// default grid exist for the asymptotic checks and are skipped here.
std::vector<cd> disk_points(const std::vector<cd>& grid, double decay_rate,
                            std::ostream& log) {
  std::vector<cd> used;
  for (const cd& lam : grid)
    if (std::abs(lam) <= decay_rate / 3.0 + 1e-12) used.push_back(lam);
  if (used.size() < grid.size())
    log << "skipping " << grid.size() - used.size()
        << " grid points with |lambda| > a/3 (transition matrix not "
           "evaluated there)\n";
  if (used.empty()) throw std::invalid_argument("no admissible grid points");
  return used;
}

}  // namespace

int cmd_forward(const ForwardOptions& opt, std::ostream& log) {
  const Potential p = potential_from_file(opt.potential_path);
  log_potential(p, log);
  const std::vector<cd> grid = disk_points(
      opt.grid_path.empty() ? default_lambda_grid(p.decay_rate)
                            : lambda_grid_from_file(opt.grid_path, p.decay_rate),
      p.decay_rate, log);
  const int n = static_cast<int>(grid.size());
  std::vector<std::string> rows(n);
  std::vector<UnitarityChecks> checks(n);
  parallel_for(n, [&](int i) {
    const cd lam = grid[i];
    const Eigen::Matrix3cd t = transition_matrix(lam, p, opt.jost);
    checks[i] = unitarity_checks(lam, p, opt.jost);
    std::string row = g17(lam);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) row += "," + g17(t(r, c));
    row += "," + g17(t.determinant());
    row += "," + g17(checks[i].j_unitarity) + "," + g17(checks[i].power);
    rows[i] = row;
  });

  std::string header = "lambda_re,lambda_im";
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      header += ",t" + std::to_string(r) + std::to_string(c) + "_re";
      header += ",t" + std::to_string(r) + std::to_string(c) + "_im";
    }
  header += ",det_re,det_im,junitarity_residual,unitarity_residual";
  if (!opt.out.empty()) write_csv(opt.out, header, rows);

  double det = 0, ju = 0, pw = 0, cf = 0;
  for (const auto& c : checks) {
    det = std::max(det, c.det_one);
    ju = std::max(ju, c.j_unitarity);
    pw = std::max(pw, c.power);
    cf = std::max(cf, c.cofactor);
  }
  Report rep;
  const std::string tag = " over " + std::to_string(n) + " lambda";
  rep.add("max |det T - 1|" + tag, "det-one", det, 1e-6);
  rep.add("max J-unitarity defect" + tag, "j-unitarity", ju, 1e-6);
  rep.add("max power-identity defect" + tag, "power", pw, 1e-6);
  rep.add("max cofactor defect" + tag, "cofactor", cf, 1e-6);
  return rep.print(log) ? 1 : 0;
}

int cmd_bound_states(const BoundStatesOptions& opt, std::ostream& log) {
  const Potential p = potential_from_file(opt.potential_path);
  log_potential(p, log);
  const BoundStateScan scan = find_bound_states(p, opt.jost, opt.scan_points);
  log << "scan: " << scan.states.size() << " states on the 240 ray, "
      << scan.hat_states.size() << " on the 300 ray\n";

  json out;
  out["coupling_diagnostic"] = scan.coupling;
  out["decay_rate"] = scan.decay_rate;
  auto dump = [](const BoundState& b, const char* ray) {
    json r;
    r["ray"] = ray;
    r["kappa"] = b.kappa;
    r["b_re"] = b.b.real();
    r["b_im"] = b.b.imag();
    r["t00_abs"] = b.t00_abs;
    r["t00p_abs"] = std::abs(b.t00_prime);
    r["t01_abs"] = b.t01_abs;
    r["t02_abs"] = b.t02_abs;
    return r;
  };
  out["states"] = json::array();
  for (const auto& b : scan.states) out["states"].push_back(dump(b, "240"));
  out["hat_states"] = json::array();
  for (const auto& b : scan.hat_states)
    out["hat_states"].push_back(dump(b, "300"));
  if (!opt.out.empty()) write_text(opt.out, out.dump(2) + "\n");

  Report rep;
  for (const auto& b : scan.states)
    rep.add("kappa=" + g17(b.kappa) + " ray 240", "zero-threshold", b.t00_abs,
            1e-6);
  for (const auto& b : scan.hat_states)
    rep.add("kappa=" + g17(b.kappa) + " ray 300", "zero-threshold", b.t00_abs,
            1e-6);
  return rep.print(log) ? 1 : 0;
}

namespace {

struct InversionRun {
  std::vector<double> xs;
  std::vector<cd> tail, q;
};

InversionRun run_inversion(const ScatteringData& d, double x_min, double x_max,
                           double dx, int nodes) {
  if (!(dx > 0.0) || !(x_max > x_min))
    throw std::invalid_argument("bad x grid for inversion");
  InversionRun r;
  const int n = static_cast<int>(std::lround((x_max - x_min) / dx)) + 1;
  r.xs.resize(n);
  for (int i = 0; i < n; ++i) r.xs[i] = x_min + i * dx;
  r.tail = d.has_reflection ? one_reflection_tail(d, r.xs, nodes)
                            : reflectionless_tail(d, r.xs, nodes);
  r.q = recover_q(r.tail, dx);
  return r;
}

void log_reconstruction(const InversionRun& r, double dx, std::ostream& log) {
  double im_max = 0, q1 = 0, q2 = 0;
  for (const auto& v : r.q) {
    im_max = std::max(im_max, std::abs(v.imag()));
    q1 += std::abs(v) * dx;
    q2 += std::norm(v) * dx;
  }
  q2 = std::sqrt(q2);
  log << "reconstruction: q1=" << g17(q1) << " q2=" << g17(q2)
      << " max|Im q|=" << g17(im_max) << "\n";
  log << "coupling-diagnostic: 3*max(2*sqrt(q1),2*sqrt(q2),9) = "
      << g17(3.0 * std::max({2.0 * std::sqrt(q1), 2.0 * std::sqrt(q2), 9.0}))
      << "  (decay rate of the reconstruction not declared)\n";
  const double edge = std::abs(r.tail.back());
  if (edge > 1e-10)
    log << "warning: |F| = " << g17(edge)
        << " at the right edge; widen the window if the profile must be "
           "complete\n";
}

}  // namespace

int cmd_invert(const InvertOptions& opt, std::ostream& log) {
  const ScatteringData d = data_from_file(opt.data_path);
  const InversionRun r =
      run_inversion(d, opt.x_min, opt.x_max, opt.dx, opt.nodes);
  log_reconstruction(r, opt.dx, log);
  std::vector<std::string> rows(r.xs.size());
  for (std::size_t i = 0; i < r.xs.size(); ++i)
    rows[i] = g17(r.xs[i]) + "," + g17(r.q[i]) + "," + g17(r.tail[i]);
  if (!opt.out.empty()) write_csv(opt.out, "x,q_re,q_im,F_re,F_im", rows);
  log << "wrote " << rows.size() << " rows\n";
  return 0;
}

int cmd_roundtrip(const RoundtripOptions& opt, std::ostream& log) {
  const ScatteringData d = data_from_file(opt.data_path);

  double kappa_min = 0.0, kappa_max = 0.0;
  for (const auto& s : d.states) {
    kappa_min = kappa_min > 0 ? std::min(kappa_min, s.kappa) : s.kappa;
    kappa_max = std::max(kappa_max, s.kappa);
  }
  for (const auto& s : d.hat_states) {
    kappa_min = kappa_min > 0 ? std::min(kappa_min, s.kappa) : s.kappa;
    kappa_max = std::max(kappa_max, s.kappa);
  }

  // A state at kappa makes the profile decay like exp(-sqrt(3) kappa |x|/2),
  // so the window has to scale with 1/kappa or the sampled tails are chopped
  // off at a visible amplitude.
  double x_lo = opt.x_min, x_hi = opt.x_max;
  if (kappa_min > 0.0) {
    const double half = std::min(40.0, 21.0 / kappa_min + 4.0);
    x_lo = std::min(x_lo, -half);
    x_hi = std::max(x_hi, half);
  }
  const InversionRun r = run_inversion(d, x_lo, x_hi, opt.dx, opt.nodes);
  log_reconstruction(r, opt.dx, log);

  Potential rec = sampled_potential(r.xs, r.q, 1.0, false);
  rec.name = "reconstructed";
  // Weighted admissibility caps the declared rate at sqrt(3) kappa / 2; that
  // rate bounds the disk for the coefficient sweep.
  if (kappa_min > 0.0) rec.decay_rate = 0.95 * (kSqrt3 / 2.0) * kappa_min;
  log_potential(rec, log);

  // Slowly decaying reconstructions need the solver window opened up along
  // with the sampling window, and the panel count scaled to keep the step
  // near the forward default.
  JostOptions jost = opt.jost;
  if (kappa_min > 0.0) {
    jost.x_cut_max = std::max(jost.x_cut_max, std::max(-x_lo, x_hi));
    jost.panels = std::max(
        jost.panels, static_cast<int>(std::lround(2.0 * jost.x_cut_max / 0.008)));
  }

  const std::vector<cd> grid =
      disk_points(default_lambda_grid(rec.decay_rate), rec.decay_rate, log);
  const int n = static_cast<int>(grid.size());
  std::vector<double> sc1_abs(n), sc2_abs(n);
  parallel_for(n, [&](int i) {
    const ScatteringCoefficients sc =
        scattering_coefficients(grid[i], rec, jost);
    sc1_abs[i] = std::abs(sc.sc1);
    sc2_abs[i] = std::abs(sc.sc2);
  });
  // The ray evaluations behind the scan stay conditioned past the weighted
  // disk, so the scan interval (0, a/3) is widened to cover every kappa the
  // data promises.
  Potential scan_pot = rec;
  if (kappa_max > 0.0)
    scan_pot.decay_rate = std::max(rec.decay_rate, 3.0 * 1.25 * kappa_max);
  const BoundStateScan scan =
      find_bound_states(scan_pot, jost, opt.scan_points);

  json out;
  out["lambda_grid"] = json::array();
  for (int i = 0; i < n; ++i)
    out["lambda_grid"].push_back({{"re", grid[i].real()},
                                  {"im", grid[i].imag()},
                                  {"sc1_abs", sc1_abs[i]},
                                  {"sc2_abs", sc2_abs[i]}});
  out["recovered"] = json::array();
  for (const auto& b : scan.states)
    out["recovered"].push_back(
        {{"ray", "240"}, {"kappa", b.kappa}, {"b_re", b.b.real()},
         {"b_im", b.b.imag()}});
  for (const auto& b : scan.hat_states)
    out["recovered"].push_back(
        {{"ray", "300"}, {"kappa", b.kappa}, {"b_re", b.b.real()},
         {"b_im", b.b.imag()}});
  if (!opt.out.empty()) write_text(opt.out, out.dump(2) + "\n");

  double sc1_max = 0.0, sc2_max = 0.0;
  for (double v : sc1_abs) sc1_max = std::max(sc1_max, v);
  for (double v : sc2_abs) sc2_max = std::max(sc2_max, v);
  log << "grid: " << n << " points, max |sc1| = " << g17(sc1_max)
      << ", max |sc2| = " << g17(sc2_max) << "\n";

  auto report_family = [&](const std::vector<BoundInput>& want,
                           const std::vector<BoundState>& got,
                           const char* ray) {
    log << "ray " << ray << ": input states at";
    if (want.empty()) log << " (none)";
    for (const auto& s : want) log << " kappa=" << g17(s.kappa);
    log << "; recovered " << got.size() << " of " << want.size() << ":";
    if (got.empty()) log << " (none)";
    for (const auto& s : got)
      log << " kappa=" << g17(s.kappa) << " b=" << g17(s.b);
    log << "\n";
  };
  report_family(d.states, scan.states, "240");
  report_family(d.hat_states, scan.hat_states, "300");
  return 0;
}

int cmd_jump_residual(const JumpResidualOptions& opt, std::ostream& log) {
  if (opt.t_points.empty())
    throw std::invalid_argument("jump-residual needs at least one t value");
  const Potential p = potential_from_file(opt.potential_path);
  log_potential(p, log);
  const BoundStateScan scan = find_bound_states(p, opt.jost, opt.scan_points);
  if (!scan.states.empty() || !scan.hat_states.empty()) {
    log << "error: discrete spectrum is nonempty (" << scan.states.size()
        << "+" << scan.hat_states.size()
        << " states); jump-residual needs a small-norm potential\n";
    return 2;
  }

  Report rep;
  const int n = static_cast<int>(opt.t_points.size());
  std::vector<JumpCheck> jc(n);
  parallel_for(n, [&](int i) {
    jc[i] = jump_check(opt.t_points[i], opt.x, p, opt.jost);
  });
  std::vector<std::string> rows(n);
  for (int i = 0; i < n; ++i) {
    const double t = opt.t_points[i];
    rep.add("t=" + g17(t) + " x=" + g17(opt.x), "jump-210", jc[i].resid210,
            1e-4);
    rep.add("t=" + g17(t) + " x=" + g17(opt.x), "jump-330", jc[i].resid330,
            1e-4);
    rows[i] = g17(t) + "," + g17(jc[i].resid210) + "," + g17(jc[i].resid330);
  }
  if (!opt.out.empty())
    write_csv(opt.out, "t,jump210_residual,jump330_residual", rows);

  BoundaryOptions bopt;
  bopt.jost = opt.jost;
  const double t0 = opt.t_points[n / 2];
  const BoundaryCheck bc = boundary_check(t0, opt.x, p, bopt);
  rep.add("boundary system at t0=" + g17(t0) + " (" +
              std::to_string(bc.zeros.size()) + " sector zeros)",
          "boundary-system", bc.residual, 5e-3);
  return rep.print(log) ? 1 : 0;
}

}  // namespace cubist
