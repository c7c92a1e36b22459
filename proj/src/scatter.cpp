#include "cubist/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cubist/quadrature.hpp"
#include "cubist/threads.hpp"

namespace cubist {

namespace {

// Column pairing of the Wronskian route: t0k picks the adjoint solution of
// the complementary pair of rotation indices.
constexpr int kNmap[3] = {0, 2, 1};

Frame vstar_reduced_value(cd lambda, int m, double x, const Potential& pc,
                          const JostOptions& opt) {
  // reduced psi_m*(lambda, x) and derivatives: conj of the reduced right
  // solution at conj(lambda) zeta_m over the conjugated potential
  return conj(solve_psi(std::conj(lambda) * zeta(m), pc, opt).at(x));
}

// Exponential-free bilinear form of the pair (phi at lambda zeta_k, psi at
// lambda zeta_l): i lambda (zeta_l - zeta_k) phi psi + phi psi' - phi' psi.
cd reduced_pair(int k, int l, cd lambda, double x, const Potential& p,
                const JostOptions& opt) {
  Frame ph = solve_phi(lambda * zeta(k), p, opt).at(x);
  Frame ps = solve_psi(lambda * zeta(l), p, opt).at(x);
  return cd(0, 1) * lambda * (zeta(l) - zeta(k)) * ph.f * ps.f +
         ph.f * ps.df - ph.df * ps.f;
}

}  // namespace

std::array<cd, 3> transition_row(cd lambda, const Potential& p,
                                 const JostOptions& opt, double x_eval) {
  Frame uf = solve_phi(lambda, p, opt).dressed(x_eval);
  Potential pc = conjugate_potential(p);
  std::array<cd, 3> out;
  for (int k = 0; k < 3; ++k) {
    Frame vs = conj(
        solve_psi(std::conj(lambda) * zeta(kNmap[k]), pc, opt).dressed(x_eval));
    out[k] = -(zeta(k) / (3.0 * lambda * lambda)) * wron3(uf, vs);
  }
  return out;
}

std::array<cd, 3> transition_row_collocation(cd lambda, const Potential& p,
                                             const JostOptions& opt,
                                             double x_eval) {
  Frame uf = solve_phi(lambda, p, opt).dressed(x_eval);
  Eigen::Matrix3cd A;
  for (int m = 0; m < 3; ++m) {
    Frame V = solve_psi(lambda * zeta(m), p, opt).dressed(x_eval);
    A(0, m) = V.f;
    A(1, m) = V.df;
    A(2, m) = V.ddf;
  }
  Eigen::Vector3cd b;
  b << uf.f, uf.df, uf.ddf;
  Eigen::Vector3cd sol = A.fullPivLu().solve(b);
  return {sol(0), sol(1), sol(2)};
}

Eigen::Matrix3cd transition_matrix(cd lambda, const Potential& p,
                                   const JostOptions& opt) {
  std::array<cd, 3> r0 = transition_row(lambda, p, opt);
  std::array<cd, 3> r1 = transition_row(lambda * zeta(1), p, opt);
  std::array<cd, 3> r2 = transition_row(lambda * zeta(2), p, opt);
  Eigen::Matrix3cd T;
  for (int k = 0; k < 3; ++k) {
    T(0, k) = r0[k];
    T(1, (k + 1) % 3) = r1[k];
    T(2, (k + 2) % 3) = r2[k];
  }
  return T;
}

cd fundamental_det(cd lambda, const Potential& p, const JostOptions& opt,
                   double x_eval) {
  Eigen::Matrix3cd A;
  for (int m = 0; m < 3; ++m) {
    Frame V = solve_psi(lambda * zeta(m), p, opt).dressed(x_eval);
    A(0, m) = V.f;
    A(1, m) = V.df;
    A(2, m) = V.ddf;
  }
  return A.determinant();
}

ScatteringCoefficients scattering_coefficients(cd lambda, const Potential& p,
                                               const JostOptions& opt) {
  std::array<cd, 3> r = transition_row(lambda, p, opt);
  return {cd(1) / r[0], r[1] / r[0], r[2] / r[0]};
}

UnitarityChecks unitarity_checks(cd lambda, const Potential& p,
                                 const JostOptions& opt) {
  UnitarityChecks out;
  Eigen::Matrix3cd T = transition_matrix(lambda, p, opt);
  Eigen::Matrix3cd Tc = transition_matrix(std::conj(lambda), p, opt);
  Eigen::Matrix3cd Jm = Eigen::Matrix3cd::Zero();
  Jm(0, 0) = zeta(0);
  Jm(1, 2) = zeta(2);
  Jm(2, 1) = zeta(1);
  out.det_one = std::abs(T.determinant() - cd(1));
  out.j_unitarity = (Jm - T * Jm * Tc.adjoint()).cwiseAbs().maxCoeff();

  std::array<cd, 3> rw = transition_row(lambda, p, opt);
  std::array<cd, 3> rws = transition_row(std::conj(lambda), p, opt);
  cd r0 = cd(1) / rw[0], sc1 = rw[1] / rw[0], sc2 = rw[2] / rw[0];
  cd r0s = std::conj(cd(1) / rws[0]);
  cd sc1s = std::conj(rws[1] / rws[0]);
  cd sc2s = std::conj(rws[2] / rws[0]);
  out.power =
      std::abs(r0 * r0s - (cd(1) + zeta(1) * sc2 * sc1s + zeta(2) * sc1 * sc2s));
  out.cofactor =
      std::abs(std::conj(rws[0]) - (T(1, 1) * T(2, 2) - T(1, 2) * T(2, 1)));
  return out;
}

namespace {

// |t00| along one discrete-spectrum ray
double abs_t00_ray(double kappa, cd dir, const Potential& p,
                   const JostOptions& opt) {
  return std::abs(transition_row(kappa * dir, p, opt)[0]);
}

// golden-section minimum of g on [a, b]
double golden_min(const std::function<double(double)>& g, double a, double b,
                  double width) {
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a);
  double d = a + gr * (b - a);
  double gc = g(c), gd = g(d);
  while (b - a > width) {
    if (gc < gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - gr * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + gr * (b - a);
      gd = g(d);
    }
  }
  return 0.5 * (a + b);
}

// complex derivative of t00 along a discrete ray by central differences in
// kappa with one Richardson pass, divided back by the ray direction
cd t00_prime_ray(double kappa, cd dir, const Potential& p,
                 const JostOptions& opt) {
  auto t00 = [&](double k) { return transition_row(k * dir, p, opt)[0]; };
  double h = 1e-5 * kappa;
  cd d1 = (t00(kappa + h) - t00(kappa - h)) / (2.0 * h);
  cd d2 = (t00(kappa + 0.5 * h) - t00(kappa - 0.5 * h)) / h;
  return ((4.0 * d2 - d1) / 3.0) / dir;
}

}  // namespace

BoundStateScan find_bound_states(const Potential& p, const JostOptions& opt,
                                 int scan_points) {
  BoundStateScan scan;
  PotentialMoments m = potential_moments(p);
  scan.coupling = coupling_diagnostic(m);
  scan.decay_rate = p.decay_rate;

  double kmax = p.decay_rate / 3.0;
  double klo = 0.01 * kmax, khi = (1.0 - 1e-9) * kmax;
  for (int family = 0; family < 2; ++family) {
    cd dir = family == 0 ? zeta(2) : -zeta(1);
    std::vector<double> kg(scan_points), av(scan_points);
    for (int i = 0; i < scan_points; ++i)
      kg[i] = klo * std::pow(khi / klo, double(i) / (scan_points - 1));
    parallel_for(scan_points,
                 [&](int i) { av[i] = abs_t00_ray(kg[i], dir, p, opt); });
    for (int i = 1; i + 1 < scan_points; ++i) {
      if (!(av[i] < av[i - 1] && av[i] <= av[i + 1])) continue;
      auto g = [&](double k) { return abs_t00_ray(k, dir, p, opt); };
      double kz = golden_min(g, kg[i - 1], kg[i + 1], 1e-10);
      std::array<cd, 3> row = transition_row(kz * dir, p, opt);
      if (std::abs(row[0]) > 1e-6) continue;
      cd tp = t00_prime_ray(kz, dir, p, opt);
      if (std::abs(tp) < 1e-6)
        throw std::runtime_error(
            "find_bound_states: zero of t00 fails the simplicity floor");
      BoundState bs;
      bs.kappa = kz;
      bs.mu = kz * dir;
      bs.t00_prime = tp;
      bs.t00_abs = std::abs(row[0]);
      bs.t01_abs = std::abs(row[1]);
      bs.t02_abs = std::abs(row[2]);
      if (family == 0) {
        bs.b = -zeta(1) * tp / row[1];
        bs.c = bs.b / kz;
        scan.states.push_back(bs);
      } else {
        bs.b = -zeta(2) * tp / row[2];
        bs.c = bs.b / kz;
        scan.hat_states.push_back(bs);
      }
    }
  }
  return scan;
}

JumpCheck jump_check(double t, double x, const Potential& p,
                     const JostOptions& opt) {
  JumpCheck out;
  Potential pc = conjugate_potential(p);

  // arg 210 ray: the adjoint index-2 solution continues across through
  // r0 f02 plus the reflection factor times the adjoint index-0 solution
  {
    cd lam = cd(0, 1) * zeta(1) * t;
    std::array<cd, 3> rw = transition_row(lam, p, opt);
    cd r0 = cd(1) / rw[0], sc1 = rw[1] / rw[0];
    cd f02 = -(zeta(2) / (kSqrt3 * lam)) * reduced_pair(0, 2, lam, x, p, opt);
    cd s1 = zeta(2) * std::exp(cd(0, 1) * lam * (zeta(1) - cd(1)) * x) * sc1;
    out.lhs210 = vstar_reduced_value(lam, 2, x, pc, opt).f;
    cd p0s = vstar_reduced_value(lam, 0, x, pc, opt).f;
    out.rhs210 = r0 * f02 + s1 * p0s;
    out.resid210 = std::abs(out.lhs210 - out.rhs210);
  }

  // arg 330 ray, mirror relation through f01
  {
    cd lam = cd(0, 1) * zeta(2) * t;
    std::array<cd, 3> rw = transition_row(lam, p, opt);
    cd r0 = cd(1) / rw[0], sc2 = rw[2] / rw[0];
    cd f01 = (zeta(1) / (kSqrt3 * lam)) * reduced_pair(0, 1, lam, x, p, opt);
    cd s2 = zeta(1) * std::exp(cd(0, 1) * lam * (zeta(2) - cd(1)) * x) * sc2;
    out.lhs330 = vstar_reduced_value(lam, 1, x, pc, opt).f;
    cd p0s = vstar_reduced_value(lam, 0, x, pc, opt).f;
    out.rhs330 = r0 * f01 + s2 * p0s;
    out.resid330 = std::abs(out.lhs330 - out.rhs330);
  }
  return out;
}

std::vector<cd> find_sector_zeros(const Potential& p, const JostOptions& opt,
                                  double r_lo, double r_hi) {
  auto t00 = [&](cd mu) { return transition_row(mu, p, opt)[0]; };
  const int nth = 20, nr = 10;
  std::vector<cd> grid(nth * nr);
  std::vector<double> val(nth * nr);
  for (int a = 0; a < nth; ++a) {
    double th = (213.0 + 6.0 * a) * kPi / 180.0;
    for (int b = 0; b < nr; ++b) {
      double r = r_lo * std::pow(r_hi / r_lo, double(b) / (nr - 1));
      grid[a * nr + b] = std::polar(r, th);
    }
  }
  parallel_for(nth * nr, [&](int i) { val[i] = std::abs(t00(grid[i])); });

  std::vector<cd> zeros;
  for (int a = 0; a < nth; ++a)
    for (int b = 0; b < nr; ++b) {
      double v = val[a * nr + b];
      if (v > 0.75) continue;
      auto at = [&](int aa, int bb) {
        if (aa < 0 || aa >= nth || bb < 0 || bb >= nr) return 1e30;
        return val[aa * nr + bb];
      };
      if (v > at(a - 1, b) || v > at(a + 1, b) || v > at(a, b - 1) ||
          v > at(a, b + 1))
        continue;
      cd mu = grid[a * nr + b];
      cd fv = t00(mu);
      bool ok = false;
      for (int it = 0; it < 25; ++it) {
        double d = 1e-4 * std::abs(mu);
        cd der = (t00(mu + d) - t00(mu - d)) / (2.0 * d);
        if (std::abs(der) < 1e-12) break;
        mu -= fv / der;
        fv = t00(mu);
        if (std::abs(fv) < 1e-10) {
          ok = true;
          break;
        }
      }
      if (!ok) continue;
      double deg = std::arg(mu) * 180.0 / kPi;
      if (deg < 0) deg += 360.0;
      if (deg < 210.2 || deg > 329.8) continue;
      // on-ray zeros belong to the discrete families, not here
      if (std::abs(deg - 240.0) < 0.5 || std::abs(deg - 300.0) < 0.5) continue;
      double r = std::abs(mu);
      if (r < 0.5 * r_lo || r > 1.2 * r_hi) continue;
      bool dup = false;
      for (cd z0 : zeros)
        if (std::abs(z0 - mu) < 1e-6 * (1.0 + std::abs(mu))) dup = true;
      if (!dup) zeros.push_back(mu);
    }
  std::sort(zeros.begin(), zeros.end(), [](cd a, cd b) {
    return std::arg(a) != std::arg(b) ? std::arg(a) < std::arg(b)
                                      : std::abs(a) < std::abs(b);
  });
  return zeros;
}

BoundaryCheck boundary_check(double t0, double x, const Potential& p,
                             const BoundaryOptions& opt) {
  if (t0 <= opt.tau_lo || t0 >= opt.tau_hi)
    throw std::invalid_argument("boundary_check: t0 outside the radial window");
  Potential pc = conjugate_potential(p);
  const JostOptions& jo = opt.jost;
  MappedGrid g = legendre_on_interval(opt.nodes, opt.tau_lo, opt.tau_hi);
  int N = opt.nodes;

  // per-node ray data
  std::vector<cd> S1(N), S2(N), P1(N), P2(N), G(N);
  parallel_for(N, [&](int j) {
    double tau = g.tau[j];
    std::array<cd, 3> r1 = transition_row(cd(0, 1) * zeta(1) * tau, p, jo);
    std::array<cd, 3> r2 = transition_row(cd(0, 1) * zeta(2) * tau, p, jo);
    std::array<cd, 3> r0 = transition_row(cd(0, -1) * tau, p, jo);
    S1[j] = r1[1] / r1[0];
    S2[j] = r2[2] / r2[0];
    P1[j] = std::conj(solve_psi(cd(0, -1) * tau * zeta(1), pc, jo).at(x).f);
    P2[j] = std::conj(solve_psi(cd(0, -1) * tau * zeta(2), pc, jo).at(x).f);
    cd lam = cd(0, -1) * tau;
    cd f01 = (zeta(1) / (kSqrt3 * lam)) * reduced_pair(0, 1, lam, x, p, jo);
    cd f02 = -(zeta(2) / (kSqrt3 * lam)) * reduced_pair(0, 2, lam, x, p, jo);
    G[j] = (cd(1) / r0[0]) * (f01 - f02);
  });

  auto S1x = [&](int j) {
    return zeta(2) * std::exp(cd(0, kSqrt3) * g.tau[j] * x) * S1[j];
  };
  auto S2x = [&](int j) {
    return zeta(1) * std::exp(cd(0, -kSqrt3) * g.tau[j] * x) * S2[j];
  };

  const cd I2PI = cd(1) / (cd(0, 2.0 * kPi));
  cd lam0 = cd(0, 1) * zeta(1) * t0;
  cd tot(1);

  struct Ray {
    double deg;
    int id;  // 0: -S1x P2, 1: +S2x P1, 2: composite, 3: G
  };
  const Ray rays[5] = {{330, 0}, {210, 1}, {90, 2}, {30, 3}, {150, 3}};
  auto ray_value = [&](int id, int j) -> cd {
    switch (id) {
      case 0: return -S1x(j) * P2[j];
      case 1: return S2x(j) * P1[j];
      case 2:
        return -((S1x(j) + cd(1)) * P2[j] - (S2x(j) + cd(1)) * P1[j]);
      default: return G[j];
    }
  };

  for (const Ray& ray : rays) {
    cd e = std::polar(1.0, ray.deg * kPi / 180.0);
    if (ray.id == 1) {
      // evaluation point sits on this ray: principal value plus half jump
      std::array<cd, 3> rt = transition_row(cd(0, 1) * zeta(2) * t0, p, jo);
      cd S2t = zeta(1) * std::exp(cd(0, -kSqrt3) * t0 * x) * (rt[2] / rt[0]);
      cd P1t = std::conj(solve_psi(cd(0, -1) * t0 * zeta(1), pc, jo).at(x).f);
      cd J0 = S2t * P1t;
      cd pv(0);
      for (int j = 0; j < N; ++j)
        pv += g.w[j] * (ray_value(ray.id, j) - J0) / (g.tau[j] - t0);
      pv += J0 * std::log((opt.tau_hi - t0) / (t0 - opt.tau_lo));
      tot += I2PI * pv + 0.5 * J0;
    } else {
      for (int j = 0; j < N; ++j)
        tot += I2PI * g.w[j] * ray_value(ray.id, j) * e / (g.tau[j] * e - lam0);
    }
    // small-radius strip below tau_lo, one-point correction
    tot += I2PI * opt.tau_lo * ray_value(ray.id, 0) * e /
           (0.5 * opt.tau_lo * e - lam0);
  }

  BoundaryCheck out;
  if (opt.hunt_zeros) out.zeros = find_sector_zeros(p, jo);
  for (cd mu : out.zeros) {
    cd lamA = mu * zeta(1);
    auto t00 = [&](cd m) { return transition_row(m, p, jo)[0]; };
    double d = 1e-4 * std::abs(mu);
    cd tp = (t00(mu + d) - t00(mu - d)) / (2.0 * d);
    cd RA = zeta(1) * (-1.0 / (kSqrt3 * lamA)) *
            reduced_pair(2, 1, lamA, x, p, jo) / tp;
    tot -= RA * (cd(1) / (mu * zeta(1) - lam0) + zeta(1) / (mu * zeta(2) - lam0));
  }

  out.lhs = std::conj(solve_psi(cd(0, -1) * t0 * zeta(2), pc, jo).at(x).f);
  out.rhs = tot;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace cubist
