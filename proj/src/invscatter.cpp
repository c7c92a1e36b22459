#include "cubist/invscatter.hpp"

#include <cmath>
#include <stdexcept>

#include "cubist/threads.hpp"

namespace cubist {

namespace {

constexpr cd kI{0.0, 1.0};

// 1 / (2 pi i)
const cd kI2Pi = cd{0.0, -1.0} / (2.0 * kPi);

double max_kappa(const ScatteringData& data) {
  double km = 0.0;
  for (const auto& s : data.states) km = std::max(km, s.kappa);
  for (const auto& s : data.hat_states) km = std::max(km, s.kappa);
  return km;
}

// Exponential carried by a bound state at position x.  Both families grow
// towards +infinity, which is what pushes the tail to zero there.
cd plain_exp(double kappa, double x) {
  return std::exp(kI * kappa * (zeta(2) - 1.0) * x);
}

cd hat_exp(double kappa, double x) {
  return std::exp(-kI * kappa * (zeta(1) - 1.0) * x);
}

// Rational coupling between two bound states in the closure equations.
cd rational_bracket(double k_target, bool target_hat, double k_src,
                    bool src_hat) {
  const cd z1 = zeta(1), z2 = zeta(2);
  if (!target_hat && !src_hat)
    return z2 / ((k_src - k_target * z2) * (k_src + k_target));
  if (!target_hat && src_hat)
    return -z1 / ((k_src + k_target * z2) * (k_src - k_target * z1));
  if (target_hat && !src_hat)
    return z2 / ((k_src + k_target * z1) * (k_src - k_target * z2));
  return z1 / ((k_src - k_target * z1) * (k_src + k_target));
}

// Dispersive coupling: the half-line integral of a density pair against the
// Cauchy kernels seen from one bound state.  The reflectionless solver feeds
// phi1 = 0 and phi2 = D, the one-reflection solver its full column pair.
cd integral_bracket(const MappedGrid& g, const Eigen::VectorXcd& phi1,
                    const Eigen::VectorXcd& phi2, double k_target,
                    bool target_hat) {
  const cd z1 = zeta(1), z2 = zeta(2);
  const int n = static_cast<int>(g.tau.size());
  cd acc = 0.0;
  if (!target_hat) {
    const cd coef = (1.0 - z2) * kI * k_target;
    const cd p1 = kI * z2 * k_target;  // pole at -i zeta2 k
    const cd p2 = kI * k_target;
    for (int j = 0; j < n; ++j) {
      const double t = g.tau[j];
      acc += g.w[j] *
             (phi1[j] * coef / ((t + p1) * (t + p2)) - phi2[j] / (t + p1));
    }
  } else {
    const cd coef = (z1 - z2) * kI * k_target;
    const cd p1 = kI * z1 * k_target;
    const cd p2 = kI * z2 * k_target;
    for (int j = 0; j < n; ++j) {
      const double t = g.tau[j];
      acc += g.w[j] *
             (phi1[j] * coef / ((t - p1) * (t - p2)) - phi2[j] / (t - p1));
    }
  }
  return kI2Pi * acc;
}

}  // namespace

MappedGrid inverse_grid(int nodes, const ScatteringData& data) {
  const double km = std::max(1.0, max_kappa(data));
  return legendre_semiaxis(nodes, 2.0 * km);
}

cd cauchy_kernel(cd t, cd lambda) {
  return 1.0 / ((t - lambda) * (t + zeta(1) * lambda));
}

Eigen::VectorXcd driver_column(const MappedGrid& g, double kappa, bool hat) {
  const int n = static_cast<int>(g.tau.size());
  const cd z1 = zeta(1), z2 = zeta(2);
  Eigen::VectorXcd a(n);
  for (int i = 0; i < n; ++i) {
    const cd t = g.tau[i];
    if (!hat)
      a[i] = z2 * cauchy_kernel(t, kI * z1 * kappa) -
             cauchy_kernel(t, kI * kappa);
    else
      a[i] = z1 * cauchy_kernel(t, kI * z1 * kappa) -
             cauchy_kernel(t, kI * z2 * kappa);
  }
  return a;
}

Eigen::MatrixXcd fredholm_operator(const MappedGrid& g) {
  const int n = static_cast<int>(g.tau.size());
  const double c = -kSqrt3 / (2.0 * kPi);
  Eigen::MatrixXcd m(n, n);
  for (int i = 0; i < n; ++i) {
    const double t = g.tau[i];
    for (int j = 0; j < n; ++j) {
      const double tau = g.tau[j];
      m(i, j) = c * t * g.w[j] / (tau * tau + t * tau + t * t);
    }
  }
  return m;
}

Eigen::MatrixXcd dispersive_densities(const MappedGrid& g,
                                      const ScatteringData& data) {
  const int n = static_cast<int>(g.tau.size());
  const int m = static_cast<int>(data.states.size());
  const int mh = static_cast<int>(data.hat_states.size());
  Eigen::MatrixXcd rhs(n, m + mh);
  for (int l = 0; l < m; ++l)
    rhs.col(l) = driver_column(g, data.states[l].kappa, false);
  for (int s = 0; s < mh; ++s)
    rhs.col(m + s) = driver_column(g, data.hat_states[s].kappa, true);
  if (m + mh == 0) return rhs;
  Eigen::MatrixXcd lhs =
      Eigen::MatrixXcd::Identity(n, n) - fredholm_operator(g);
  return lhs.partialPivLu().solve(rhs);
}

cd density_average(const MappedGrid& g, const Eigen::VectorXcd& density,
                   double kappa) {
  const int n = static_cast<int>(g.tau.size());
  const cd pole = kI * zeta(2) * kappa;
  cd acc = 0.0;
  for (int j = 0; j < n; ++j) acc += g.w[j] * density[j] / (g.tau[j] + pole);
  return kI2Pi * acc;
}

SolitonProfile closed_form_soliton(double kappa, cd b1, int nodes) {
  if (kappa <= 0.0) throw std::invalid_argument("soliton kappa must be > 0");
  ScatteringData data;
  data.states.push_back({kappa, b1});
  const MappedGrid g = inverse_grid(nodes, data);
  const Eigen::VectorXcd d = dispersive_densities(g, data).col(0);
  const cd w = density_average(g, d, kappa);
  SolitonProfile s;
  s.kappa = kappa;
  s.b_coef = b1 / kappa;
  s.c_coef = w - zeta(2) / (2.0 * kappa * kappa * (1.0 - zeta(2)));
  s.amp = -6.0 * kI * zeta(1);
  return s;
}

cd soliton_tail(const SolitonProfile& s, double x) {
  const cd e = plain_exp(s.kappa, x);
  return s.amp / (s.b_coef * e + s.c_coef);
}

cd soliton_q(const SolitonProfile& s, double x) {
  const cd e = plain_exp(s.kappa, x);
  const cd den = s.b_coef * e + s.c_coef;
  return s.amp * s.b_coef * kI * s.kappa * (zeta(2) - 1.0) * e / (den * den);
}

std::vector<cd> reflectionless_tail(const ScatteringData& data,
                                    const std::vector<double>& xs,
                                    int nodes) {
  const int m = static_cast<int>(data.states.size());
  const int mh = static_cast<int>(data.hat_states.size());
  const int mm = m + mh;
  std::vector<cd> tail(xs.size(), cd(0.0, 0.0));
  if (mm == 0) return tail;

  const MappedGrid g = inverse_grid(nodes, data);
  const Eigen::MatrixXcd dens = dispersive_densities(g, data);
  const Eigen::VectorXcd none = Eigen::VectorXcd::Zero(g.tau.size());

  auto kap = [&](int s) {
    return s < m ? data.states[s].kappa : data.hat_states[s - m].kappa;
  };
  auto is_hat = [&](int s) { return s >= m; };
  auto coupling = [&](int s) {
    return s < m ? data.states[s].b / data.states[s].kappa
                 : data.hat_states[s - m].b / data.hat_states[s - m].kappa;
  };

  Eigen::MatrixXcd bracket(mm, mm);
  for (int t = 0; t < mm; ++t)
    for (int s = 0; s < mm; ++s)
      bracket(t, s) =
          rational_bracket(kap(t), is_hat(t), kap(s), is_hat(s)) +
          integral_bracket(g, none, dens.col(s), kap(t), is_hat(t));

  const cd z1 = zeta(1), z2 = zeta(2);
  parallel_for(xs.size(), [&](std::size_t ix) {
    const double x = xs[ix];
    Eigen::MatrixXcd sys = -bracket;
    for (int t = 0; t < mm; ++t)
      sys(t, t) += coupling(t) * (is_hat(t) ? hat_exp(kap(t), x)
                                            : plain_exp(kap(t), x));
    const Eigen::VectorXcd rho =
        sys.partialPivLu().solve(Eigen::VectorXcd::Ones(mm));
    cd f = 0.0;
    for (int s = 0; s < m; ++s) f += rho[s] * (-2.0 * z1);
    for (int s = m; s < mm; ++s) f += rho[s] * (2.0 * z2);
    tail[ix] = 3.0 * kI * f;
  });
  return tail;
}

std::vector<cd> one_reflection_tail(const ScatteringData& data,
                                    const std::vector<double>& xs,
                                    int nodes) {
  const int m = static_cast<int>(data.states.size());
  const int mh = static_cast<int>(data.hat_states.size());
  const int mm = m + mh;
  std::vector<cd> tail(xs.size(), cd(0.0, 0.0));
  if (mm == 0 && !data.has_reflection) return tail;
  if (data.has_reflection && !data.reflection)
    throw std::invalid_argument("reflection data flagged but no sampler set");

  const MappedGrid g = inverse_grid(nodes, data);
  const int n = static_cast<int>(g.tau.size());
  const cd z1 = zeta(1), z2 = zeta(2);

  // Structure blocks of the singular system, x-independent.  The second
  // diagonal block is exactly the reflectionless operator; the off-diagonal
  // principal-value part is regularized by subtracting the closed-form
  // half-line integral i pi / (3 t (1 - zeta2)) on the diagonal.
  const Eigen::MatrixXcd mker = fredholm_operator(g);
  Eigen::MatrixXcd b12(n, n), b21(n, n);
  for (int i = 0; i < n; ++i) {
    const double t = g.tau[i];
    cd pv_diag = kI * kPi / (3.0 * t * (1.0 - z2));
    for (int j = 0; j < n; ++j) {
      b12(i, j) = -kI2Pi * g.w[j] / (g.tau[j] - z1 * t);
      if (j != i) {
        const cd b2 = 1.0 / ((g.tau[j] - t) * (g.tau[j] - z2 * t));
        b21(i, j) = -mker(i, j) + kI2Pi * (1.0 - z2) * t * g.w[j] * b2;
        pv_diag -= g.w[j] * b2;
      }
    }
    b21(i, i) = -mker(i, i) + kI2Pi * (1.0 - z2) * t * pv_diag;
  }

  std::vector<cd> sc1(n, cd(0.0, 0.0));
  if (data.has_reflection)
    for (int j = 0; j < n; ++j) sc1[j] = data.reflection(g.tau[j]);

  // Driver data per bound state: first and second component of the
  // inhomogeneity column, plus the reflectionless densities used both for
  // the recovery subtraction and as the degenerate limit.
  const Eigen::MatrixXcd dens = dispersive_densities(g, data);
  Eigen::MatrixXcd top(n, mm), bot(n, mm);
  auto kap = [&](int s) {
    return s < m ? data.states[s].kappa : data.hat_states[s - m].kappa;
  };
  auto is_hat = [&](int s) { return s >= m; };
  auto coupling = [&](int s) {
    return s < m ? data.states[s].b / data.states[s].kappa
                 : data.hat_states[s - m].b / data.hat_states[s - m].kappa;
  };
  for (int s = 0; s < mm; ++s) {
    const double k = kap(s);
    for (int i = 0; i < n; ++i) {
      const cd t = g.tau[i];
      top(i, s) = is_hat(s) ? -cauchy_kernel(t, kI * z2 * k)
                            : z2 * cauchy_kernel(t, kI * z1 * k);
    }
    bot.col(s) = driver_column(g, k, is_hat(s));
  }

  parallel_for(xs.size(), [&](std::size_t ix) {
    const double x = xs[ix];
    std::vector<cd> s1x(n);
    for (int i = 0; i < n; ++i)
      s1x[i] = z2 * std::exp(kI * kSqrt3 * g.tau[i] * x) * sc1[i];

    Eigen::MatrixXcd sys = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        sys(i, j) = s1x[i] * mker(i, j);
        sys(i, n + j) = -s1x[i] * b12(i, j);
        sys(n + i, j) = -0.5 * s1x[i] * mker(i, j) - b21(i, j);
        sys(n + i, n + j) = 0.5 * s1x[i] * b12(i, j) - mker(i, j);
      }
      sys(i, i) += 1.0;
      sys(n + i, n + i) += 1.0;
    }

    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(2 * n, 1 + mm);
    for (int i = 0; i < n; ++i) {
      rhs(i, 0) = s1x[i];
      rhs(n + i, 0) = -0.5 * s1x[i];
      for (int s = 0; s < mm; ++s) {
        rhs(i, 1 + s) = s1x[i] * top(i, s);
        rhs(n + i, 1 + s) = -0.5 * s1x[i] * top(i, s) + bot(i, s);
      }
    }
    const Eigen::MatrixXcd phi = sys.partialPivLu().solve(rhs);

    // Closure system for the norming weights.
    Eigen::VectorXcd rho(mm);
    if (mm > 0) {
      Eigen::MatrixXcd closure(mm, mm);
      Eigen::VectorXcd rv(mm);
      for (int t = 0; t < mm; ++t) {
        rv[t] = 1.0 + integral_bracket(g, phi.col(0).head(n),
                                       phi.col(0).tail(n), kap(t), is_hat(t));
        for (int s = 0; s < mm; ++s) {
          closure(t, s) =
              -rational_bracket(kap(t), is_hat(t), kap(s), is_hat(s)) -
              integral_bracket(g, phi.col(1 + s).head(n),
                               phi.col(1 + s).tail(n), kap(t), is_hat(t));
        }
        closure(t, t) += coupling(t) * (is_hat(t) ? hat_exp(kap(t), x)
                                                  : plain_exp(kap(t), x));
      }
      rho = closure.partialPivLu().solve(rv);
    }

    Eigen::VectorXcd phi_tot = phi.col(0);
    for (int s = 0; s < mm; ++s) phi_tot += rho[s] * phi.col(1 + s);

    // Continuous part of the recovery, with the reflectionless densities
    // subtracted; their divergent tails are already accounted for by the
    // closed-form weights -2 zeta1 and +2 zeta2 below.
    cd cont = 0.0;
    for (int j = 0; j < n; ++j) {
      cd disc2 = 0.0;
      for (int s = 0; s < mm; ++s) disc2 += rho[s] * dens(j, s);
      cont += g.w[j] * ((z1 - 1.0) * phi_tot[j] - (phi_tot[n + j] - disc2));
    }
    cont *= kI2Pi;

    cd f = cont;
    for (int s = 0; s < m; ++s) f += rho[s] * (-2.0 * z1);
    for (int s = m; s < mm; ++s) f += rho[s] * (2.0 * z2);
    tail[ix] = 3.0 * kI * f;
  });
  return tail;
}

std::vector<cd> recover_q(const std::vector<cd>& tail, double dx) {
  const int n = static_cast<int>(tail.size());
  if (n < 5) throw std::invalid_argument("need at least five tail samples");
  std::vector<cd> q(n);
  const double s = 1.0 / (12.0 * dx);
  auto d = [&](int i) { return tail[i]; };
  q[0] = -s * (-25.0 * d(0) + 48.0 * d(1) - 36.0 * d(2) + 16.0 * d(3) -
               3.0 * d(4));
  q[1] = -s * (-3.0 * d(0) - 10.0 * d(1) + 18.0 * d(2) - 6.0 * d(3) + d(4));
  for (int i = 2; i < n - 2; ++i)
    q[i] = -s * (d(i - 2) - 8.0 * d(i - 1) + 8.0 * d(i + 1) - d(i + 2));
  q[n - 2] = -s * (3.0 * d(n - 1) + 10.0 * d(n - 2) - 18.0 * d(n - 3) +
                   6.0 * d(n - 4) - d(n - 5));
  q[n - 1] = -s * (25.0 * d(n - 1) - 48.0 * d(n - 2) + 36.0 * d(n - 3) -
                   16.0 * d(n - 4) + 3.0 * d(n - 5));
  return q;
}

}  // namespace cubist
