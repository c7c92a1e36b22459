#include "cubist/quadrature.hpp"

#include <cmath>

#include "cubist/gexp.hpp"

namespace cubist {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    // p0 = P_n(t) after the final update is stale by one Newton step; redo
    // the derivative from fresh values for the weight.
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[n - 1 - i] = t;
    x[i] = -t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

MappedGrid legendre_on_interval(int n, double a, double b) {
  auto [u, wu] = gauss_legendre(n);
  MappedGrid g;
  g.tau.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    g.tau[i] = 0.5 * (a + b) + 0.5 * (b - a) * u[i];
    g.w[i] = 0.5 * (b - a) * wu[i];
  }
  return g;
}

MappedGrid legendre_semiaxis(int n, double scale) {
  auto [u, wu] = gauss_legendre(n);
  MappedGrid g;
  g.tau.resize(n);
  g.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double d = 1.0 - u[i];
    g.tau[i] = scale * (1.0 + u[i]) / (d * d);
    g.w[i] = wu[i] * scale * (3.0 + u[i]) / (d * d * d);
  }
  return g;
}

}  // namespace cubist
