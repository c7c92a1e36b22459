#include "cubist/potential.hpp"

#include <algorithm>
#include <cmath>

namespace cubist {

Potential zero_potential() {
  Potential p;
  p.q = [](double) { return cd(0); };
  p.decay_rate = 3.0;
  p.name = "zero";
  return p;
}

Potential gaussian_potential(double q0, double width, double decay_rate) {
  Potential p;
  p.q = [q0, width](double x) { return cd(q0 * std::exp(-x * x / (width * width))); };
  p.decay_rate = decay_rate;
  p.name = "gaussian";
  return p;
}

Potential bump_potential(double q0, double width) {
  Potential p;
  p.q = [q0, width](double x) {
    if (std::abs(x) >= width) return cd(0);
    double u = x / width;
    return cd(q0 * std::exp(-1.0 / (1.0 - u * u)) * std::exp(1.0));
  };
  p.decay_rate = 3.0;  // compact support, any rate is admissible
  p.name = "bump";
  return p;
}

Potential two_sided_exp_potential(double q0, double rate) {
  Potential p;
  p.q = [q0, rate](double x) { return cd(q0 * std::exp(-rate * std::abs(x))); };
  // at a = rate the weighted square integral is exactly borderline; declare
  // a strictly smaller rate so the admissibility integral converges
  p.decay_rate = 0.9 * rate;
  p.name = "two-sided-exp";
  return p;
}

Potential conjugate_potential(const Potential& src) {
  Potential p = src;
  auto q = src.q;
  p.q = [q](double x) { return std::conj(q(x)); };
  return p;
}

PotentialMoments potential_moments(const Potential& p, double window,
                                   int panels) {
  if (panels % 2) ++panels;
  double h = 2.0 * window / panels;
  double l1 = 0, l2 = 0, w2 = 0, sup = 0;
  double a = p.decay_rate;
  for (int j = 0; j <= panels; ++j) {
    double x = -window + j * h;
    double wgt = (j == 0 || j == panels) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    double aq = std::abs(p.q(x));
    sup = std::max(sup, aq);
    l1 += wgt * aq;
    l2 += wgt * aq * aq;
    w2 += wgt * aq * aq * std::exp(2.0 * a * std::abs(x));
  }
  PotentialMoments m;
  m.l1 = l1 * h / 3.0;
  m.l2 = std::sqrt(l2 * h / 3.0);
  m.weighted = std::sqrt(w2 * h / 3.0);
  m.sup = sup;
  return m;
}

cd potential_tail(const Potential& p, double x, double window, int panels) {
  if (x >= window) return cd(0);
  if (panels % 2) ++panels;
  double h = (window - x) / panels;
  cd acc(0);
  for (int j = 0; j <= panels; ++j) {
    double wgt = (j == 0 || j == panels) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += wgt * p.q(x + j * h);
  }
  return acc * h / 3.0;
}

double coupling_diagnostic(const PotentialMoments& m) {
  return 3.0 * std::max({2.0 * std::sqrt(m.l1), 2.0 * std::sqrt(m.l2), 9.0});
}

}  // namespace cubist
