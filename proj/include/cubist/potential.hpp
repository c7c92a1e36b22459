#pragma once

#include <functional>
#include <string>

#include "cubist/gexp.hpp"

namespace cubist {

// A potential together with the exponential weight rate it is declared to
// satisfy: integral of |q|^2 exp(2 a |x|) must be finite.  The rate bounds the
// disk |lambda| < a/3 where real-axis evaluation of the dressed solutions is
// well conditioned, and the interval (0, a/3) scanned for discrete data.
struct Potential {
  std::function<cd(double)> q;
  double decay_rate = 3.0;
  bool is_real = true;
  std::string name = "custom";
};

Potential zero_potential();
Potential gaussian_potential(double q0, double width = 1.0,
                             double decay_rate = 3.0);
// Smooth compactly supported bump q0 * exp(-width^2/(width^2 - x^2)) on
// |x| < width, zero outside.
Potential bump_potential(double q0, double width = 1.0);
// q0 * exp(-rate |x|); only decay rates strictly below rate are admissible,
// so the constructor declares 0.9 * rate.
Potential two_sided_exp_potential(double q0, double rate);
Potential conjugate_potential(const Potential& p);

struct PotentialMoments {
  double l1;        // integral of |q|
  double l2;        // sqrt of integral of |q|^2
  double weighted;  // sqrt of integral of |q|^2 exp(2 a |x|)
  double sup;       // max |q| over the sampled window
};
PotentialMoments potential_moments(const Potential& p, double window = 12.0,
                                   int panels = 6000);

// integral of q over (x, infinity), truncated where the declared decay makes
// the tail negligible.
cd potential_tail(const Potential& p, double x, double window = 12.0,
                  int panels = 4000);

// Coupling figure 3 * max(2 sqrt(l1), 2 sqrt(l2), 9) reported next to the
// declared decay rate on every forward run, so a reader can tell at a glance
// how deep inside the small-norm regime a given potential sits.
double coupling_diagnostic(const PotentialMoments& m);

}  // namespace cubist
