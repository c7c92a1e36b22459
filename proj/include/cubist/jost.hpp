#pragma once

#include <vector>

#include "cubist/potential.hpp"

namespace cubist {

struct JostOptions {
  int panels = 2000;          // Simpson panels across [-X, X]
  double tol = 1e-12;         // sup-norm change that stops the sweep loop
  double tail_eps = 1e-14;    // tail threshold used to choose X
  double x_cut_max = 12.0;    // hard cap on the window half width
  double x_cut_override = 0;  // force the half width when positive
};

struct Frame {
  cd f, df, ddf;
};
Frame conj(const Frame& fr);

// Reduced dressed solution at one spectral parameter mu.  For the right
// family, v0(mu, x) = exp(i mu x) psi(x) with psi -> 1 at +infinity; for the
// left family u0(mu, x) = exp(i mu x) phi(x) with phi -> 1 at -infinity.
// The struct stores the reduced function and its two derivatives on the grid.
struct JostSolution {
  cd mu = 0;
  bool right = true;
  double x_lo = 0, x_hi = 0, h = 0;
  std::vector<double> x;
  std::vector<cd> f, df, ddf;
  int sweeps = 0;
  double tail_bound = 0;  // sup-norm change of the final substitution sweep

  Frame at_index(int i) const { return {f[i], df[i], ddf[i]}; }
  // Cubic interpolation when xq is off the grid; exact at nodes.
  Frame at(double xq) const;
  // Full (unreduced) frame: value and derivatives of exp(i mu x) * reduced.
  Frame dressed(double xq) const;
};

double choose_x_cut(const Potential& p, cd mu, bool right,
                    const JostOptions& opt);

// Number of Picard sweeps after which the iteration tail is provably below
// 1e-15, clamped to [4, 60].  sigma is the L1 size of the potential and span
// the window width; the estimate follows the factorial Volterra bound.
int picard_cap(cd mu, double span, double sigma);

JostSolution solve_psi(cd mu, const Potential& p, const JostOptions& opt = {});
JostSolution solve_phi(cd mu, const Potential& p, const JostOptions& opt = {});

// Full solutions of the dressed equation: v_k(lambda, .) decays like
// exp(i lambda zeta_k x) to the right, u_k to the left.  One code path: the
// rotation index only rotates the reduced spectral parameter.
Frame v_frame(int k, cd lambda, double xq, const Potential& p,
              const JostOptions& opt = {});
Frame u_frame(int k, cd lambda, double xq, const Potential& p,
              const JostOptions& opt = {});
// Adjoint family v*_m(lambda, x) = conj(v_m(conj lambda, x)) computed over the
// conjugated potential, so it works for complex q as well.
Frame vstar_frame(int m, cd lambda, double xq, const Potential& p,
                  const JostOptions& opt = {});

// Wronskian forms.
cd wron3(const Frame& a, const Frame& b);  // f g'' - f' g' + f'' g
cd wron2(const Frame& a, const Frame& b);  // f g' - f' g

// Large |lambda| behaviour of psi on the imaginary axis: the first order term
// is (i / 3 lambda^2) int_x^inf q, and the report compares the computed
// remainder against the a priori bound r^2/(1-r) + |lambda|^{-2} q2 delta.
struct AsymptoticCheck {
  cd scaled;     // 3 i omega^2 (psi - 1)
  cd tail;       // int_x^inf q
  double rel_err;
  double bound;  // a priori remainder bound, infinite outside the regime
};
AsymptoticCheck asymptotic_check(double omega, double xq, const Potential& p,
                                 const JostOptions& opt = {});

}  // namespace cubist
