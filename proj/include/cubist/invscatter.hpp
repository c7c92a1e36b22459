#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "cubist/gexp.hpp"
#include "cubist/quadrature.hpp"

namespace cubist {

// One discrete eigenvalue worth of inverse data.  `kappa` is the radius of
// the zero on its ray and `b` the norming constant attached to it; the
// coupling constant used internally is c = b / kappa.
struct BoundInput {
  double kappa = 0.0;
  cd b{1.0, 0.0};
};

// Everything the inverse solvers consume.  `states` sit on the 240-degree
// ray, `hat_states` on the 300-degree ray.  `reflection` samples the surviving
// reflection coefficient along the positive half line; it is only consulted
// when `has_reflection` is set, so reflectionless data can leave it empty.
struct ScatteringData {
  std::vector<BoundInput> states;
  std::vector<BoundInput> hat_states;
  std::function<cd(double)> reflection;
  bool has_reflection = false;
};

// Half-line quadrature grid shared by the Fredholm pieces.
MappedGrid inverse_grid(int nodes, const ScatteringData& data);

// Cauchy-type kernel 1 / ((t - lambda)(t + zeta1 lambda)).
cd cauchy_kernel(cd t, cd lambda);

// Inhomogeneity attached to one bound state: the combination of Cauchy
// kernels that drives its dispersive density.
Eigen::VectorXcd driver_column(const MappedGrid& g, double kappa, bool hat);

// Dense Fredholm operator M with the quadrature weights folded in; the
// densities solve (I - M) D = A.
Eigen::MatrixXcd fredholm_operator(const MappedGrid& g);

// Densities for every bound state, one column per state (plain states first,
// then hatted ones), all solved through a single factorization.
Eigen::MatrixXcd dispersive_densities(const MappedGrid& g,
                                      const ScatteringData& data);

// Weighted resolvent average W = (1/2 pi i) sum w_j D_j / (tau_j + i zeta2 k);
// this is the only piece of the soliton coefficients that needs quadrature.
cd density_average(const MappedGrid& g, const Eigen::VectorXcd& density,
                   double kappa);

// Coefficients of the one-soliton profile in closed form.  The tail is
// F(x) = a / (b E(x) + c) with E = exp(i kappa (zeta2 - 1) x) and
// a = -6 i zeta1; q follows by differentiating exactly.
struct SolitonProfile {
  double kappa = 1.0;
  cd b_coef;  // b1 / kappa
  cd c_coef;  // W - zeta2 / (2 kappa^2 (1 - zeta2))
  cd amp;     // -6 i zeta1
};

SolitonProfile closed_form_soliton(double kappa, cd b1, int nodes = 200);
cd soliton_tail(const SolitonProfile& s, double x);
cd soliton_q(const SolitonProfile& s, double x);

// Tail F(x) = integral of q over (x, infinity) reconstructed from
// reflectionless data (both reflection coefficients zero).
std::vector<cd> reflectionless_tail(const ScatteringData& data,
                                    const std::vector<double>& xs,
                                    int nodes = 200);

// Same tail for data with one surviving reflection coefficient.  Solves the
// coupled singular system on the half line at every x; with the reflection
// identically zero it collapses to the reflectionless answer up to roundoff,
// and with no data at all it returns exactly zero.
std::vector<cd> one_reflection_tail(const ScatteringData& data,
                                    const std::vector<double>& xs,
                                    int nodes = 200);

// q = -F' on a uniform grid, fourth order, one-sided at the edges.
std::vector<cd> recover_q(const std::vector<cd>& tail, double dx);

}  // namespace cubist
