#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "cubist/jost.hpp"

namespace cubist {

// First row of the transition matrix between the left and right dressed
// families: u0 = sum_k t0k v_k.  Computed from the three-term Wronskian
// against the adjoint family; x_eval moves the evaluation point, on which the
// result must not depend.
std::array<cd, 3> transition_row(cd lambda, const Potential& p,
                                 const JostOptions& opt = {},
                                 double x_eval = 0.0);
// Oracle route for the same row: collocate u0 on (v0, v1, v2) by a direct
// 3x3 solve of values and two derivatives.
std::array<cd, 3> transition_row_collocation(cd lambda, const Potential& p,
                                             const JostOptions& opt = {},
                                             double x_eval = 0.0);

// Rows at lambda, lambda zeta1, lambda zeta2 assembled into the full matrix;
// row r of the rotated parameter lands in columns shifted by r.
Eigen::Matrix3cd transition_matrix(cd lambda, const Potential& p,
                                   const JostOptions& opt = {});

// Determinant of the (v0, v1, v2) collocation frame; equals -3 sqrt(3)
// lambda^3 independently of x and of the potential.
cd fundamental_det(cd lambda, const Potential& p, const JostOptions& opt = {},
                   double x_eval = 0.0);

struct ScatteringCoefficients {
  cd r0, sc1, sc2;  // 1/t00, t01/t00, t02/t00
};
ScatteringCoefficients scattering_coefficients(cd lambda, const Potential& p,
                                               const JostOptions& opt = {});

// Algebraic consistency figures for the transition matrix at one lambda.
struct UnitarityChecks {
  double det_one;      // |det T - 1|
  double j_unitarity;  // max entry of J - T(lambda) J T(conj lambda)^H
  double power;        // two-coefficient power identity on the first row
  double cofactor;     // adjoint first entry vs 2x2 minor
};
UnitarityChecks unitarity_checks(cd lambda, const Potential& p,
                                 const JostOptions& opt = {});

// Discrete spectrum scan.  The two admissible rays of t00 zeros sit at
// arg mu = 240 and 300 degrees; kappa parametrizes |mu| in (0, a/3).
struct BoundState {
  double kappa;
  cd mu;           // location of the zero
  cd t00_prime;    // complex derivative of t00 there
  cd b;            // norming constant from the residue
  cd c;            // b / kappa
  double t00_abs;  // refined |t00| at the accepted zero
  double t01_abs, t02_abs;
};
struct BoundStateScan {
  std::vector<BoundState> states;      // arg 240 family
  std::vector<BoundState> hat_states;  // arg 300 family
  double coupling = 0;                 // diagnostic printed on every run
  double decay_rate = 0;
};
BoundStateScan find_bound_states(const Potential& p,
                                 const JostOptions& opt = {},
                                 int scan_points = 400);

// Residuals of the two single-ray matching relations at radius t on the
// corresponding rays, evaluated at position x.
struct JumpCheck {
  cd lhs210, rhs210, lhs330, rhs330;
  double resid210, resid330;
};
JumpCheck jump_check(double t, double x, const Potential& p,
                     const JostOptions& opt = {});

// Zeros of t00 inside the reflected sector (210, 330) degrees that are not on
// the two discrete-spectrum rays.  They enter the boundary representation as
// genuine pole contributions even for arbitrarily small real potentials.
std::vector<cd> find_sector_zeros(const Potential& p,
                                  const JostOptions& opt = {},
                                  double r_lo = 0.05, double r_hi = 2.0);

struct BoundaryOptions {
  int nodes = 96;        // Legendre nodes per radial window
  double tau_lo = 0.03;  // small-radius clamp, compensated by a strip term
  double tau_hi = 12.0;
  bool hunt_zeros = true;
  JostOptions jost;
};
// Full five-ray boundary representation of the adjoint solution evaluated on
// the 210 ray at radius t0 (principal value plus half-jump there), including
// pole corrections from sector zeros.  residual = |lhs - rhs|.
struct BoundaryCheck {
  cd lhs, rhs;
  double residual;
  std::vector<cd> zeros;
};
BoundaryCheck boundary_check(double t0, double x, const Potential& p,
                             const BoundaryOptions& opt = {});

}  // namespace cubist
