#pragma once

#include <array>
#include <complex>
#include <functional>

namespace cubist {

using cd = std::complex<double>;

inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kPi = 3.14159265358979323846;

// Cube roots of unity. zeta(1) = exp(2*pi*i/3), zeta(2) = conj(zeta(1)).
inline cd zeta(int k) {
  static const std::array<cd, 3> z = {cd(1.0, 0.0), cd(-0.5, kSqrt3 / 2.0),
                                      cd(-0.5, -kSqrt3 / 2.0)};
  return z[((k % 3) + 3) % 3];
}

// Largest |z| accepted by gen_exp before exp(zeta_k z) risks overflow.
inline constexpr double kGenExpZMax = 200.0;

struct GenExp {
  cd s0, s1, s2;
  cd operator[](int p) const {
    p = ((p % 3) + 3) % 3;
    return p == 0 ? s0 : (p == 1 ? s1 : s2);
  }
};

// Generalized exponentials: the entire solutions of y''' = y singled out by
// s_p^(j)(0) = delta_{pj}.  Equivalently s_p(z) = (1/3) sum_k zeta_k^{-p} exp(zeta_k z),
// or the lacunary series sum_k z^(3k+p) / (3k+p)!.
// Direct summation of the exponentials loses accuracy for small |z| where the
// three terms cancel to O(z^p), so below |z| = 0.01 the series is used instead.
GenExp gen_exp(cd z);

// s1(d*x)/d and s2(d*x)/d^2, with the d -> 0 limits x and x^2/2.  These are
// the renormalized kernels of the third order Cauchy problem.
cd s1_ratio(cd d, double x);
cd s2_ratio(cd d, double x);

// Residuals of the algebraic relations satisfied by s_p, evaluated at a given
// (z, w) pair.  Derivatives are taken by a 32-point contour rule so the
// derivative and initial-data families are checked by an independent route.
struct IdentityResiduals {
  double derivative_shift;  // s_p' = s_{p+2 mod 3}
  double conjugation;       // conj(s_p(z)) = s_p(conj z)
  double p_evenness;        // s_p(zeta_1 z) = zeta_1^p s_p(z), same for zeta_2
  double euler;             // exp(zeta_k z) = s0 + zeta_k s1 + zeta_k^2 s2
  double initial_data;      // s_p^(j)(0) = delta_{pj}
  double main_identity;     // s0^3 + s1^3 + s2^3 - 3 s0 s1 s2 = 1
  double addition;          // s_p(z + w) convolution rule
  double product;           // 3 s_p(z) s_q(w) = sum_m zeta_m^{-q} s_{p+q}(z + zeta_m w)
  double squaring;          // 3 s_p(z)^2 in terms of s at 2z and -z
  double reflection;        // s_p(-z) as 2x2 minors of the s-matrix
  double taylor;            // partial sums of the lacunary series
  double max_abs() const;
};
// Each residual is |lhs - rhs| / max(1, largest participating term).  The
// scaling matters: at |z| = 5 the cubic identity mixes terms of size exp(15),
// so an unscaled figure could never resolve 1e-11 in double precision.
IdentityResiduals identity_residuals(cd z, cd w);

// Regions of the spectral plane.  Sector 0 is the open sector arg in (30, 150)
// degrees where psi0 decays; its reflection (210, 330) is where phi0 decays.
// The six boundary rays are labelled by their angle in degrees.
enum class Region {
  kSector0,
  kSector1,
  kSector2,
  kRay30,
  kRay90,
  kRay150,
  kRay210,
  kRay270,
  kRay330,
  kOrigin
};
Region classify_sector(cd lambda, double tol = 1e-9);
const char* region_name(Region r);

// Solution of the inhomogeneous constant-coefficient problem
//   i y''' = lambda^3 y + f,  y(0)=y0, y'(0)=y1, y''(0)=y2,
// evaluated at x.  The homogeneous part is
//   y0 s0(i lambda x) + y1 s1(i lambda x)/(i lambda) + y2 s2(i lambda x)/(i lambda)^2
// and the forcing enters through -i int_0^x s2(i lambda (x-t))/(i lambda)^2 f(t) dt.
// lambda = 0 is allowed; the kernel degenerates to (x-t)^2/2.
cd free_solution(cd y0, cd y1, cd y2, const std::function<cd(double)>& f,
                 cd lambda, double x, int panels = 512);

}  // namespace cubist
