#include "cubist/gexp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cubist {

namespace {

GenExp gen_exp_series(cd z) {
  // Lacunary Taylor sums.  Used for |z| <= 0.01 where four terms reach
  // 1e-26 relative truncation, and by the identity suite as a second route.
  GenExp g{cd(0), cd(0), cd(0)};
  cd z3 = z * z * z;
  for (int p = 0; p < 3; ++p) {
    cd term = cd(1);
    for (int j = 1; j <= p; ++j) term *= z / double(j);
    cd sum = term;
    int n = p;
    for (int k = 1; k < 60; ++k) {
      term *= z3 / (double(n + 1) * double(n + 2) * double(n + 3));
      n += 3;
      sum += term;
      if (std::abs(term) < 1e-20 * (std::abs(sum) + 1e-30)) break;
    }
    if (p == 0) g.s0 = sum;
    if (p == 1) g.s1 = sum;
    if (p == 2) g.s2 = sum;
  }
  return g;
}

// Contour rule for the n-th derivative of an entire function, spectrally
// accurate so it serves as an independent oracle for the derivative identities.
cd contour_derivative(const std::function<cd(cd)>& f, cd z, int n, double r) {
  const int m = 32;
  cd acc(0);
  double fact = 1.0;
  for (int j = 2; j <= n; ++j) fact *= j;
  for (int j = 0; j < m; ++j) {
    double th = 2.0 * kPi * j / m;
    cd w = std::polar(r, th);
    acc += f(z + w) * std::polar(1.0, -n * th);
  }
  return acc * fact / (double(m) * std::pow(r, n));
}

double scaled(cd lhs, cd rhs, double scale) {
  return std::abs(lhs - rhs) / std::max(1.0, scale);
}

}  // namespace

GenExp gen_exp(cd z) {
  double az = std::abs(z);
  if (az > kGenExpZMax)
    throw std::domain_error("gen_exp: |z| exceeds supported domain");
  if (az <= 0.01) return gen_exp_series(z);
  cd e0 = std::exp(z);
  cd e1 = std::exp(zeta(1) * z);
  cd e2 = std::exp(zeta(2) * z);
  GenExp g;
  g.s0 = (e0 + e1 + e2) / 3.0;
  g.s1 = (e0 + zeta(2) * e1 + zeta(1) * e2) / 3.0;
  g.s2 = (e0 + zeta(1) * e1 + zeta(2) * e2) / 3.0;
  return g;
}

cd s1_ratio(cd d, double x) {
  if (d == cd(0)) return cd(x);
  return gen_exp(d * x).s1 / d;
}

cd s2_ratio(cd d, double x) {
  if (d == cd(0)) return cd(0.5 * x * x);
  return gen_exp(d * x).s2 / (d * d);
}

double IdentityResiduals::max_abs() const {
  return std::max({derivative_shift, conjugation, p_evenness, euler,
                   initial_data, main_identity, addition, product, squaring,
                   reflection, taylor});
}

IdentityResiduals identity_residuals(cd z, cd w) {
  IdentityResiduals r{};
  GenExp gz = gen_exp(z);
  GenExp gw = gen_exp(w);
  GenExp gzw = gen_exp(z + w);
  GenExp gmz = gen_exp(-z);
  GenExp g2z = gen_exp(2.0 * z);
  double mz = std::max({std::abs(gz.s0), std::abs(gz.s1), std::abs(gz.s2)});
  double mw = std::max({std::abs(gw.s0), std::abs(gw.s1), std::abs(gw.s2)});
  double mzw =
      std::max({std::abs(gzw.s0), std::abs(gzw.s1), std::abs(gzw.s2)});

  auto sp = [](cd v, int p) { return gen_exp(v)[p]; };

  // (i) differentiation shifts the index down by one, cyclically
  for (int p = 0; p < 3; ++p) {
    cd d = contour_derivative([p, &sp](cd v) { return sp(v, p); }, z, 1, 2.0);
    r.derivative_shift =
        std::max(r.derivative_shift, scaled(d, gz[(p + 2) % 3], mz * 10.0));
  }

  // (ii) real coefficients
  GenExp gc = gen_exp(std::conj(z));
  for (int p = 0; p < 3; ++p)
    r.conjugation = std::max(r.conjugation, scaled(std::conj(gz[p]), gc[p], mz));

  // (iii) rotation by a cube root scales s_p by zeta^p
  GenExp gz1 = gen_exp(zeta(1) * z);
  GenExp gz2 = gen_exp(zeta(2) * z);
  for (int p = 0; p < 3; ++p) {
    cd zp1 = (p == 0) ? cd(1) : (p == 1 ? zeta(1) : zeta(2));
    cd zp2 = (p == 0) ? cd(1) : (p == 1 ? zeta(2) : zeta(1));
    r.p_evenness = std::max(r.p_evenness, scaled(gz1[p], zp1 * gz[p], mz));
    r.p_evenness = std::max(r.p_evenness, scaled(gz2[p], zp2 * gz[p], mz));
  }

  // (iv) Euler style recombination
  for (int k = 0; k < 3; ++k) {
    cd e = std::exp(zeta(k) * z);
    cd s = gz.s0 + zeta(k) * gz.s1 + zeta(k) * zeta(k) * gz.s2;
    r.euler = std::max(r.euler, scaled(e, s, std::abs(e) + 3.0 * mz));
  }

  // (v) initial data at the origin, derivatives again by the contour rule
  for (int p = 0; p < 3; ++p)
    for (int j = 0; j < 3; ++j) {
      cd v = (j == 0) ? gen_exp(cd(0))[p]
                      : contour_derivative([p, &sp](cd u) { return sp(u, p); },
                                           cd(0), j, 1.5);
      cd want = (p == j) ? cd(1) : cd(0);
      r.initial_data = std::max(r.initial_data, scaled(v, want, 10.0));
    }

  // (vi) the cubic relation, the analogue of cos^2 + sin^2 = 1
  {
    cd lhs = gz.s0 * gz.s0 * gz.s0 + gz.s1 * gz.s1 * gz.s1 +
             gz.s2 * gz.s2 * gz.s2 - 3.0 * gz.s0 * gz.s1 * gz.s2;
    r.main_identity = scaled(lhs, cd(1), 4.0 * mz * mz * mz);
  }

  // (vii) addition in convolution form
  {
    cd a0 = gz.s0 * gw.s0 + gz.s1 * gw.s2 + gz.s2 * gw.s1;
    cd a1 = gz.s0 * gw.s1 + gz.s1 * gw.s0 + gz.s2 * gw.s2;
    cd a2 = gz.s0 * gw.s2 + gz.s1 * gw.s1 + gz.s2 * gw.s0;
    double sc = 3.0 * mz * mw + mzw;
    r.addition = std::max({scaled(gzw.s0, a0, sc), scaled(gzw.s1, a1, sc),
                           scaled(gzw.s2, a2, sc)});
  }

  // (viii) products linearize over the three rotated shifts
  {
    GenExp shift[3] = {gzw, gen_exp(z + zeta(1) * w), gen_exp(z + zeta(2) * w)};
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        cd lhs = 3.0 * gz[p] * gw[q];
        cd rhs(0);
        for (int m = 0; m < 3; ++m) rhs += zeta(-q * m) * shift[m][(p + q) % 3];
        r.product = std::max(r.product, scaled(lhs, rhs, std::abs(lhs) + 3.0 * mzw));
      }
  }

  // (ix) squares, a degenerate product
  {
    double sc = 3.0 * mz * mz;
    r.squaring = std::max(
        {scaled(3.0 * gz.s0 * gz.s0, g2z.s0 + 2.0 * gmz.s0, sc),
         scaled(3.0 * gz.s1 * gz.s1, g2z.s2 + 2.0 * gmz.s2, sc),
         scaled(3.0 * gz.s2 * gz.s2, g2z.s1 + 2.0 * gmz.s1, sc)});
  }

  // (x) reflection via the 2x2 minors
  {
    double sc = 2.0 * mz * mz;
    r.reflection = std::max(
        {scaled(gz.s0 * gz.s0 - gz.s1 * gz.s2, gmz.s0, sc),
         scaled(gz.s1 * gz.s1 - gz.s0 * gz.s2, gmz.s2, sc),
         scaled(gz.s2 * gz.s2 - gz.s0 * gz.s1, gmz.s1, sc)});
  }

  // (xi) the lacunary series against the exponential route
  {
    GenExp gs = gen_exp_series(z);
    for (int p = 0; p < 3; ++p)
      r.taylor = std::max(r.taylor, scaled(gs[p], gz[p], mz));
  }
  return r;
}

Region classify_sector(cd lambda, double tol) {
  if (std::abs(lambda) < 1e-14) return Region::kOrigin;
  double a = std::arg(lambda);
  if (a < 0) a += 2.0 * kPi;
  static const Region rays[6] = {Region::kRay30,  Region::kRay90,
                                 Region::kRay150, Region::kRay210,
                                 Region::kRay270, Region::kRay330};
  for (int k = 0; k < 6; ++k) {
    double ray = kPi / 6.0 + k * kPi / 3.0;
    if (std::abs(a - ray) < tol) return rays[k];
  }
  double deg = a * 180.0 / kPi;
  if (deg > 30.0 && deg < 150.0) return Region::kSector0;
  if (deg > 150.0 && deg < 270.0) return Region::kSector2;
  return Region::kSector1;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::kSector0: return "sector0";
    case Region::kSector1: return "sector1";
    case Region::kSector2: return "sector2";
    case Region::kRay30: return "ray30";
    case Region::kRay90: return "ray90";
    case Region::kRay150: return "ray150";
    case Region::kRay210: return "ray210";
    case Region::kRay270: return "ray270";
    case Region::kRay330: return "ray330";
    case Region::kOrigin: return "origin";
  }
  return "unknown";
}

cd free_solution(cd y0, cd y1, cd y2, const std::function<cd(double)>& f,
                 cd lambda, double x, int panels) {
  cd d = cd(0, 1) * lambda;
  cd y = y0 * (d == cd(0) ? cd(1) : gen_exp(d * x).s0) + y1 * s1_ratio(d, x) +
         y2 * s2_ratio(d, x);
  if (panels % 2) ++panels;
  double h = x / panels;
  if (x != 0.0) {
    // Simpson for the Duhamel term; h keeps the sign of x.
    cd acc(0);
    for (int j = 0; j <= panels; ++j) {
      double t = j * h;
      double wgt = (j == 0 || j == panels) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      acc += wgt * s2_ratio(d, x - t) * f(t);
    }
    y -= cd(0, 1) * acc * h / 3.0;
  }
  return y;
}

}  // namespace cubist
