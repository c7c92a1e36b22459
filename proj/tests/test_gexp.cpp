#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cubist/gexp.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

using cubist::cd;
using cubist::gen_exp;
using cubist::zeta;

namespace {

// Uniform point in the closed disk |z| <= r, by rejection.
cd disk_point(std::mt19937_64& rng, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  for (;;) {
    cd z(u(rng), u(rng));
    if (std::abs(z) <= r) return z;
  }
}

}  // namespace

TEST_CASE("initial data at the origin") {
  auto s = gen_exp(cd(0.0, 0.0));
  CHECK(s.s0 == cd(1.0, 0.0));
  CHECK(s.s1 == cd(0.0, 0.0));
  CHECK(s.s2 == cd(0.0, 0.0));
}

TEST_CASE("series route matches a direct exponential sum near the switch") {
  // Below |z| = 0.01 gen_exp sums the lacunary series.  Recompute the same
  // values from (1/3) sum_k zeta_k^{-p} exp(zeta_k z); the cancellation in
  // that sum leaves roughly 1e-16 absolute noise, well under the tolerance.
  const cd zs[] = {cd(0.009, 0.0), cd(0.0, 0.0099), cd(-0.006, 0.007),
                   cd(1e-5, -1e-5), cd(0.0095, -0.002)};
  for (cd z : zs) {
    auto s = gen_exp(z);
    for (int p = 0; p < 3; ++p) {
      cd direct = 0.0;
      for (int k = 0; k < 3; ++k)
        direct += zeta(-p * k) * std::exp(zeta(k) * z);
      direct /= 3.0;
      CAPTURE(z.real());
      CAPTURE(z.imag());
      CAPTURE(p);
      CHECK(std::abs(s[p] - direct) < 1e-14);
    }
  }
}

TEST_CASE("values are continuous across the series/exponential boundary") {
  for (double ang : {0.3, 1.7, 2.9, 4.4, 5.8}) {
    cd dir = std::polar(1.0, ang);
    auto lo = gen_exp(0.0099999 * dir);
    auto hi = gen_exp(0.0100001 * dir);
    auto mid = gen_exp(0.01 * dir);
    // The two sides straddle the route switch; after removing the genuine
    // first-order variation (s_p' = s_{p-1}) only the route mismatch is left.
    for (int p = 0; p < 3; ++p) {
      cd step = 2e-7 * dir * mid[(p + 2) % 3];
      CHECK(std::abs(hi[p] - lo[p] - step) < 1e-12);
    }
  }
}

TEST_CASE("identity sweep over random pairs") {
  // 1000 pairs in |z| <= 5, fixed seed.  Every family must sit at 1e-11 or
  // better in the scaled residual, and the sweep has to be fast.
  std::mt19937_64 rng(7u);
  cubist::IdentityResiduals worst{};
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < 1000; ++i) {
    cd z = disk_point(rng, 5.0);
    cd w = disk_point(rng, 5.0);
    auto r = cubist::identity_residuals(z, w);
    worst.derivative_shift = std::max(worst.derivative_shift, r.derivative_shift);
    worst.conjugation = std::max(worst.conjugation, r.conjugation);
    worst.p_evenness = std::max(worst.p_evenness, r.p_evenness);
    worst.euler = std::max(worst.euler, r.euler);
    worst.initial_data = std::max(worst.initial_data, r.initial_data);
    worst.main_identity = std::max(worst.main_identity, r.main_identity);
    worst.addition = std::max(worst.addition, r.addition);
    worst.product = std::max(worst.product, r.product);
    worst.squaring = std::max(worst.squaring, r.squaring);
    worst.reflection = std::max(worst.reflection, r.reflection);
    worst.taylor = std::max(worst.taylor, r.taylor);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(worst.derivative_shift < 1e-11);
  CHECK(worst.conjugation < 1e-11);
  CHECK(worst.p_evenness < 1e-11);
  CHECK(worst.euler < 1e-11);
  CHECK(worst.initial_data < 1e-11);
  CHECK(worst.main_identity < 1e-11);
  CHECK(worst.addition < 1e-11);
  CHECK(worst.product < 1e-11);
  CHECK(worst.squaring < 1e-11);
  CHECK(worst.reflection < 1e-11);
  CHECK(worst.taylor < 1e-11);
  CHECK(worst.max_abs() < 1e-11);
  CHECK(secs < 5.0);
}

TEST_CASE("derivative shift agrees with central differences") {
  // identity_residuals takes derivatives by the contour rule; cross-check the
  // same relation s_p' = s_{p+2 mod 3} by plain finite differences.
  const double h = 1e-5;
  for (cd z : {cd(0.4, -0.3), cd(2.0, 1.0), cd(-1.5, 2.5)}) {
    auto fwd = gen_exp(z + h);
    auto bwd = gen_exp(z - h);
    auto mid = gen_exp(z);
    for (int p = 0; p < 3; ++p) {
      cd fd = (fwd[p] - bwd[p]) / (2.0 * h);
      CHECK(std::abs(fd - mid[(p + 2) % 3]) < 1e-8 * std::max(1.0, std::abs(mid[(p + 2) % 3])));
    }
  }
}

TEST_CASE("euler recombination reproduces exp") {
  for (cd z : {cd(1.0, 0.0), cd(-2.0, 3.0), cd(0.5, -4.0)}) {
    auto s = gen_exp(z);
    for (int k = 0; k < 3; ++k) {
      cd lhs = s.s0 + zeta(k) * s.s1 + zeta(2 * k) * s.s2;
      cd rhs = std::exp(zeta(k) * z);
      CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("arguments past the overflow guard are rejected") {
  CHECK_THROWS_AS(gen_exp(cd(201.0, 0.0)), std::domain_error);
  CHECK_THROWS_AS(gen_exp(cd(0.0, -200.5)), std::domain_error);
  CHECK_NOTHROW(gen_exp(cd(199.0, 0.0)));
}

TEST_CASE("renormalized kernels and their small-d limits") {
  const double x = 2.5;
  CHECK(cubist::s1_ratio(cd(0.0), x) == cd(x));
  CHECK(cubist::s2_ratio(cd(0.0), x) == cd(x * x / 2.0));

  cd d(0.4, -0.7);
  CHECK(std::abs(cubist::s1_ratio(d, x) - gen_exp(d * x).s1 / d) < 1e-13);
  CHECK(std::abs(cubist::s2_ratio(d, x) - gen_exp(d * x).s2 / (d * d)) < 1e-13);

  // continuity as d -> 0
  cd tiny(1e-8, 1e-8);
  CHECK(std::abs(cubist::s1_ratio(tiny, x) - x) < 1e-6);
  CHECK(std::abs(cubist::s2_ratio(tiny, x) - x * x / 2.0) < 1e-6);
}

TEST_CASE("kernel rotation symmetry") {
  // s2(zeta_1 w) = zeta_1^2 s2(w) makes the ratio s2(d x)/d^2 invariant when
  // d picks up a cube-root factor.  The marching kernels rely on this.
  cd d(0.3, 0.8);
  for (double x : {0.7, 1.9}) {
    CHECK(std::abs(cubist::s2_ratio(d * zeta(1), x) - cubist::s2_ratio(d, x)) < 1e-13);
    CHECK(std::abs(cubist::s2_ratio(d * zeta(2), x) - cubist::s2_ratio(d, x)) < 1e-13);
  }
}

TEST_CASE("sector classification") {
  using cubist::Region;
  auto at = [](double deg) { return std::polar(1.0, deg * cubist::kPi / 180.0); };
  CHECK(cubist::classify_sector(cd(0.0, 0.0)) == Region::kOrigin);
  CHECK(cubist::classify_sector(at(90.0)) == Region::kRay90);
  CHECK(cubist::classify_sector(at(30.0)) == Region::kRay30);
  CHECK(cubist::classify_sector(at(150.0)) == Region::kRay150);
  CHECK(cubist::classify_sector(at(210.0)) == Region::kRay210);
  CHECK(cubist::classify_sector(at(270.0)) == Region::kRay270);
  CHECK(cubist::classify_sector(at(330.0)) == Region::kRay330);
  CHECK(cubist::classify_sector(at(60.0)) == Region::kSector0);
  CHECK(cubist::classify_sector(at(145.0)) == Region::kSector0);
  CHECK(cubist::classify_sector(at(200.0)) == Region::kSector2);
  CHECK(cubist::classify_sector(at(240.0)) == Region::kSector2);
  CHECK(cubist::classify_sector(at(300.0)) == Region::kSector1);
  CHECK(cubist::classify_sector(at(0.0)) == Region::kSector1);
  CHECK(cubist::classify_sector(at(20.0)) == Region::kSector1);
  // points just off a ray fall into the neighbouring sector
  CHECK(cubist::classify_sector(at(90.0 + 1e-6)) == Region::kSector0);
}

TEST_CASE("free solution against a manufactured exponential") {
  // y = exp(a x) solves i y''' = lambda^3 y + f with f = (i a^3 - lambda^3) exp(a x).
  cd a(0.3, 0.2);
  cd lambda(0.7, 0.0);
  auto f = [&](double t) { return (cd(0, 1) * a * a * a - lambda * lambda * lambda) * std::exp(a * t); };
  for (double x : {0.5, 1.5, -1.0}) {
    cd got = cubist::free_solution(1.0, a, a * a, f, lambda, x);
    cd want = std::exp(a * x);
    CHECK(std::abs(got - want) < 1e-11);
  }
}

TEST_CASE("free solution at lambda = 0") {
  // i y''' = f with f = 6i gives y = x^3 from zero initial data.
  auto f = [](double) { return cd(0.0, 6.0); };
  for (double x : {0.8, 2.0}) {
    cd got = cubist::free_solution(0.0, 0.0, 0.0, f, cd(0.0, 0.0), x);
    CHECK(std::abs(got - x * x * x) < 1e-12);
  }
}

TEST_CASE("homogeneous free solution is the dressed plane wave") {
  // With y(0) = 1, y'(0) = i lambda zeta_k, y''(0) = (i lambda zeta_k)^2 and
  // no forcing, the solution is exp(i lambda zeta_k x).
  cd lambda(0.9, 0.1);
  auto zero = [](double) { return cd(0.0, 0.0); };
  for (int k = 0; k < 3; ++k) {
    cd c = cd(0, 1) * lambda * zeta(k);
    for (double x : {1.0, -2.0}) {
      cd got = cubist::free_solution(1.0, c, c * c, zero, lambda, x);
      CHECK(std::abs(got - std::exp(c * x)) < 1e-12);
    }
  }
}
