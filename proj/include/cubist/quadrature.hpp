#pragma once

#include <utility>
#include <vector>

namespace cubist {

// Gauss-Legendre rule on [-1, 1], nodes ascending.  Computed by Newton on the
// Legendre recurrence; n up to a few hundred is accurate to machine precision.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

struct MappedGrid {
  std::vector<double> tau, w;
};

MappedGrid legendre_on_interval(int n, double a, double b);

// Semi-axis rule through the quadratic rational map tau = L (1+u)/(1-u)^2.
// The square in the denominator matters: the dispersive densities decay like
// tau^(-3/2), which this map turns into a function smooth up to the endpoint,
// so the rule converges fast where the plain (1+u)/(1-u) map would not.
MappedGrid legendre_semiaxis(int n, double scale);

}  // namespace cubist
