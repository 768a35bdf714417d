#pragma once

#include <functional>
#include <vector>

namespace serrinlab::quadrature {

// 8-point Gauss-Legendre rule on [a, b] (exact for polynomials of degree 15).
double gauss8(const std::function<double(double)>& f, double a, double b);

// Composite 8-point Gauss-Legendre rule with `panels` equal panels.
double gauss8_composite(const std::function<double(double)>& f, double a,
                        double b, int panels);

struct AdaptiveResult {
  double value = 0.0;
  int panels = 0;
  double est_error = 0.0;
};

// Panel-doubling composite Gauss-Legendre integration: doubles the panel
// count until successive values agree to max(abs_tol, rel_tol*|value|).
AdaptiveResult integrate_to_tol(const std::function<double(double)>& f,
                                double a, double b, double rel_tol = 1e-13,
                                double abs_tol = 1e-300);

// Composite Simpson rule over uniformly spaced samples y_0..y_m with spacing
// dx (m = y.size()-1 intervals). Odd interval counts are closed with a
// Simpson 3/8 tail so the rule stays 4th-order accurate.
double simpson_uniform(const std::vector<double>& y, double dx);

}  // namespace serrinlab::quadrature
