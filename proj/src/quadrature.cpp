#include "serrinlab/quadrature.hpp"

#include <cmath>
#include <cstddef>

#include "serrinlab/errors.hpp"

namespace serrinlab::quadrature {

namespace {

// Nodes and weights of the 8-point Gauss-Legendre rule on [-1, 1].
constexpr double kNodes[4] = {
    0.18343464249564980, 0.52553240991632899,
    0.79666647741362674, 0.96028985649753623};
constexpr double kWeights[4] = {
    0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

}  // namespace

double gauss8(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i) {
    sum += kWeights[i] *
           (f(mid + half * kNodes[i]) + f(mid - half * kNodes[i]));
  }
  return half * sum;
}

double gauss8_composite(const std::function<double(double)>& f, double a,
                        double b, int panels) {
  if (panels < 1) throw InvalidArgument("gauss8_composite: panels must be >= 1");
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    sum += gauss8(f, a + p * width, a + (p + 1) * width);
  }
  return sum;
}

AdaptiveResult integrate_to_tol(const std::function<double(double)>& f,
                                double a, double b, double rel_tol,
                                double abs_tol) {
  constexpr int kMaxPanels = 1 << 14;
  AdaptiveResult res;
  double prev = gauss8_composite(f, a, b, 1);
  for (int panels = 2; panels <= kMaxPanels; panels *= 2) {
    const double cur = gauss8_composite(f, a, b, panels);
    const double err = std::abs(cur - prev);
    if (err <= std::max(abs_tol, rel_tol * std::abs(cur))) {
      res.value = cur;
      res.panels = panels;
      res.est_error = err;
      return res;
    }
    prev = cur;
  }
  throw NonConvergence("integrate_to_tol: panel limit reached");
}

double simpson_uniform(const std::vector<double>& y, double dx) {
  const std::size_t m = y.size() - 1;  // interval count
  if (y.size() < 4) throw InvalidArgument("simpson_uniform: need >= 4 samples");
  std::size_t even_end = m;  // intervals handled by the 1/3 rule
  double tail = 0.0;
  if (m % 2 != 0) {
    even_end = m - 3;
    // Simpson 3/8 rule on the last three intervals.
    tail = 3.0 * dx / 8.0 *
           (y[m - 3] + 3.0 * y[m - 2] + 3.0 * y[m - 1] + y[m]);
  }
  double sum = 0.0;
  if (even_end >= 2) {
    sum = y[0] + y[even_end];
    for (std::size_t i = 1; i < even_end; ++i) {
      sum += (i % 2 == 1 ? 4.0 : 2.0) * y[i];
    }
    sum *= dx / 3.0;
  }
  return sum + tail;
}

}  // namespace serrinlab::quadrature
