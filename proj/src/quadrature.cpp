#include "greencolloc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace greencolloc {

namespace {

// Nodes are zeros of P_q found by Newton iteration from the Chebyshev
// initial guess; weights w_i = 2 / ((1 - x_i^2) P_q'(x_i)^2).
QuadRule compute_gauss(int q) {
  QuadRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const int half = (q + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= q; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[q - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0.0;
  return rule;
}

}  // namespace

const QuadRule& gauss_rule(int q) {
  if (q < 1 || q > 64) {
    throw std::invalid_argument("gauss_rule: order must be in [1, 64], got " +
                                std::to_string(q));
  }
  static std::map<int, QuadRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(q);
  if (it == cache.end()) it = cache.emplace(q, compute_gauss(q)).first;
  return it->second;
}

double integrate_split(const std::function<double(double)>& g, double a,
                       double b, std::vector<double> splits, int q) {
  if (a > b) throw std::invalid_argument("integrate_split: a > b");
  const QuadRule& rule = gauss_rule(q);
  splits.push_back(a);
  splits.push_back(b);
  std::sort(splits.begin(), splits.end());
  double total = 0.0;
  double lo = a;
  for (double cut : splits) {
    if (cut <= lo || cut > b) continue;
    const double hi = cut;
    if (hi - lo < 1e-15) {
      lo = hi;
      continue;
    }
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double seg = 0.0;
    for (int i = 0; i < q; ++i) {
      const double t = mid + half * rule.nodes[i];
      const double v = g(t);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "integrate_split: non-finite integrand at t = " << t;
        throw std::runtime_error(msg.str());
      }
      seg += rule.weights[i] * v;
    }
    total += half * seg;
    lo = hi;
  }
  return total;
}

}  // namespace greencolloc
