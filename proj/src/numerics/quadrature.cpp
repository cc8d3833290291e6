#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>

#include "risssk/numerics.hpp"

namespace risssk::numerics {
namespace {

GaussLegendreRule build_rule(std::size_t n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 20; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double apply_rule(const GaussLegendreRule& rule, const std::function<double(double)>& f, double a,
                  double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussLegendreRule>(build_rule(n));
  return *slot;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options) {
  if (!(a < b)) throw std::invalid_argument("integrate: requires a < b");
  if (options.initial_nodes == 0) throw std::invalid_argument("integrate: zero nodes");
  std::size_t n = options.initial_nodes;
  double previous = apply_rule(gauss_legendre(n), f, a, b);
  while (2 * n <= options.max_nodes) {
    n *= 2;
    const double current = apply_rule(gauss_legendre(n), f, a, b);
    if (std::abs(current - previous) <= options.rel_tol * std::abs(current)) return current;
    previous = current;
  }
  std::ostringstream msg;
  msg << "integrate: no convergence to rel_tol " << options.rel_tol << " within "
      << options.max_nodes << " nodes on [" << a << ", " << b << "]";
  throw NonConvergence(msg.str());
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  return integrate(f, a, b, options);
}

}  // namespace risssk::numerics
