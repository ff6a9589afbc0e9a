#include "conceptmine/optimize.hpp"

#include <cmath>
#include <numeric>

namespace conceptmine {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

AscentReport maximize(const Objective& objective, std::vector<double>& w,
                      const AscentOptions& options) {
  AscentReport report;
  std::vector<double> grad(w.size(), 0.0);
  std::vector<double> trial(w.size(), 0.0);
  std::vector<double> trial_grad(w.size(), 0.0);

  double value = objective(w, grad);
  double step = options.initial_step;
  constexpr double kArmijo = 1e-4;

  for (int it = 0; it < options.max_iters; ++it) {
    double g2 = dot(grad, grad);
    report.grad_norm = std::sqrt(g2);
    if (report.grad_norm < options.tol) {
      report.converged = true;
      break;
    }
    bool accepted = false;
    for (int h = 0; h < options.max_halvings; ++h) {
      for (std::size_t i = 0; i < w.size(); ++i) trial[i] = w[i] + step * grad[i];
      double trial_value = objective(trial, trial_grad);
      if (std::isfinite(trial_value) && trial_value >= value + kArmijo * step * g2) {
        w.swap(trial);
        grad.swap(trial_grad);
        value = trial_value;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    report.iterations = it + 1;
    report.trace.push_back(value);
    step = std::min(step * 2.0, options.max_step);
  }
  report.objective = value;
  report.grad_norm = std::sqrt(dot(grad, grad));
  if (report.grad_norm < options.tol) report.converged = true;
  return report;
}

}  // namespace conceptmine
