#pragma once

#include <functional>
#include <span>
#include <vector>

namespace conceptmine {

// Fills `grad` with the gradient at `w` and returns the objective value.
using Objective = std::function<double(std::span<const double> w, std::span<double> grad)>;

struct AscentOptions {
  int max_iters = 200;
  double tol = 1e-4;  // stop once the gradient norm drops below this
  double initial_step = 1.0;
  double max_step = 1e4;
  int max_halvings = 50;
};

struct AscentReport {
  int iterations = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
  std::vector<double> trace;  // objective after each accepted step
};

// Batch gradient ascent. Each step starts from the last accepted step size
// (doubled) and halves it until the Armijo condition holds, so the objective
// never decreases across accepted steps.
AscentReport maximize(const Objective& objective, std::vector<double>& w,
                      const AscentOptions& options = {});

}  // namespace conceptmine
