#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cmemnn/graph.hpp"
#include "cmemnn/params.hpp"

namespace cmemnn::ad {

struct ParamCheck {
  std::string name;
  double max_rel_err = 0.0;
  int entries_checked = 0;
};

struct GradCheckReport {
  double max_rel_err = 0.0;
  std::string worst_param;
  bool pass = false;
  std::vector<ParamCheck> per_param;
};

/// Compares reverse-mode gradients against central finite differences
/// (f(x+h) - f(x-h)) / 2h for every trainable parameter in `params`.
/// Parameters with more than `max_entries_per_param` entries are subsampled
/// deterministically. The builder must be deterministic; two forward passes
/// that disagree bitwise raise NumericError.
GradCheckReport grad_check(const std::function<Value(Graph&)>& build,
                           ParameterStore& params, double h, double tol,
                           int max_entries_per_param = 50);

}  // namespace cmemnn::ad
