#include "cmemnn/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "cmemnn/errors.hpp"
#include "cmemnn/rng.hpp"

namespace cmemnn::ad {

namespace {

double eval_loss(const std::function<Value(Graph&)>& build) {
  Graph g;
  return g.val(build(g)).scalar_value();
}

double rel_err(double analytic, double fd) {
  const double denom = std::max({std::fabs(analytic), std::fabs(fd), 1e-6});
  return std::fabs(analytic - fd) / denom;
}

// Deterministic subsample of [0, n): either everything or `want` distinct
// entries drawn from a stream keyed by the parameter name.
std::vector<int> pick_entries(int n, int want, const std::string& name) {
  std::vector<int> idx;
  if (n <= want) {
    idx.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
  }
  SplitMix64 rng(stream_key(0x67726164, name));  // fixed gradcheck stream
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(n), 0);
  while (static_cast<int>(idx.size()) < want) {
    int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (!taken[static_cast<std::size_t>(i)]) {
      taken[static_cast<std::size_t>(i)] = 1;
      idx.push_back(i);
    }
  }
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

GradCheckReport grad_check(const std::function<Value(Graph&)>& build,
                           ParameterStore& params, double h, double tol,
                           int max_entries_per_param) {
  const double l0 = eval_loss(build);
  const double l1 = eval_loss(build);
  if (l0 != l1) {
    throw NumericError("grad_check: graph builder is not deterministic (" +
                       std::to_string(l0) + " vs " + std::to_string(l1) + ")");
  }

  params.zero_grads();
  {
    Graph g;
    g.backward(build(g));
  }

  GradCheckReport report;
  for (std::size_t pi = 0; pi < params.size(); ++pi) {
    Parameter& p = params.at(pi);
    if (!p.trainable) continue;
    ParamCheck pc;
    pc.name = p.name;
    for (int e : pick_entries(p.value.size(), max_entries_per_param, p.name)) {
      const double saved = p.value.data[e];
      p.value.data[e] = saved + h;
      const double lp = eval_loss(build);
      p.value.data[e] = saved - h;
      const double lm = eval_loss(build);
      p.value.data[e] = saved;
      const double fd = (lp - lm) / (2.0 * h);
      pc.max_rel_err = std::max(pc.max_rel_err, rel_err(p.grad.data[e], fd));
      ++pc.entries_checked;
    }
    if (pc.max_rel_err >= report.max_rel_err) {
      report.max_rel_err = pc.max_rel_err;
      report.worst_param = pc.name;
    }
    report.per_param.push_back(std::move(pc));
  }
  report.pass = report.max_rel_err < tol;
  return report;
}

}  // namespace cmemnn::ad
