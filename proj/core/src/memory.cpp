#include "cmemnn/memory.hpp"

#include "cmemnn/errors.hpp"

namespace cmemnn {

Addressing addressing_from_string(const std::string& s) {
  if (s == "softmax") return Addressing::softmax;
  if (s == "sigmoid") return Addressing::sigmoid;
  if (s == "gated") return Addressing::gated;
  throw ConfigError("unknown addressing scheme: " + s);
}

std::string to_string(Addressing a) {
  switch (a) {
    case Addressing::softmax: return "softmax";
    case Addressing::sigmoid: return "sigmoid";
    case Addressing::gated: return "gated";
  }
  return "?";
}

ad::Value address(ad::Graph& g, ad::Value u, const MemoryBank& bank,
                  Addressing kind, const GateWeights* gate) {
  if (bank.slots() == 0) {
    throw DimensionError("address: memory bank has no slots");
  }
  switch (kind) {
    case Addressing::softmax:
      return g.softmax_row(g.matmul_nt(u, bank.key_matrix));
    case Addressing::sigmoid:
      return g.sigmoid(g.matmul_nt(u, bank.key_matrix));
    case Addressing::gated: {
      if (gate == nullptr) {
        throw ConfigError("gated addressing requires gate weights");
      }
      // Per slot: sigma(FNN(u concat key_i)); sigmoid applied after gathering
      // the scalar logits into one row.
      std::vector<ad::Value> logits;
      logits.reserve(bank.key_rows.size());
      for (ad::Value key : bank.key_rows) {
        ad::Value x = g.concat(u, key);
        ad::Value hidden = g.tanh_op(g.add(g.matmul(x, gate->w1), gate->b1));
        logits.push_back(g.add(g.matmul(hidden, gate->w2), gate->b2));
      }
      return g.sigmoid(g.concat_many(logits));
    }
  }
  throw ConfigError("unreachable addressing kind");
}

ad::Value read(ad::Graph& g, ad::Value weights, const MemoryBank& bank,
               ad::Value c_transform) {
  return g.matmul(g.matmul(weights, bank.value_matrix), c_transform);
}

ad::Value hop_update(ad::Graph& g, ad::Value u, ad::Value o) {
  return g.add(u, o);
}

ad::Value condense(ad::Graph& g, const HopState& state, ad::Value u_next,
                   ad::Value d_k) {
  const int s_k = g.val(state.u_tilde).cols;
  const Tensor& d = g.val(d_k);
  if (d.rows != s_k || d.cols != s_k / 2) {
    throw ConfigError("condense: hop " + std::to_string(state.hop_index) +
                      " expects a " + std::to_string(s_k) + "x" +
                      std::to_string(s_k / 2) + " condenser, got " + d.shape_str());
  }
  return g.concat(u_next, g.matmul(state.u_tilde, d_k));
}

ad::Value average_update(ad::Graph& g, const std::vector<ad::Value>& history) {
  if (history.empty()) {
    throw DataError("average_update: empty state history");
  }
  // Most recent last in `history`; weight 1 for it, halving backwards.
  ad::Value acc = history.back();
  double w = 1.0;
  for (std::size_t i = history.size() - 1; i-- > 0;) {
    w *= 0.5;
    acc = g.add(acc, g.scale(history[i], w));
  }
  return acc;
}

std::vector<int> dim_schedule(int k_dim, int hops) {
  if (k_dim < 2) {
    throw ConfigError("dim_schedule: memory dimension must be >= 2, got " +
                      std::to_string(k_dim));
  }
  if (hops < 1) {
    throw ConfigError("dim_schedule: hops must be >= 1, got " + std::to_string(hops));
  }
  std::vector<int> s(static_cast<std::size_t>(hops));
  s[0] = k_dim;
  for (int k = 1; k < hops; ++k) {
    s[static_cast<std::size_t>(k)] = k_dim + s[static_cast<std::size_t>(k - 1)] / 2;
  }
  return s;
}

}  // namespace cmemnn
