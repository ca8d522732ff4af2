#pragma once

#include <string>
#include <vector>

#include "cmemnn/graph.hpp"

namespace cmemnn {

enum class Addressing { softmax, sigmoid, gated };

Addressing addressing_from_string(const std::string& s);
std::string to_string(Addressing a);

/// Key/value slot matrices for one retrieved memory, already embedded onto
/// the graph. Keys address, values are read out. Immutable once built.
struct MemoryBank {
  ad::Value key_matrix;              // M x K
  ad::Value value_matrix;            // M x d_v (M x K for single-memory models)
  std::vector<ad::Value> key_rows;   // per-slot 1 x K, used by gated addressing
  std::vector<std::string> slot_ids; // unique KB page identifiers
  std::vector<int> slot_labels;      // aligned label index per slot, -1 if none

  int slots() const { return static_cast<int>(key_rows.size()); }
};

/// Weights of the gated-addressing scorer: one hidden tanh layer, scalar
/// sigmoid output per slot.
struct GateWeights {
  ad::Value w1;  // 2K x hidden
  ad::Value b1;  // 1 x hidden
  ad::Value w2;  // hidden x 1
  ad::Value b2;  // 1 x 1
};

/// The pair of memory states carried across hops.
struct HopState {
  ad::Value u;        // input memory state, 1 x K
  ad::Value u_tilde;  // condensed memory state, 1 x S_k
  int hop_index = 1;
};

/// Relevance weights over the bank's slots, 1 x M.
/// softmax: distribution over slots; sigmoid/gated: independent (0,1) weights.
ad::Value address(ad::Graph& g, ad::Value u, const MemoryBank& bank,
                  Addressing kind, const GateWeights* gate = nullptr);

/// Output memory representation o = (weights * values) * c_transform.
ad::Value read(ad::Graph& g, ad::Value weights, const MemoryBank& bank,
               ad::Value c_transform);

/// u^{k+1} = u^k + o^k.
ad::Value hop_update(ad::Graph& g, ad::Value u, ad::Value o);

/// One condensation step: u_next concatenated with the halved projection of
/// the previous condensed state.
ad::Value condense(ad::Graph& g, const HopState& state, ad::Value u_next,
                   ad::Value d_k);

/// Unnormalized exponential moving average of the given u-states, decay 1/2,
/// most recent state first weighted 1.
ad::Value average_update(ad::Graph& g, const std::vector<ad::Value>& history);

/// Condensed-state dimensions S_1..S_hops: S_1 = K, S_{k+1} = K + S_k / 2.
/// Bounded above by 2K - 1.
std::vector<int> dim_schedule(int k_dim, int hops);

}  // namespace cmemnn
