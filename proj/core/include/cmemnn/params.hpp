#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "cmemnn/tensor.hpp"

namespace cmemnn::ad {

/// A learned matrix with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;  // always same shape as value
  bool trainable = true;
};

/// Registry of uniquely named parameters. Insertion order is the canonical
/// traversal order for optimizer updates and norm computations.
class ParameterStore {
 public:
  Parameter& add(const std::string& name, Tensor value, bool trainable = true);

  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;
  Parameter* find(const std::string& name);
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  std::size_t size() const { return params_.size(); }
  Parameter& at(std::size_t i) { return *params_[i]; }
  const Parameter& at(std::size_t i) const { return *params_[i]; }

  void zero_grads();

  /// Deep copies of all values, in registry order.
  std::vector<std::pair<std::string, Tensor>> snapshot() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace cmemnn::ad
