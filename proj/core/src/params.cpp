#include "cmemnn/params.hpp"

#include "cmemnn/errors.hpp"

namespace cmemnn::ad {

Parameter& ParameterStore::add(const std::string& name, Tensor value, bool trainable) {
  if (index_.count(name)) {
    throw ConfigError("duplicate parameter name: " + name);
  }
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->grad = Tensor(value.rows, value.cols);
  p->value = std::move(value);
  p->trainable = trainable;
  index_[name] = params_.size();
  params_.push_back(std::move(p));
  return *params_.back();
}

Parameter& ParameterStore::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError("unknown parameter: " + name);
  return *params_[it->second];
}

const Parameter& ParameterStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ConfigError("unknown parameter: " + name);
  return *params_[it->second];
}

Parameter* ParameterStore::find(const std::string& name) {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : params_[it->second].get();
}

void ParameterStore::zero_grads() {
  for (auto& p : params_) p->grad.fill(0.0);
}

std::vector<std::pair<std::string, Tensor>> ParameterStore::snapshot() const {
  std::vector<std::pair<std::string, Tensor>> out;
  out.reserve(params_.size());
  for (const auto& p : params_) out.emplace_back(p->name, p->value);
  return out;
}

}  // namespace cmemnn::ad
