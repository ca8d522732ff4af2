#include "cmemnn/tensor.hpp"

#include <cmath>
#include <utility>

#include "cmemnn/errors.hpp"

namespace cmemnn {

Tensor::Tensor(int r, int c) : rows(r), cols(c) {
  if (r < 1 || c < 0) {
    throw DimensionError("tensor shape must be at least 1x0, got " + shape_str());
  }
  data.assign(static_cast<std::size_t>(r) * c, 0.0);
}

Tensor::Tensor(int r, int c, std::vector<double> values)
    : rows(r), cols(c), data(std::move(values)) {
  if (r < 1 || c < 0) {
    throw DimensionError("tensor shape must be at least 1x0, got " + shape_str());
  }
  if (static_cast<std::size_t>(r) * c != data.size()) {
    throw DimensionError("tensor " + shape_str() + " expects " +
                         std::to_string(static_cast<std::size_t>(r) * c) +
                         " values, got " + std::to_string(data.size()));
  }
}

Tensor Tensor::scalar(double v) { return Tensor(1, 1, {v}); }

Tensor Tensor::row(std::vector<double> values) {
  const int n = static_cast<int>(values.size());
  return Tensor(1, n, std::move(values));
}

double Tensor::scalar_value() const {
  if (!is_scalar()) {
    throw DimensionError("expected scalar (1x1), got " + shape_str());
  }
  return data[0];
}

bool Tensor::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Tensor::fill(double v) {
  for (double& x : data) x = v;
}

std::string Tensor::shape_str() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b)) return false;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    if (a.data[i] != b.data[i]) return false;
  }
  return true;
}

}  // namespace cmemnn
