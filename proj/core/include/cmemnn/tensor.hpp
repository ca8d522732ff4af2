#pragma once

#include <string>
#include <vector>

namespace cmemnn {

/// Dense row-major matrix of 64-bit floats. Row vectors are 1xN, scalars 1x1.
/// Zero-width row vectors (1x0) are allowed so that concatenation has an
/// identity element.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int r, int c);                             // zero-filled
  Tensor(int r, int c, std::vector<double> values); // checks r*c == size

  static Tensor scalar(double v);
  static Tensor row(std::vector<double> values);

  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  int size() const { return rows * cols; }
  bool is_row() const { return rows == 1; }
  bool is_scalar() const { return rows == 1 && cols == 1; }
  double scalar_value() const;  // throws unless 1x1

  bool same_shape(const Tensor& other) const {
    return rows == other.rows && cols == other.cols;
  }
  bool all_finite() const;
  void fill(double v);

  std::string shape_str() const;  // e.g. "2x3"
};

bool bitwise_equal(const Tensor& a, const Tensor& b);

}  // namespace cmemnn
