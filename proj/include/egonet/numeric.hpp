#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace egonet {

// Exact arithmetic backing the integer and rational towers. Walk counts grow
// like m^k, so fixed-width integers are not an option.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

enum class Tower { ExactInteger, ExactRational, Float };

std::string tower_name(Tower t);

// base^e for integer e (negative allowed).
BigRat rational_pow(const BigRat& base, long long e);

// Doubles are keyed after rounding to 12 significant digits; exact scalars key
// on their full decimal form.
std::string key_digits(const BigInt& v);
std::string key_digits(const BigRat& v);
std::string key_digits(double v);

// Dense row-major matrix, templated over the numeric tower.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  static Matrix ones(int rows) {
    Matrix m(rows, 1);
    for (int i = 0; i < rows; ++i) m(i, 0) = T(1);
    return m;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

// Which operator (by index into the family) and which input column produced an
// augmented-feature column.
struct ColumnProvenance {
  int operator_index = 0;
  int input_column = 0;
};

template <typename T>
struct FeatureMatrix {
  Matrix<T> values;
  std::vector<ColumnProvenance> provenance;  // one entry per column of `values`
};

}  // namespace egonet
