#include "anumrad/matrix.hpp"

#include <cmath>
#include <string>

#include "anumrad/error.hpp"

namespace anumrad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::dimension: return "dimension";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::not_psd: return "not-psd";
    case ErrorCode::zero_weight: return "zero-weight";
    case ErrorCode::not_adjointable: return "not-a-adjointable";
    case ErrorCode::not_bounded: return "not-a-bounded";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::generation: return "generation";
    case ErrorCode::parse: return "parse";
    case ErrorCode::context: return "context";
  }
  return "unknown";
}

namespace {

void require_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::dimension, "matrix dimensions must be positive");
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::dimension,
                std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  require_shape(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::dimension, "entry count does not match rows*cols");
  }
  if (!all_finite()) throw Error(ErrorCode::invalid_input, "matrix has non-finite entries");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows.size() == 0 ? 0 : rows.begin()->size();
  require_shape(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw Error(ErrorCode::dimension, "ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  if (!all_finite()) throw Error(ErrorCode::invalid_input, "matrix has non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  if (!m.all_finite()) throw Error(ErrorCode::invalid_input, "matrix has non-finite entries");
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

double ComplexMatrix::frobenius_norm() const {
  // Scaled accumulation is unnecessary at the sizes handled here.
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool ComplexMatrix::all_finite() const {
  for (const auto& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_shape(*this, rhs, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_shape(*this, rhs, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }
ComplexMatrix operator*(ComplexMatrix m, cplx s) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  if (lhs.cols() != rhs.rows()) {
    throw Error(ErrorCode::dimension, "operator*: inner dimensions differ");
  }
  ComplexMatrix out(lhs.rows(), rhs.cols());
  const std::size_t n = rhs.cols();
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    cplx* row = &out(i, 0);
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const cplx a = lhs(i, k);
      if (a == cplx{}) continue;
      const cplx* rrow = &rhs(k, 0);
      for (std::size_t j = 0; j < n; ++j) row[j] += a * rrow[j];
    }
  }
  return out;
}

CVector operator*(const ComplexMatrix& m, std::span<const cplx> x) {
  if (m.cols() != x.size()) throw Error(ErrorCode::dimension, "matrix-vector size mismatch");
  CVector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexMatrix power(const ComplexMatrix& m, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_input, "power: exponent must be >= 1");
  ComplexMatrix out = m;
  for (int k = 1; k < n; ++k) out = out * m;
  return out;
}

double vector_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::dimension, "inner: size mismatch");
  cplx acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * std::conj(y[i]);
  return acc;
}

}  // namespace anumrad
