#include "hgnn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hgnn/error.hpp"
#include "hgnn/parallel.hpp"

namespace hgnn {
namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    fail(Errc::ShapeMismatch, "matrix data length " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) fail(Errc::ShapeMismatch, "ragged rows in from_rows");
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) fail(Errc::DimMismatch, "matmul " + shape(a) + " * " + shape(b));
  Matrix c(a.rows(), b.cols());
  parallel_for(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto out = c.row(i);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        double aik = a(i, k);
        if (aik == 0.0) continue;
        auto brow = b.row(k);
        for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
      }
    }
  });
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) fail(Errc::DimMismatch, "matmul_tn " + shape(a) + "ᵀ * " + shape(b));
  Matrix c(a.cols(), b.cols());
  // Row i of the result accumulates over k in ascending order regardless of threading.
  parallel_for(a.cols(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = 0; k < a.rows(); ++k) {
      auto brow = b.row(k);
      for (std::size_t i = begin; i < end; ++i) {
        double aki = a(k, i);
        if (aki == 0.0) continue;
        auto out = c.row(i);
        for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aki * brow[j];
      }
    }
  });
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) fail(Errc::DimMismatch, "matmul_nt " + shape(a) + " * " + shape(b) + "ᵀ");
  Matrix c(a.rows(), b.rows());
  parallel_for(a.rows(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      auto arow = a.row(i);
      for (std::size_t j = 0; j < b.rows(); ++j) {
        auto brow = b.row(j);
        double s = 0.0;
        for (std::size_t k = 0; k < a.cols(); ++k) s += arow[k] * brow[k];
        c(i, j) = s;
      }
    }
  });
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) fail(Errc::ShapeMismatch, shape(a) + " + " + shape(b));
  Matrix c = a;
  auto cv = c.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] += bv[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) fail(Errc::ShapeMismatch, shape(a) + " - " + shape(b));
  Matrix c = a;
  auto cv = c.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < cv.size(); ++i) cv[i] -= bv[i];
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (double& v : c.values()) v *= s;
  return c;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) fail(Errc::DimMismatch, "matvec " + shape(a) + " * vector");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) fail(Errc::ShapeMismatch, "max_abs_diff " + shape(a) + " vs " + shape(b));
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) m = std::max(m, std::abs(av[i] - bv[i]));
  return m;
}

double asymmetry(const Matrix& a) {
  if (a.rows() != a.cols()) fail(Errc::NotSymmetric, "non-square matrix " + shape(a));
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

bool all_finite(const Matrix& a) noexcept {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double v) { return std::isfinite(v); });
}

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
      col_idx_.size() != values_.size()) {
    fail(Errc::ShapeMismatch, "inconsistent CSR arrays");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r] > row_ptr_[r + 1]) fail(Errc::ShapeMismatch, "CSR row pointers not monotone");
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_) fail(Errc::IndexOutOfRange, "CSR column index out of range");
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1])
        fail(Errc::ShapeMismatch, "CSR columns not strictly ascending");
    }
  }
}

CsrMatrix CsrMatrix::from_dense(const Matrix& a, double drop_tol) {
  std::vector<std::size_t> ptr{0};
  std::vector<std::size_t> idx;
  std::vector<double> val;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) > drop_tol) {
        idx.push_back(j);
        val.push_back(a(i, j));
      }
    }
    ptr.push_back(idx.size());
  }
  return CsrMatrix(a.rows(), a.cols(), std::move(ptr), std::move(idx), std::move(val));
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  auto first = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  auto last = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  auto it = std::lower_bound(first, last, c);
  if (it == last || *it != c) return 0.0;
  return values_[static_cast<std::size_t>(it - col_idx_.begin())];
}

Matrix CsrMatrix::to_dense() const {
  Matrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) m(r, col_idx_[k]) = values_[k];
  return m;
}

Matrix CsrMatrix::multiply(const Matrix& x) const {
  if (x.rows() != cols_) {
    fail(Errc::DimMismatch, "spmm " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                " * " + shape(x));
  }
  Matrix y(rows_, x.cols());
  parallel_for(rows_, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      auto out = y.row(r);
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        double v = values_[k];
        auto xrow = x.row(col_idx_[k]);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += v * xrow[j];
      }
    }
  });
  return y;
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) fail(Errc::DimMismatch, "spmv dimension mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
  return y;
}

}  // namespace hgnn
