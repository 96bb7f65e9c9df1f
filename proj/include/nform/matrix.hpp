#pragma once

#include "nform/rational.hpp"

#include <optional>
#include <vector>

namespace nform {

// Dense exact rational matrix, row-major.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols);

  static QMatrix identity(std::size_t n);
  static QMatrix from_columns(std::size_t rows, const std::vector<std::vector<Rational>>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<Rational> column(std::size_t c) const;
  QMatrix transpose() const;
  QMatrix select_columns(const std::vector<std::size_t>& idx) const;
  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  bool is_zero() const;

  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

// Row echelon form computed by fraction-free (Bareiss) elimination on the
// matrix with each row scaled to integers. Pivot columns are the
// lexicographically first maximal independent set of columns.
struct Echelon {
  std::vector<std::vector<Integer>> rows;  // only the nonzero rows
  std::vector<std::size_t> pivots;         // pivot column of each row
  std::size_t cols = 0;
};

Echelon echelon_form(const QMatrix& m);

std::size_t rank(const QMatrix& m);

// Basis of the null space; one vector per non-pivot column with that
// coordinate set to 1 and the other free coordinates set to 0.
std::vector<std::vector<Rational>> kernel(const QMatrix& m);

// Solves m x = b with every free coordinate set to zero; nullopt if the
// system is inconsistent.
std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b);

// Inverse of a square nonsingular matrix; throws std::domain_error if singular.
QMatrix inverse(const QMatrix& m);

}  // namespace nform
