#include "nform/matrix.hpp"

#include <stdexcept>

namespace nform {

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::from_columns(std::size_t rows, const std::vector<std::vector<Rational>>& cols) {
  QMatrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw std::invalid_argument("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

std::vector<Rational> QMatrix::column(std::size_t c) const {
  std::vector<Rational> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

QMatrix QMatrix::select_columns(const std::vector<std::size_t>& idx) const {
  QMatrix out(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    for (std::size_t r = 0; r < rows_; ++r) out(r, j) = (*this)(r, idx[j]);
  return out;
}

std::vector<Rational> QMatrix::apply(const std::vector<Rational>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  std::vector<Rational> out(rows_, Rational(0));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!nform::is_zero((*this)(r, c)) && !nform::is_zero(v[c])) out[r] += (*this)(r, c) * v[c];
  return out;
}

bool QMatrix::is_zero() const {
  for (const auto& x : data_)
    if (!nform::is_zero(x)) return false;
  return true;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product shape mismatch");
  QMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (!is_zero(b(k, j))) out(i, j) += aik * b(k, j);
    }
  return out;
}

namespace {

std::vector<std::vector<Integer>> integer_rows(const QMatrix& m) {
  std::vector<std::vector<Integer>> rows(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Integer l = 1;
    for (std::size_t c = 0; c < m.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c).get_num() * (l / m(r, c).get_den());
  }
  return rows;
}

// Back substitution on an echelon form: pivot unknowns in terms of fixed
// values of the remaining coordinates (rhs column optional).
std::vector<Rational> back_substitute(const Echelon& e, std::vector<Rational> x, const std::vector<Integer>* rhs) {
  for (std::size_t i = e.pivots.size(); i-- > 0;) {
    const auto& row = e.rows[i];
    std::size_t p = e.pivots[i];
    Rational acc = rhs ? Rational((*rhs)[i]) : Rational(0);
    for (std::size_t c = p + 1; c < e.cols; ++c)
      if (row[c] != 0 && !is_zero(x[c])) acc -= Rational(row[c]) * x[c];
    x[p] = acc / Rational(row[p]);
  }
  return x;
}

}  // namespace

Echelon echelon_form(const QMatrix& m) {
  auto a = integer_rows(m);
  const std::size_t nr = a.size();
  const std::size_t nc = m.cols();
  Echelon e;
  e.cols = nc;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < nr; ++c) {
    std::size_t piv = r;
    while (piv < nr && a[piv][c] == 0) ++piv;
    if (piv == nr) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < nr; ++i) {
      for (std::size_t j = c + 1; j < nc; ++j) {
        a[i][j] = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    e.pivots.push_back(c);
    ++r;
  }
  a.resize(r);
  e.rows = std::move(a);
  return e;
}

std::size_t rank(const QMatrix& m) { return echelon_form(m).pivots.size(); }

std::vector<std::vector<Rational>> kernel(const QMatrix& m) {
  Echelon e = echelon_form(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<Rational>> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(m.cols(), Rational(0));
    x[f] = 1;
    out.push_back(back_substitute(e, std::move(x), nullptr));
  }
  return out;
}

std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("rhs length mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  Echelon e = echelon_form(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  std::vector<Integer> rhs;
  rhs.reserve(e.rows.size());
  for (const auto& row : e.rows) rhs.push_back(row[m.cols()]);
  Echelon coeffs = e;
  coeffs.cols = m.cols();
  std::vector<Rational> x(m.cols(), Rational(0));
  return back_substitute(coeffs, std::move(x), &rhs);
}

QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const std::size_t n = m.rows();
  if (rank(m) != n) throw std::domain_error("singular matrix");
  QMatrix out(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> ej(n, Rational(0));
    ej[j] = 1;
    auto x = solve(m, ej);
    if (!x) throw std::domain_error("singular matrix");
    for (std::size_t i = 0; i < n; ++i) out(i, j) = (*x)[i];
  }
  return out;
}

}  // namespace nform
