#include "qinv/linalg.hpp"

#include <algorithm>

namespace qinv {

std::vector<std::size_t> rref(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  Rational tmp;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rational f = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        if (m(row, j) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), m(row, j).get_mpq_t());
        m(i, j) -= tmp;
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(RationalMatrix m) {
  // Forward elimination only.
  std::size_t row = 0;
  Rational tmp;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t sel = row;
    while (sel < m.rows() && m(sel, col) == 0) ++sel;
    if (sel == m.rows()) continue;
    if (sel != row)
      for (std::size_t j = col; j < m.cols(); ++j) std::swap(m(sel, j), m(row, j));
    for (std::size_t i = row + 1; i < m.rows(); ++i) {
      if (m(i, col) == 0) continue;
      Rational f = m(i, col) / m(row, col);
      for (std::size_t j = col; j < m.cols(); ++j) {
        if (m(row, j) == 0) continue;
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), m(row, j).get_mpq_t());
        m(i, j) -= tmp;
      }
    }
    ++row;
  }
  return row;
}

std::vector<std::vector<Rational>> kernel(RationalMatrix m) {
  auto pivots = rref(m);
  std::vector<char> is_pivot(m.cols(), 0);
  for (auto p : pivots) is_pivot[p] = 1;
  std::vector<std::vector<Rational>> out;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(r, free);
    out.push_back(std::move(v));
  }
  return out;
}

namespace {

// a - f * b for sparse rows.
SparseRow axpy(const SparseRow& a, const Rational& f, const SparseRow& b) {
  SparseRow out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  Rational tmp;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), b[j].second.get_mpq_t());
      out.emplace_back(b[j].first, -tmp);
      ++j;
    } else {
      mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), b[j].second.get_mpq_t());
      Rational s = a[i].second - tmp;
      if (s != 0) out.emplace_back(a[i].first, std::move(s));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

SparseRow SparseEliminator::reduce(SparseRow row) const {
  std::size_t k = 0;
  while (k < row.size()) {
    auto it = pivots_.find(row[k].first);
    if (it == pivots_.end()) {
      ++k;
      continue;
    }
    Rational f = row[k].second;
    row = axpy(row, f, it->second);
    // Entries before k are unaffected: pivot rows start at their pivot column.
  }
  return row;
}

bool SparseEliminator::add_row(SparseRow row) {
  std::erase_if(row, [](const auto& e) { return e.second == 0; });
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  row = reduce(std::move(row));
  if (row.empty()) return false;
  // After reduce() no entry sits in a pivot column.
  Rational inv = 1 / row.front().second;
  for (auto& e : row) e.second *= inv;
  std::size_t lead = row.front().first;
  pivots_.emplace(lead, std::move(row));
  return true;
}

std::vector<SparseRow> SparseEliminator::basis() const {
  // Back substitution from the largest pivot down.
  std::map<std::size_t, SparseRow> reduced;
  for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
    SparseRow row = it->second;
    std::size_t k = 1;
    while (k < row.size()) {
      auto r = reduced.find(row[k].first);
      if (r == reduced.end()) {
        ++k;
        continue;
      }
      Rational f = row[k].second;
      row = axpy(row, f, r->second);
    }
    reduced.emplace(it->first, std::move(row));
  }
  std::vector<SparseRow> out;
  out.reserve(reduced.size());
  for (auto& [c, r] : reduced) out.push_back(std::move(r));
  return out;
}

std::vector<SparseRow> SparseEliminator::kernel() const {
  auto rows = basis();
  std::vector<char> is_pivot(cols_, 0);
  for (const auto& r : rows) is_pivot[r.front().first] = 1;
  // Column f of the RREF: pivot row entries at f.
  std::vector<SparseRow> out;
  std::vector<std::vector<std::pair<std::size_t, Rational>>> by_col(cols_);
  for (const auto& r : rows)
    for (std::size_t k = 1; k < r.size(); ++k) by_col[r[k].first].emplace_back(r.front().first, r[k].second);
  for (std::size_t f = 0; f < cols_; ++f) {
    if (is_pivot[f]) continue;
    SparseRow v;
    for (const auto& [pc, val] : by_col[f]) v.emplace_back(pc, -val);
    v.emplace_back(f, Rational(1));
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace qinv
