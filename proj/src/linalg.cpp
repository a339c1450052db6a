#include "kergen/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace kergen::fp {

unsigned inverse(unsigned a, unsigned p) {
  a %= p;
  if (a == 0) throw std::domain_error("inverse of zero in F_p");
  // Fermat: a^(p-2)
  unsigned result = 1, base = a, e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return result;
}

Vec zeros(std::size_t n) { return Vec(n, 0); }

Vec unit(std::size_t n, std::size_t i) {
  Vec v(n, 0);
  v[i] = 1;
  return v;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](std::uint8_t x) { return x == 0; });
}

void axpy(Vec& y, unsigned a, const Vec& x, unsigned p) {
  a %= p;
  if (a == 0) return;
  const std::size_t n = std::min(y.size(), x.size());
  if (p == 2) {
    for (std::size_t i = 0; i < n; ++i) y[i] ^= x[i];
    return;
  }
  std::uint8_t table[256];
  for (unsigned v = 0; v < p; ++v) table[v] = static_cast<std::uint8_t>(a * v % p);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned s = y[i] + table[x[i]];
    y[i] = static_cast<std::uint8_t>(s >= p ? s - p : s);
  }
}

Vec add(const Vec& a, const Vec& b, unsigned p) {
  Vec r = a;
  axpy(r, 1, b, p);
  return r;
}

Vec sub(const Vec& a, const Vec& b, unsigned p) {
  Vec r = a;
  axpy(r, p - 1, b, p);
  return r;
}

Vec scale(const Vec& a, unsigned s, unsigned p) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<std::uint8_t>(a[i] * (s % p) % p);
  return r;
}

unsigned dot(const Vec& a, const Vec& b, unsigned p) {
  unsigned s = 0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) s = (s + a[i] * b[i]) % p;
  return s;
}

Mat transpose(const Mat& a, std::size_t ncols) {
  Mat t(ncols, Vec(a.size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j) t[j][i] = a[i][j];
  return t;
}

Mat multiply(const Mat& a, const Mat& b, std::size_t bcols, unsigned p) {
  Mat c(a.size(), Vec(bcols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k)
      if (a[i][k]) axpy(c[i], a[i][k], b[k], p);
  return c;
}

Vec apply(const Mat& a, const Vec& x, unsigned p) {
  Vec y(a.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) y[i] = static_cast<std::uint8_t>(dot(a[i], x, p));
  return y;
}

Mat identity(std::size_t n) {
  Mat m(n, Vec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

namespace {

// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(Mat& m, std::size_t ncols, unsigned p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
    std::size_t sel = r;
    while (sel < m.size() && m[sel][c] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[r], m[sel]);
    unsigned s = inverse(m[r][c], p);
    m[r] = scale(m[r], s, p);
    for (std::size_t i = 0; i < m.size(); ++i)
      if (i != r && m[i][c]) axpy(m[i], p - m[i][c], m[r], p);
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

std::size_t rank(const Mat& rows, unsigned p) {
  if (rows.empty()) return 0;
  Echelon e(rows.front().size(), p);
  for (const auto& r : rows) e.insert(r);
  return e.rank();
}

Mat nullspace(const Mat& a, std::size_t ncols, unsigned p) {
  Mat m = a;
  for (auto& row : m) row.resize(ncols, 0);
  auto pivots = rref(m, ncols, p);
  std::vector<char> is_pivot(ncols, 0);
  for (auto c : pivots) is_pivot[c] = 1;
  Mat basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    Vec x(ncols, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      x[pivots[i]] = static_cast<std::uint8_t>((p - m[i][f]) % p);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<Vec> solve(const Mat& a, std::size_t ncols, const Vec& b, unsigned p) {
  Mat m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    m[i] = a[i];
    m[i].resize(ncols, 0);
    m[i].push_back(b[i]);
  }
  auto pivots = rref(m, ncols + 1, p);
  Vec x(ncols, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == ncols) return std::nullopt;
    x[pivots[i]] = m[i][ncols];
  }
  return x;
}

Mat span_basis(const Mat& vectors, std::size_t dim, unsigned p) {
  Echelon e(dim, p);
  for (const auto& v : vectors) e.insert(v);
  return e.accepted();
}

Mat intersect_spans(const Mat& a, const Mat& b, std::size_t dim, unsigned p) {
  Mat ba = span_basis(a, dim, p), bb = span_basis(b, dim, p);
  if (ba.empty() || bb.empty()) return {};
  const std::size_t k = ba.size(), l = bb.size();
  Mat sys(dim, Vec(k + l, 0));
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < k; ++j) sys[i][j] = ba[j][i];
    for (std::size_t j = 0; j < l; ++j) sys[i][k + j] = static_cast<std::uint8_t>((p - bb[j][i]) % p);
  }
  Mat out;
  for (const auto& x : nullspace(sys, k + l, p)) {
    Vec v(dim, 0);
    for (std::size_t j = 0; j < k; ++j) axpy(v, x[j], ba[j], p);
    out.push_back(v);
  }
  return span_basis(out, dim, p);
}

bool span_contains(const Mat& basis, const Vec& v, std::size_t dim, unsigned p) {
  Echelon e(dim, p);
  for (const auto& b : basis) e.insert(b);
  return e.contains(v);
}

bool spans_equal(const Mat& a, const Mat& b, std::size_t dim, unsigned p) {
  Echelon ea(dim, p), eb(dim, p);
  for (const auto& v : a) ea.insert(v);
  for (const auto& v : b) eb.insert(v);
  if (ea.rank() != eb.rank()) return false;
  for (const auto& v : b)
    if (!ea.contains(v)) return false;
  return true;
}

Echelon::Echelon(std::size_t dim, unsigned p) : dim_(dim), p_(p) {}

Vec Echelon::reduce(Vec v) const {
  v.resize(dim_, 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    unsigned a = v[pivot_[i]];
    if (a) axpy(v, p_ - a, rows_[i], p_);
  }
  return v;
}

bool Echelon::insert(const Vec& v) {
  Vec r = v;
  r.resize(dim_, 0);
  const std::size_t k = accepted_.size();
  Vec c(k + 1, 0);
  c[k] = 1;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    unsigned a = r[pivot_[i]];
    if (!a) continue;
    axpy(r, p_ - a, rows_[i], p_);
    axpy(c, p_ - a, combos_[i], p_);
  }
  auto it = std::find_if(r.begin(), r.end(), [](std::uint8_t x) { return x != 0; });
  if (it == r.end()) return false;
  std::size_t piv = static_cast<std::size_t>(it - r.begin());
  unsigned s = inverse(r[piv], p_);
  rows_.push_back(scale(r, s, p_));
  combos_.push_back(scale(c, s, p_));
  pivot_.push_back(piv);
  accepted_.push_back(v);
  accepted_.back().resize(dim_, 0);
  return true;
}

std::optional<Vec> Echelon::coordinates(const Vec& v) const {
  Vec r = v;
  r.resize(dim_, 0);
  Vec c(accepted_.size(), 0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    unsigned a = r[pivot_[i]];
    if (!a) continue;
    axpy(r, p_ - a, rows_[i], p_);
    axpy(c, a, combos_[i], p_);
  }
  if (!is_zero(r)) return std::nullopt;
  return c;
}

EquationSystem::EquationSystem(std::size_t ncols, unsigned p)
    : ncols_(ncols), p_(p), words_((ncols + 63) / 64), pivot_of_col_(ncols, -1) {}

void EquationSystem::add(const std::vector<std::pair<std::uint32_t, std::uint8_t>>& terms) {
  if (rank() == ncols_) return;
  if (p_ == 2) {
    std::vector<std::uint64_t> row(words_, 0);
    for (auto [c, a] : terms)
      if (a & 1) row[c >> 6] ^= (std::uint64_t{1} << (c & 63));
    for (std::size_t i = 0; i < bit_rows_.size(); ++i) {
      std::size_t pc = pivot_[i];
      if ((row[pc >> 6] >> (pc & 63)) & 1) {
        const auto& src = bit_rows_[i];
        for (std::size_t w = pc >> 6; w < words_; ++w) row[w] ^= src[w];
      }
    }
    for (std::size_t w = 0; w < words_; ++w) {
      if (row[w]) {
        std::size_t pc = w * 64 + static_cast<std::size_t>(__builtin_ctzll(row[w]));
        pivot_of_col_[pc] = static_cast<std::int64_t>(bit_rows_.size());
        pivot_.push_back(pc);
        bit_rows_.push_back(std::move(row));
        return;
      }
    }
    return;
  }
  Vec row(ncols_, 0);
  for (auto [c, a] : terms) row[c] = static_cast<std::uint8_t>((row[c] + a) % p_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    unsigned a = row[pivot_[i]];
    if (a) axpy(row, p_ - a, rows_[i], p_);
  }
  auto it = std::find_if(row.begin(), row.end(), [](std::uint8_t x) { return x != 0; });
  if (it == row.end()) return;
  std::size_t pc = static_cast<std::size_t>(it - row.begin());
  row = scale(row, inverse(row[pc], p_), p_);
  pivot_of_col_[pc] = static_cast<std::int64_t>(rows_.size());
  pivot_.push_back(pc);
  rows_.push_back(std::move(row));
}

std::size_t EquationSystem::rank() const { return pivot_.size(); }

Mat EquationSystem::nullspace() const {
  // Unpack to dense rows, then back-substitute into reduced form.
  Mat rows;
  if (p_ == 2) {
    rows.resize(bit_rows_.size(), Vec(ncols_, 0));
    for (std::size_t i = 0; i < bit_rows_.size(); ++i)
      for (std::size_t c = 0; c < ncols_; ++c) rows[i][c] = (bit_rows_[i][c >> 6] >> (c & 63)) & 1;
  } else {
    rows = rows_;
  }
  for (std::size_t ii = rows.size(); ii-- > 0;) {
    for (std::size_t j = ii + 1; j < rows.size(); ++j) {
      unsigned a = rows[ii][pivot_[j]];
      if (a) axpy(rows[ii], p_ - a, rows[j], p_);
    }
  }
  Mat basis;
  for (std::size_t f = 0; f < ncols_; ++f) {
    if (pivot_of_col_[f] >= 0) continue;
    Vec x(ncols_, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < rows.size(); ++i)
      x[pivot_[i]] = static_cast<std::uint8_t>((p_ - rows[i][f]) % p_);
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace kergen::fp
