#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

// Dense linear algebra over the prime field F_p (p < 256).
namespace kergen::fp {

using Vec = std::vector<std::uint8_t>;
using Mat = std::vector<Vec>;  // row-major; a map F^n -> F^m is an m x n matrix

unsigned inverse(unsigned a, unsigned p);

Vec zeros(std::size_t n);
Vec unit(std::size_t n, std::size_t i);
bool is_zero(const Vec& v);

// y += a * x
void axpy(Vec& y, unsigned a, const Vec& x, unsigned p);
Vec add(const Vec& a, const Vec& b, unsigned p);
Vec sub(const Vec& a, const Vec& b, unsigned p);
Vec scale(const Vec& a, unsigned s, unsigned p);
unsigned dot(const Vec& a, const Vec& b, unsigned p);

Mat transpose(const Mat& a, std::size_t ncols);
Mat multiply(const Mat& a, const Mat& b, std::size_t bcols, unsigned p);
Vec apply(const Mat& a, const Vec& x, unsigned p);
Mat identity(std::size_t n);

std::size_t rank(const Mat& rows, unsigned p);

// Basis of { x in F^ncols : A x = 0 }.
Mat nullspace(const Mat& a, std::size_t ncols, unsigned p);

// Some x with A x = b, if one exists.
std::optional<Vec> solve(const Mat& a, std::size_t ncols, const Vec& b, unsigned p);

// Basis (as rows) of the span of the given vectors.
Mat span_basis(const Mat& vectors, std::size_t dim, unsigned p);

// Basis of span(a) ∩ span(b), expressed in ambient coordinates.
Mat intersect_spans(const Mat& a, const Mat& b, std::size_t dim, unsigned p);

bool span_contains(const Mat& basis, const Vec& v, std::size_t dim, unsigned p);
bool spans_equal(const Mat& a, const Mat& b, std::size_t dim, unsigned p);

// Incremental row echelon form that remembers how each accepted vector
// was combined, so that coordinates over the accepted vectors can be read off.
class Echelon {
 public:
  Echelon(std::size_t dim, unsigned p);

  // Returns true when v was independent of everything inserted so far.
  bool insert(const Vec& v);
  Vec reduce(Vec v) const;
  bool contains(const Vec& v) const { return is_zero(reduce(v)); }
  // Coefficients of v over the accepted vectors in acceptance order.
  std::optional<Vec> coordinates(const Vec& v) const;

  std::size_t rank() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  unsigned p() const { return p_; }
  const Mat& accepted() const { return accepted_; }

 private:
  std::size_t dim_;
  unsigned p_;
  Mat rows_;                   // reduced rows, rows_[i][pivot_[i]] == 1
  Mat combos_;                 // rows_[i] = sum combos_[i][j] * accepted_[j]
  std::vector<std::size_t> pivot_;
  Mat accepted_;
};

// Homogeneous linear system fed one sparse equation at a time; a bit-packed
// backend is used for p = 2.
class EquationSystem {
 public:
  EquationSystem(std::size_t ncols, unsigned p);
  void add(const std::vector<std::pair<std::uint32_t, std::uint8_t>>& terms);
  std::size_t rank() const;
  Mat nullspace() const;

 private:
  std::size_t ncols_;
  unsigned p_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> bit_rows_;
  Mat rows_;
  std::vector<std::size_t> pivot_;
  std::vector<std::int64_t> pivot_of_col_;
};

}  // namespace kergen::fp
