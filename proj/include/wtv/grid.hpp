#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "wtv/errors.hpp"

namespace wtv {

/// Square n x n grid stored row-major: pixel (i, j) lives at k = i * n + j
/// (0-based rows and columns).
template <class T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  explicit Grid(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}
  Grid(std::size_t n, std::vector<T> data) : n_(n), data_(std::move(data)) {
    if (data_.size() != n_ * n_) {
      throw DimensionError("grid payload length does not match n*n");
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
  T& operator[](std::size_t k) noexcept { return data_[k]; }
  const T& operator[](std::size_t k) const noexcept { return data_[k]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  Grid& operator+=(const Grid& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Grid& operator-=(const Grid& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Grid& operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  void check_same(const Grid& o) const {
    if (o.n_ != n_) throw DimensionError("grid side lengths differ");
  }

  std::size_t n_ = 0;
  std::vector<T> data_;
};

using Image = Grid<double>;
using ComplexGrid = Grid<std::complex<double>>;

template <class T>
Grid<T> operator+(Grid<T> a, const Grid<T>& b) { return a += b; }
template <class T>
Grid<T> operator-(Grid<T> a, const Grid<T>& b) { return a -= b; }
template <class T>
Grid<T> operator*(T s, Grid<T> a) { return a *= s; }

template <class A, class B>
void require_same_n(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (a.n() != b.n()) throw DimensionError(std::string(what) + ": side lengths differ");
}

double dot(const Image& a, const Image& b);
/// Real part of the Hermitian inner product sum(a * conj(b)).
double dot(const ComplexGrid& a, const ComplexGrid& b);
double norm2(const Image& a);
double norm2(const ComplexGrid& a);
double norm1(const Image& a);
double max_value(const Image& a);
bool all_finite(const Image& a);
bool all_finite(const ComplexGrid& a);
/// Euclidean distance ||a - b||.
double distance(const Image& a, const Image& b);

/// Edge weights for the anisotropic weighted gradient. wx multiplies the
/// horizontal difference u(i,j+1)-u(i,j), wy the vertical one u(i+1,j)-u(i,j).
struct WeightField {
  Image wx;
  Image wy;

  WeightField() = default;
  /// Throws ConfigError unless both grids share n and are strictly positive.
  WeightField(Image wx, Image wy);

  static WeightField uniform(std::size_t n, double value = 1.0);
  std::size_t n() const noexcept { return wx.n(); }
};

struct Gradient {
  Image x;
  Image y;
};

/// Weighted forward differences with a Neumann boundary: the last column of
/// x and the last row of y are zero.
Gradient grad_w(const Image& u, const WeightField& w);
/// Unweighted forward differences (unit weights).
Gradient grad(const Image& u);
void grad_w_into(const Image& u, const WeightField& w, Image& gx, Image& gy);

/// Exact transpose of grad_w: (grad_w^x)^T gx + (grad_w^y)^T gy.
Image div_w(const Image& gx, const Image& gy, const WeightField& w);
void div_w_into(const Image& gx, const Image& gy, const WeightField& w, Image& out);

/// Weighted five-point Laplacian, -(div_w o grad_w). Negative semidefinite.
Image laplacian_w(const Image& u, const WeightField& w);

/// Maximum absolute row sum of the weighted Laplacian,
/// max_k 2 * (sum of the squared weights on the links touching pixel k).
double laplacian_inf_norm(const WeightField& w);

}  // namespace wtv
