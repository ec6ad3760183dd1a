#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdlib>
#include <initializer_list>
#include <span>
#include <string>

#include "su2kam/errors.hpp"

namespace kam {

inline constexpr int kMaxDim = 3;

/// A frequency vector k in Z^d, d <= kMaxDim. Stored inline; cheap to copy.
class Freq {
 public:
  Freq() = default;
  explicit Freq(int dim) : dim_(dim) { check_dim(dim); }
  Freq(std::initializer_list<int> values) : dim_(static_cast<int>(values.size())) {
    check_dim(dim_);
    std::copy(values.begin(), values.end(), c_.begin());
  }

  static Freq zero(int dim) { return Freq(dim); }
  static Freq scalar(int k) { return Freq{k}; }

  int dim() const { return dim_; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }

  /// |k|_inf, the norm used for every frequency ball.
  int max_norm() const {
    int m = 0;
    for (int i = 0; i < dim_; ++i) m = std::max(m, std::abs(c_[i]));
    return m;
  }
  long long sq_norm() const {
    long long s = 0;
    for (int i = 0; i < dim_; ++i) s += static_cast<long long>(c_[i]) * c_[i];
    return s;
  }
  bool is_zero() const { return max_norm() == 0; }

  /// k mod 2 componentwise, in {0,1}.
  Freq parity() const {
    Freq p(dim_);
    for (int i = 0; i < dim_; ++i) p.c_[i] = ((c_[i] % 2) + 2) % 2;
    return p;
  }

  Freq operator-() const {
    Freq r(dim_);
    for (int i = 0; i < dim_; ++i) r.c_[i] = -c_[i];
    return r;
  }
  Freq& operator+=(const Freq& o) {
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Freq& operator-=(const Freq& o) {
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend Freq operator+(Freq a, const Freq& b) { return a += b; }
  friend Freq operator-(Freq a, const Freq& b) { return a -= b; }

  friend bool operator==(const Freq& a, const Freq& b) {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return false;
    return true;
  }
  friend std::strong_ordering operator<=>(const Freq& a, const Freq& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    for (int i = 0; i < a.dim_; ++i)
      if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

  std::string to_string() const {
    if (dim_ == 1) return std::to_string(c_[0]);
    std::string s = "[";
    for (int i = 0; i < dim_; ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + "]";
  }

 private:
  static void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
      throw PreconditionError("torus dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  }

  std::array<int, kMaxDim> c_{};
  int dim_ = 1;
};

/// k . alpha for a rotation vector alpha of the same dimension.
template <class Real>
Real dot(const Freq& k, std::span<const Real> alpha) {
  Real s = 0;
  for (int i = 0; i < k.dim(); ++i) s += static_cast<Real>(k[i]) * alpha[static_cast<std::size_t>(i)];
  return s;
}

/// The cube {k : |k|_inf <= radius} with a dense row-major linear index.
class FreqBox {
 public:
  FreqBox(int dim, int radius) : dim_(dim), radius_(radius), side_(2 * radius + 1) {
    if (radius < 0) throw PreconditionError("negative frequency radius");
    Freq check(dim);
    size_ = 1;
    for (int i = 0; i < dim; ++i) size_ *= static_cast<std::size_t>(side_);
  }

  int dim() const { return dim_; }
  int radius() const { return radius_; }
  int side() const { return side_; }
  std::size_t size() const { return size_; }

  bool contains(const Freq& k) const { return k.max_norm() <= radius_; }

  std::size_t index(const Freq& k) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim_; ++i) idx = idx * static_cast<std::size_t>(side_) + static_cast<std::size_t>(k[i] + radius_);
    return idx;
  }

  Freq freq(std::size_t idx) const {
    Freq k(dim_);
    for (int i = dim_ - 1; i >= 0; --i) {
      k[i] = static_cast<int>(idx % static_cast<std::size_t>(side_)) - radius_;
      idx /= static_cast<std::size_t>(side_);
    }
    return k;
  }

 private:
  int dim_;
  int radius_;
  int side_;
  std::size_t size_ = 1;
};

}  // namespace kam
