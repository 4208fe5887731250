#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "hgks/common.hpp"

namespace hgks {

/// Owned cell counts of a block.
struct Extent {
  int nx = 0, ny = 0, nz = 0;
  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny * nz; }
  bool operator==(const Extent&) const = default;
};

/// Five conservative components stored as separate planes, with kGhost ghost
/// layers on every side. k is the fastest index.
template <class T>
class Field {
 public:
  static constexpr int G = kGhost;

  Field() = default;
  explicit Field(Extent e)
      : e_(e),
        sy_(e.nz + 2 * G),
        sx_(static_cast<std::ptrdiff_t>(e.ny + 2 * G) * (e.nz + 2 * G)),
        comp_(static_cast<std::size_t>(e.nx + 2 * G) * sx_),
        data_(5 * comp_, T(0)) {}

  const Extent& extent() const { return e_; }
  std::ptrdiff_t stride_x() const { return sx_; }
  std::ptrdiff_t stride_y() const { return sy_; }
  std::size_t component_size() const { return comp_; }

  std::ptrdiff_t index(int i, int j, int k) const { return (i + G) * sx_ + (j + G) * sy_ + (k + G); }

  T* data(int c) { return data_.data() + c * comp_; }
  const T* data(int c) const { return data_.data() + c * comp_; }

  T& operator()(int c, int i, int j, int k) { return data(c)[index(i, j, k)]; }
  T operator()(int c, int i, int j, int k) const { return data(c)[index(i, j, k)]; }

  Vec5<T> get(int i, int j, int k) const {
    const auto n = index(i, j, k);
    return {data(0)[n], data(1)[n], data(2)[n], data(3)[n], data(4)[n]};
  }
  void set(int i, int j, int k, const Vec5<T>& q) {
    const auto n = index(i, j, k);
    for (int c = 0; c < 5; ++c) data(c)[n] = q[c];
  }

  std::size_t bytes() const { return data_.size() * sizeof(T); }

 private:
  Extent e_;
  std::ptrdiff_t sy_ = 0, sx_ = 0;
  std::size_t comp_ = 0;
  std::vector<T> data_;
};

/// Owned cells only, same component-plane layout without ghosts.
template <class T>
class CellArray {
 public:
  CellArray() = default;
  explicit CellArray(Extent e) : e_(e), comp_(e.cells()), data_(5 * comp_, T(0)) {}

  const Extent& extent() const { return e_; }
  std::size_t component_size() const { return comp_; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * e_.ny + j) * e_.nz + k;
  }
  T* data(int c) { return data_.data() + c * comp_; }
  const T* data(int c) const { return data_.data() + c * comp_; }
  T& operator()(int c, int i, int j, int k) { return data(c)[index(i, j, k)]; }
  T operator()(int c, int i, int j, int k) const { return data(c)[index(i, j, k)]; }
  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }
  std::size_t bytes() const { return data_.size() * sizeof(T); }

 private:
  Extent e_;
  std::size_t comp_ = 0;
  std::vector<T> data_;
};

}  // namespace hgks
