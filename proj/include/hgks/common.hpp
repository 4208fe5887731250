#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hgks {

/// Five-component vector of conservative quantities (rho, rhoU, rhoV, rhoW, rhoE)
/// or of anything shaped like them (fluxes, gradients, slope coefficients).
template <class T>
using Vec5 = std::array<T, 5>;

inline constexpr int kGhost = 3;

enum class Axis : int { x = 0, y = 1, z = 2 };

enum class Side : int { left = 0, right = 1 };

enum class Precision : int { fp32 = 32, fp64 = 64 };

/// Global cell index, used to tag errors raised deep inside kernels.
struct CellIndex {
  std::int64_t i = -1;
  std::int64_t j = -1;
  std::int64_t k = -1;
};

std::string to_string(const CellIndex& c);

class InvalidStateError : public std::runtime_error {
 public:
  InvalidStateError(const std::string& what, CellIndex where = {});
  const CellIndex& where() const noexcept { return where_; }

 private:
  CellIndex where_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
Vec5<T> operator+(const Vec5<T>& a, const Vec5<T>& b) {
  Vec5<T> r;
  for (int n = 0; n < 5; ++n) r[n] = a[n] + b[n];
  return r;
}

template <class T>
Vec5<T> operator-(const Vec5<T>& a, const Vec5<T>& b) {
  Vec5<T> r;
  for (int n = 0; n < 5; ++n) r[n] = a[n] - b[n];
  return r;
}

template <class T>
Vec5<T> operator*(T s, const Vec5<T>& a) {
  Vec5<T> r;
  for (int n = 0; n < 5; ++n) r[n] = s * a[n];
  return r;
}

}  // namespace hgks
