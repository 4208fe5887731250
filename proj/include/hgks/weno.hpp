#pragma once

#include <array>

#include "hgks/common.hpp"
#include "hgks/kernels.hpp"

namespace hgks {

/// Five consecutive cell averages centred on cell 2.
using Stencil = std::array<double, 5>;

/// Five consecutive conservative-state averages and their spacing.
struct Stencil5 {
  std::array<Vec5<double>, 5> cells{};
  double spacing = 1;
};

/// Value at the right edge of the centre cell (the left state of the face
/// above it).
double weno5_edge(const Stencil& s, WenoKind kind = WenoKind::z);

/// Side::left gives the left state of the face at the upper edge of the centre
/// cell, Side::right the right state of the face at its lower edge.
Vec5<double> weno5_face_value(const Stencil5& s, Side side, WenoKind kind = WenoKind::z);

/// d/dx of the linear quartic reconstruction at the upper edge of the centre
/// cell (in units of one cell width).
double edge_derivative(const Stencil& s);

/// Nonlinear WENO weights of the three candidate stencils at the upper edge.
std::array<double, 3> weno5_weights(const Stencil& s, WenoKind kind = WenoKind::z);

/// Two-point Gauss rule on [-1/2, 1/2] and the 2x2 tensor rule on a face.
struct QuadratureRule {
  std::array<double, 2> points{};
  std::array<double, 2> weights{};
  static QuadratureRule gauss2();
};

/// Value at the upper (or lower) Gauss point of the centre cell.
double gauss_point_value(const Stencil& s, bool upper, bool nonlinear, WenoKind kind = WenoKind::z);

/// d/dx at the upper (or lower) Gauss point, one cell width units.
double gauss_point_derivative(const Stencil& s, bool upper);

}  // namespace hgks
