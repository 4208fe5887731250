#pragma once

#include <vector>

namespace hgks {

enum class YMap { uniform, tanh };

/// Structured box mesh, uniform in x and z. In y it is either uniform or the
/// image of a uniform computational coordinate s in [0, 1] under
///   y(s) = H tanh(b (2 s - 1)) / tanh(b).
/// Cell j spans s in [j / ny, (j + 1) / ny]; ghost cells continue the map.
struct Mesh {
  int nx = 0, ny = 0, nz = 0;
  double x0 = 0, lx = 1;
  double z0 = 0, lz = 1;
  YMap ymap = YMap::uniform;
  double y0 = 0, ly = 1;  // uniform map
  double H = 1, bg = 2;   // tanh map, y in [-H, H]

  static Mesh periodic_box(int n, double x0, double length);
  static Mesh channel(int nx, int ny, int nz, double H, double bg);

  double dx() const { return lx / nx; }
  double dz() const { return lz / nz; }
  double y_of(double s) const;
  /// dy/ds of the map.
  double dyds(double s) const;
  double y_face(int j) const { return y_of(static_cast<double>(j) / ny); }
  double dy(int j) const { return y_face(j + 1) - y_face(j); }
  double y_center(int j) const { return 0.5 * (y_face(j) + y_face(j + 1)); }
  double x_center(int i) const { return x0 + (i + 0.5) * dx(); }
  double z_center(int k) const { return z0 + (k + 0.5) * dz(); }
  double volume(int j) const { return dx() * dy(j) * dz(); }
  double domain_volume() const { return lx * (y_face(ny) - y_face(0)) * lz; }
  /// Physical derivative per unit computational index at s.
  double index_scale(double s) const { return ny / dyds(s); }

  void validate() const;
};

/// Near-wall resolution in wall units, for a friction Reynolds number
/// Re_tau = rho_w u_tau H / mu_w.
struct WallResolution {
  double dy_min = 0, dy_max = 0, dx = 0, dz = 0;
};
WallResolution wall_resolution(const Mesh& mesh, double re_tau);

/// Per-row geometry used by the flux operator.
struct YGeometry {
  std::vector<double> inv_dy;       // owned cells
  std::vector<double> face_scale;   // faces 0..ny: d/dy per index of s
  std::vector<double> gauss_scale;  // 2 per owned cell (lower, upper)
  std::vector<double> gauss_weight; // 2 per owned cell, summing to 1
  explicit YGeometry(const Mesh& mesh);
};

}  // namespace hgks
