#include "hgks/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "hgks/common.hpp"

namespace hgks {

Mesh Mesh::periodic_box(int n, double x0, double length) {
  Mesh m;
  m.nx = m.ny = m.nz = n;
  m.x0 = m.y0 = m.z0 = x0;
  m.lx = m.ly = m.lz = length;
  m.ymap = YMap::uniform;
  return m;
}

Mesh Mesh::channel(int nx, int ny, int nz, double H, double bg) {
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.nz = nz;
  m.x0 = 0;
  m.lx = 2 * M_PI * H;
  m.z0 = 0;
  m.lz = M_PI * H;
  m.ymap = YMap::tanh;
  m.H = H;
  m.bg = bg;
  return m;
}

double Mesh::y_of(double s) const {
  if (ymap == YMap::uniform) return y0 + ly * s;
  return H * std::tanh(bg * (2 * s - 1)) / std::tanh(bg);
}

double Mesh::dyds(double s) const {
  if (ymap == YMap::uniform) return ly;
  const double c = std::cosh(bg * (2 * s - 1));
  return H * 2 * bg / (c * c * std::tanh(bg));
}

void Mesh::validate() const {
  if (nx < 1 || ny < 1 || nz < 1) throw ConfigError("mesh needs at least one cell per direction");
  if (!(lx > 0) || !(lz > 0)) throw ConfigError("mesh extents must be positive");
  if (ymap == YMap::uniform && !(ly > 0)) throw ConfigError("mesh extents must be positive");
  if (ymap == YMap::tanh && (!(bg > 0) || !(H > 0))) throw ConfigError("stretching needs b_g > 0 and H > 0");
}

WallResolution wall_resolution(const Mesh& mesh, double re_tau) {
  WallResolution r;
  const double unit = re_tau / mesh.H;
  r.dy_min = r.dy_max = mesh.dy(0);
  for (int j = 1; j < mesh.ny; ++j) {
    r.dy_min = std::min(r.dy_min, mesh.dy(j));
    r.dy_max = std::max(r.dy_max, mesh.dy(j));
  }
  r.dy_min *= unit;
  r.dy_max *= unit;
  r.dx = mesh.dx() * unit;
  r.dz = mesh.dz() * unit;
  return r;
}

YGeometry::YGeometry(const Mesh& mesh) {
  const int ny = mesh.ny;
  const double g = 0.5 / std::sqrt(3.0);
  inv_dy.resize(ny);
  face_scale.resize(ny + 1);
  gauss_scale.resize(2 * ny);
  gauss_weight.resize(2 * ny);
  for (int j = 0; j <= ny; ++j) face_scale[j] = mesh.index_scale(static_cast<double>(j) / ny);
  for (int j = 0; j < ny; ++j) {
    const double dy = mesh.dy(j);
    inv_dy[j] = 1.0 / dy;
    if (mesh.ymap == YMap::uniform) {
      gauss_scale[2 * j] = gauss_scale[2 * j + 1] = ny / mesh.ly;
      gauss_weight[2 * j] = gauss_weight[2 * j + 1] = 0.5;
      continue;
    }
    for (int side = 0; side < 2; ++side) {
      const double s = (j + 0.5 + (side == 0 ? -g : g)) / ny;
      gauss_scale[2 * j + side] = mesh.index_scale(s);
      gauss_weight[2 * j + side] = 0.5 * mesh.dyds(s) / (ny * dy);
    }
  }
}

}  // namespace hgks
