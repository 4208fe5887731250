#include "hgks/boundary.hpp"

#include <algorithm>

namespace hgks {

namespace {

template <class T>
void wall_ghost(Field<T>& q, int i, int jg, int js, int k, double T_wall, double gamma) {
  const double rho = q(0, i, js, k);
  const double u = q(1, i, js, k) / rho, v = q(2, i, js, k) / rho, w = q(3, i, js, k) / rho;
  const double p = (gamma - 1) * (q(4, i, js, k) - 0.5 * rho * (u * u + v * v + w * w));
  const double tg = 2 * T_wall - p / rho;
  const double rg = p / tg;
  q(0, i, jg, k) = static_cast<T>(rg);
  q(1, i, jg, k) = static_cast<T>(-rg * u);
  q(2, i, jg, k) = static_cast<T>(-rg * v);
  q(3, i, jg, k) = static_cast<T>(-rg * w);
  q(4, i, jg, k) = static_cast<T>(p / (gamma - 1) + 0.5 * rg * (u * u + v * v + w * w));
}

}  // namespace

template <class T>
void fill_yz_ghosts(Field<T>& q, const BoundarySpec& bc, const GasModel& gm) {
  const auto e = q.extent();
  constexpr int G = kGhost;
  for (int i = 0; i < e.nx; ++i) {
    for (int m = 0; m < G; ++m) {
      for (int k = 0; k < e.nz; ++k) {
        if (bc.y == YBoundary::wall) {
          wall_ghost(q, i, -1 - m, m, k, bc.T_wall, gm.gamma);
          wall_ghost(q, i, e.ny + m, e.ny - 1 - m, k, bc.T_wall, gm.gamma);
        } else {
          for (int c = 0; c < 5; ++c) {
            q(c, i, -1 - m, k) = q(c, i, e.ny - 1 - m, k);
            q(c, i, e.ny + m, k) = q(c, i, m, k);
          }
        }
      }
    }
    for (int j = -G; j < e.ny + G; ++j)
      for (int c = 0; c < 5; ++c)
        for (int m = 0; m < G; ++m) {
          q(c, i, j, -1 - m) = q(c, i, j, e.nz - 1 - m);
          q(c, i, j, e.nz + m) = q(c, i, j, m);
        }
  }
}

template <class T>
void fill_x_periodic(Field<T>& q) {
  const auto e = q.extent();
  const std::ptrdiff_t plane = q.stride_x();
  for (int c = 0; c < 5; ++c) {
    T* d = q.data(c);
    for (int m = 0; m < kGhost; ++m) {
      std::copy_n(d + q.index(e.nx - 1 - m, -kGhost, -kGhost), plane, d + q.index(-1 - m, -kGhost, -kGhost));
      std::copy_n(d + q.index(m, -kGhost, -kGhost), plane, d + q.index(e.nx + m, -kGhost, -kGhost));
    }
  }
}

template void fill_yz_ghosts<float>(Field<float>&, const BoundarySpec&, const GasModel&);
template void fill_yz_ghosts<double>(Field<double>&, const BoundarySpec&, const GasModel&);
template void fill_x_periodic<float>(Field<float>&);
template void fill_x_periodic<double>(Field<double>&);

}  // namespace hgks
