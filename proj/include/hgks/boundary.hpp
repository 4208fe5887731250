#pragma once

#include "hgks/field.hpp"
#include "hgks/gas.hpp"

namespace hgks {

enum class YBoundary { periodic, wall };

struct BoundarySpec {
  YBoundary y = YBoundary::periodic;
  double T_wall = 1.0;  // isothermal no-slip walls at y = -H, H
};

/// Fills the y and z ghost layers of every owned x-slice. Walls mirror the
/// velocity, keep the pressure and set the ghost temperature so that the
/// face average equals T_wall. z is periodic. Depends on interior cells only,
/// so repeated calls leave the field unchanged.
template <class T>
void fill_yz_ghosts(Field<T>& q, const BoundarySpec& bc, const GasModel& gm);

/// Periodic x ghosts of a block that owns the whole x-range (full planes,
/// including their y/z ghosts).
template <class T>
void fill_x_periodic(Field<T>& q);

}  // namespace hgks
