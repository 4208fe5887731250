#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hgks/field.hpp"
#include "hgks/gas.hpp"
#include "hgks/mesh.hpp"

namespace hgks {

// Reductions are written as per-x-plane rows. Summing the rows of all planes
// in global order (Communicator::plane_sums) gives totals that do not depend
// on the worker count.

/// Columns of volume_integral_rows, each already multiplied by the cell volume.
enum VolumeColumn : int { kKinetic = 0, kVorticity, kDilatation, kEnstrophy, kMass, kVolumeColumns };

/// Per owned x-plane: 1/2 rho |U|^2, mu |omega|^2, mu (div U)^2, 1/2 rho |omega|^2
/// and rho, times the cell volume. Velocity gradients are fourth-order central
/// differences in index space with the mesh metric, so two ghost layers of q
/// must be current.
template <class T>
std::vector<double> volume_integral_rows(const Field<T>& q, const Mesh& mesh, const GasModel& gm);

struct VolumeIntegrals {
  double Ek = 0;         // (1 / rho0 Omega) int 1/2 rho U.U
  double eps_vort = 0;   // (1 / rho0 Omega) int mu omega.omega
  double eps_dil = 0;    // (4/3) (1 / rho0 Omega) int mu (div U)^2
  double enstrophy = 0;  // (1 / Omega) int 1/2 rho omega.omega
  double mass = 0;
  double eps_com() const { return eps_vort + eps_dil; }
};

/// Normalises the summed columns.
VolumeIntegrals volume_integrals(const std::vector<double>& totals, const Mesh& mesh, double rho0);

struct TimeSeriesRecord {
  double t = 0;
  double Ek = 0;
  double eps_Ek = 0;  // -dEk/dt, filled by dissipation_rate
  double eps_com = 0;
  double enstrophy = 0;
  double mass_flux = 0;
  double force = 0;
};

/// -dEk/dt at every record: three-point differences on the (possibly
/// non-uniform) sample times, centred inside and one-sided at the ends.
/// Throws ConfigError unless t is strictly increasing.
void dissipation_rate(std::vector<TimeSeriesRecord>& series);

/// Moments accumulated per y-row by plane_moment_rows.
enum PlaneMoment : int {
  kRho = 0, kU, kV, kW, kT, kP,
  kUU, kVV, kWW,
  kRhoU, kRhoV, kRhoUV,
  kC, kMach, kMach2,
  kPlaneMoments
};

/// Per owned x-plane, for every row j: the x-z sums of the PlaneMoment
/// quantities (width ny * kPlaneMoments, row-major in j).
template <class T>
std::vector<double> plane_moment_rows(const Field<T>& q, const GasModel& gm);

struct PlaneProfile {
  std::vector<double> y;
  std::vector<double> rho, U, V, W, T, p;
  std::vector<double> U_rms, V_rms, W_rms;
  std::vector<double> uv;  // <rho U' V'>
  std::vector<double> M_rms, M_t;
  long samples = 0;
};

/// Running x-z-t averages of the channel. Each sample adds the domain totals
/// of plane_moment_rows (already summed over x-planes).
class PlaneAccumulator {
 public:
  PlaneAccumulator() = default;
  explicit PlaneAccumulator(int ny) : ny_(ny), sums_(static_cast<std::size_t>(ny) * kPlaneMoments, 0.0) {}

  /// `points` is the number of cells per plane (nx * nz).
  void add(const std::vector<double>& totals, double points);
  long samples() const { return samples_; }
  /// Throws ConfigError when no sample has been added.
  PlaneProfile profile(const Mesh& mesh) const;

  /// Raw state for checkpoints.
  const std::vector<double>& sums() const { return sums_; }
  double weight() const { return weight_; }
  void restore(std::vector<double> sums, double weight, long samples);

 private:
  int ny_ = 0;
  std::vector<double> sums_;
  double weight_ = 0;
  long samples_ = 0;
};

struct WallUnits {
  bool valid = false;  // false when the wall shear vanishes
  double tau_w = 0, rho_w = 0, mu_w = 0, u_tau = 0;
  double re_tau = 0;
  /// Lower half of the channel, both halves folded together.
  std::vector<double> y_plus, U_plus, U_plus_vd;
};

/// Wall shear from the one-sided fourth-order derivative of <U> at both walls
/// (no-slip value plus four cell centres), averaged; rho_w by cubic
/// extrapolation of <rho>; mu_w from the gas law at T_wall.
WallUnits wall_units(const PlaneProfile& prof, const Mesh& mesh, const GasModel& gm, double T_wall);

/// U_vd(j) = int_0^{U+(j)} sqrt(rho / rho_w) dU+, trapezoidal along the
/// profile starting from the wall (U+ = 0, rho = rho_w).
std::vector<double> van_driest(const std::vector<double>& U_plus, const std::vector<double>& rho, double rho_w);

struct LogLawFit {
  double kappa = 0, B = 0;
  int points = 0;
};

/// Least-squares fit of U+ = ln(y+) / kappa + B over y+ in [lo, hi].
LogLawFit fit_log_law(const std::vector<double>& y_plus, const std::vector<double>& U_plus, double lo, double hi);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_time_series_csv(std::ostream& os, const std::vector<TimeSeriesRecord>& series);
/// One row per cell row j; wall-unit columns are empty when `wu` is null or invalid.
void write_profile_csv(std::ostream& os, const PlaneProfile& prof, const WallUnits* wu);

}  // namespace hgks
