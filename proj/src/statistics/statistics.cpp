#include "hgks/statistics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <utility>

#include "hgks/common.hpp"

namespace hgks {

namespace {

// Fourth-order central first difference per unit index.
inline double d4(double m2, double m1, double p1, double p2) { return (8 * (p1 - m1) - (p2 - m2)) / 12; }

}  // namespace

template <class T>
std::vector<double> volume_integral_rows(const Field<T>& q, const Mesh& mesh, const GasModel& gm) {
  const Extent e = q.extent();
  std::vector<double> rows(static_cast<std::size_t>(e.nx) * kVolumeColumns, 0.0);
  const double sx = 1 / mesh.dx(), sz = 1 / mesh.dz();
  const auto vel = [&](int c, int i, int j, int k) {
    return static_cast<double>(q(c, i, j, k)) / static_cast<double>(q(0, i, j, k));
  };
  for (int i = 0; i < e.nx; ++i) {
    double* r = rows.data() + static_cast<std::size_t>(i) * kVolumeColumns;
    for (int j = 0; j < e.ny; ++j) {
      const double sy = mesh.index_scale((j + 0.5) / e.ny);
      double acc[kVolumeColumns] = {};
      for (int k = 0; k < e.nz; ++k) {
        double g[3][3];  // g[a][b] = d U_a / d x_b
        for (int a = 0; a < 3; ++a) {
          const int c = a + 1;
          g[a][0] = d4(vel(c, i - 2, j, k), vel(c, i - 1, j, k), vel(c, i + 1, j, k), vel(c, i + 2, j, k)) * sx;
          g[a][1] = d4(vel(c, i, j - 2, k), vel(c, i, j - 1, k), vel(c, i, j + 1, k), vel(c, i, j + 2, k)) * sy;
          g[a][2] = d4(vel(c, i, j, k - 2), vel(c, i, j, k - 1), vel(c, i, j, k + 1), vel(c, i, j, k + 2)) * sz;
        }
        const double wx = g[2][1] - g[1][2], wy = g[0][2] - g[2][0], wz = g[1][0] - g[0][1];
        const double w2 = wx * wx + wy * wy + wz * wz;
        const double div = g[0][0] + g[1][1] + g[2][2];
        const auto s = q.get(i, j, k);
        const auto w = cons_to_prim(ConsState<double>{s[0], s[1], s[2], s[3], s[4]}, gm);
        const double mu = viscosity(w.p / w.rho, gm);
        acc[kKinetic] += 0.5 * w.rho * (w.U * w.U + w.V * w.V + w.W * w.W);
        acc[kVorticity] += mu * w2;
        acc[kDilatation] += mu * div * div;
        acc[kEnstrophy] += 0.5 * w.rho * w2;
        acc[kMass] += w.rho;
      }
      const double vol = mesh.volume(j);
      for (int n = 0; n < kVolumeColumns; ++n) r[n] += acc[n] * vol;
    }
  }
  return rows;
}

VolumeIntegrals volume_integrals(const std::vector<double>& totals, const Mesh& mesh, double rho0) {
  if (totals.size() != kVolumeColumns) throw ConfigError("volume integrals need one total per column");
  const double omega = mesh.domain_volume();
  VolumeIntegrals v;
  v.Ek = totals[kKinetic] / (rho0 * omega);
  v.eps_vort = totals[kVorticity] / (rho0 * omega);
  v.eps_dil = 4.0 / 3.0 * totals[kDilatation] / (rho0 * omega);
  v.enstrophy = totals[kEnstrophy] / omega;
  v.mass = totals[kMass];
  return v;
}

void dissipation_rate(std::vector<TimeSeriesRecord>& s) {
  const std::size_t n = s.size();
  for (std::size_t i = 1; i < n; ++i)
    if (!(s[i].t > s[i - 1].t)) throw ConfigError("time series must be strictly increasing in t");
  if (n < 2) {
    for (auto& r : s) r.eps_Ek = 0;
    return;
  }
  if (n == 2) {
    const double d = -(s[1].Ek - s[0].Ek) / (s[1].t - s[0].t);
    s[0].eps_Ek = s[1].eps_Ek = d;
    return;
  }
  // Derivative at x of the parabola through samples i0, i0 + 1, i0 + 2.
  const auto deriv = [&](std::size_t i0, double x) {
    const double x0 = s[i0].t, x1 = s[i0 + 1].t, x2 = s[i0 + 2].t;
    const double f0 = s[i0].Ek, f1 = s[i0 + 1].Ek, f2 = s[i0 + 2].Ek;
    return f0 * ((x - x1) + (x - x2)) / ((x0 - x1) * (x0 - x2)) + f1 * ((x - x0) + (x - x2)) / ((x1 - x0) * (x1 - x2)) +
           f2 * ((x - x0) + (x - x1)) / ((x2 - x0) * (x2 - x1));
  };
  s[0].eps_Ek = -deriv(0, s[0].t);
  for (std::size_t i = 1; i + 1 < n; ++i) s[i].eps_Ek = -deriv(i - 1, s[i].t);
  s[n - 1].eps_Ek = -deriv(n - 3, s[n - 1].t);
}

template <class T>
std::vector<double> plane_moment_rows(const Field<T>& q, const GasModel& gm) {
  const Extent e = q.extent();
  const std::size_t width = static_cast<std::size_t>(e.ny) * kPlaneMoments;
  std::vector<double> rows(static_cast<std::size_t>(e.nx) * width, 0.0);
  for (int i = 0; i < e.nx; ++i)
    for (int j = 0; j < e.ny; ++j) {
      double* r = rows.data() + i * width + static_cast<std::size_t>(j) * kPlaneMoments;
      for (int k = 0; k < e.nz; ++k) {
        const auto s = q.get(i, j, k);
        const auto w = cons_to_prim(ConsState<double>{s[0], s[1], s[2], s[3], s[4]}, gm, CellIndex{i, j, k});
        const double c = sound_speed(w.rho, w.p, gm.gamma);
        const double M = std::sqrt(w.U * w.U + w.V * w.V + w.W * w.W) / c;
        r[kRho] += w.rho;
        r[kU] += w.U;
        r[kV] += w.V;
        r[kW] += w.W;
        r[kT] += w.p / w.rho;
        r[kP] += w.p;
        r[kUU] += w.U * w.U;
        r[kVV] += w.V * w.V;
        r[kWW] += w.W * w.W;
        r[kRhoU] += w.rho * w.U;
        r[kRhoV] += w.rho * w.V;
        r[kRhoUV] += w.rho * w.U * w.V;
        r[kC] += c;
        r[kMach] += M;
        r[kMach2] += M * M;
      }
    }
  return rows;
}

void PlaneAccumulator::add(const std::vector<double>& totals, double points) {
  if (totals.size() != sums_.size()) throw ConfigError("plane totals do not match the accumulator rows");
  for (std::size_t n = 0; n < sums_.size(); ++n) sums_[n] += totals[n];
  weight_ += points;
  ++samples_;
}

void PlaneAccumulator::restore(std::vector<double> sums, double weight, long samples) {
  if (sums.size() != sums_.size()) throw ConfigError("plane statistics do not match the mesh");
  sums_ = std::move(sums);
  weight_ = weight;
  samples_ = samples;
}

PlaneProfile PlaneAccumulator::profile(const Mesh& mesh) const {
  if (samples_ == 0) throw ConfigError("plane statistics need at least one sample");
  PlaneProfile p;
  p.samples = samples_;
  const auto rms = [](double mean_sq, double mean) { return std::sqrt(std::max(0.0, mean_sq - mean * mean)); };
  for (int j = 0; j < ny_; ++j) {
    const double* s = sums_.data() + static_cast<std::size_t>(j) * kPlaneMoments;
    double m[kPlaneMoments];
    for (int n = 0; n < kPlaneMoments; ++n) m[n] = s[n] / weight_;
    p.y.push_back(mesh.y_center(j));
    p.rho.push_back(m[kRho]);
    p.U.push_back(m[kU]);
    p.V.push_back(m[kV]);
    p.W.push_back(m[kW]);
    p.T.push_back(m[kT]);
    p.p.push_back(m[kP]);
    const double u = rms(m[kUU], m[kU]), v = rms(m[kVV], m[kV]), w = rms(m[kWW], m[kW]);
    p.U_rms.push_back(u);
    p.V_rms.push_back(v);
    p.W_rms.push_back(w);
    p.uv.push_back(m[kRhoUV] - m[kV] * m[kRhoU] - m[kU] * m[kRhoV] + m[kRho] * m[kU] * m[kV]);
    p.M_rms.push_back(rms(m[kMach2], m[kMach]));
    p.M_t.push_back(std::sqrt(u * u + v * v + w * w) / m[kC]);
  }
  return p;
}

namespace {

// Derivative at x of the polynomial through (xs[n], fs[n]).
double lagrange_derivative(const double* xs, const double* fs, int n, double x) {
  double d = 0;
  for (int a = 0; a < n; ++a) {
    double sum = 0;
    for (int b = 0; b < n; ++b) {
      if (b == a) continue;
      double prod = 1 / (xs[a] - xs[b]);
      for (int c = 0; c < n; ++c)
        if (c != a && c != b) prod *= (x - xs[c]) / (xs[a] - xs[c]);
      sum += prod;
    }
    d += fs[a] * sum;
  }
  return d;
}

double lagrange_value(const double* xs, const double* fs, int n, double x) {
  double v = 0;
  for (int a = 0; a < n; ++a) {
    double l = 1;
    for (int b = 0; b < n; ++b)
      if (b != a) l *= (x - xs[b]) / (xs[a] - xs[b]);
    v += fs[a] * l;
  }
  return v;
}

}  // namespace

WallUnits wall_units(const PlaneProfile& prof, const Mesh& mesh, const GasModel& gm, double T_wall) {
  const int ny = static_cast<int>(prof.y.size());
  if (ny < 8) throw ConfigError("wall units need at least eight rows");
  const double y_lo = mesh.y_face(0), y_hi = mesh.y_face(ny);
  double xs[5], fs[5];
  xs[0] = y_lo;
  fs[0] = 0;
  for (int n = 0; n < 4; ++n) {
    xs[n + 1] = prof.y[n];
    fs[n + 1] = prof.U[n];
  }
  const double d_lo = lagrange_derivative(xs, fs, 5, y_lo);
  double rho_lo = lagrange_value(xs + 1, prof.rho.data(), 4, y_lo);
  xs[0] = y_hi;
  for (int n = 0; n < 4; ++n) {
    xs[n + 1] = prof.y[ny - 1 - n];
    fs[n + 1] = prof.U[ny - 1 - n];
  }
  const double d_hi = -lagrange_derivative(xs, fs, 5, y_hi);
  double rr[4];
  for (int n = 0; n < 4; ++n) rr[n] = prof.rho[ny - 1 - n];
  const double rho_hi = lagrange_value(xs + 1, rr, 4, y_hi);

  WallUnits wu;
  wu.mu_w = viscosity(T_wall, gm);
  wu.tau_w = wu.mu_w * 0.5 * (d_lo + d_hi);
  wu.rho_w = 0.5 * (rho_lo + rho_hi);
  if (!(wu.tau_w > 0) || !(wu.rho_w > 0)) return wu;
  wu.valid = true;
  wu.u_tau = std::sqrt(wu.tau_w / wu.rho_w);
  const double unit = wu.rho_w * wu.u_tau / wu.mu_w;
  wu.re_tau = unit * 0.5 * (y_hi - y_lo);
  std::vector<double> rho_half;
  for (int j = 0; j < ny / 2; ++j) {
    const int jm = ny - 1 - j;
    wu.y_plus.push_back(0.5 * ((prof.y[j] - y_lo) + (y_hi - prof.y[jm])) * unit);
    wu.U_plus.push_back(0.5 * (prof.U[j] + prof.U[jm]) / wu.u_tau);
    rho_half.push_back(0.5 * (prof.rho[j] + prof.rho[jm]));
  }
  wu.U_plus_vd = van_driest(wu.U_plus, rho_half, wu.rho_w);
  return wu;
}

std::vector<double> van_driest(const std::vector<double>& U_plus, const std::vector<double>& rho, double rho_w) {
  if (U_plus.size() != rho.size()) throw ConfigError("van Driest transform needs matching profiles");
  std::vector<double> out(U_plus.size());
  double acc = 0, u_prev = 0, f_prev = 1;
  for (std::size_t j = 0; j < U_plus.size(); ++j) {
    const double f = std::sqrt(rho[j] / rho_w);
    acc += 0.5 * (f + f_prev) * (U_plus[j] - u_prev);
    out[j] = acc;
    u_prev = U_plus[j];
    f_prev = f;
  }
  return out;
}

LogLawFit fit_log_law(const std::vector<double>& y_plus, const std::vector<double>& U_plus, double lo, double hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t j = 0; j < y_plus.size() && j < U_plus.size(); ++j) {
    if (y_plus[j] < lo || y_plus[j] > hi) continue;
    const double x = std::log(y_plus[j]);
    sx += x;
    sy += U_plus[j];
    sxx += x * x;
    sxy += x * U_plus[j];
    ++n;
  }
  if (n < 2) throw ConfigError("log-law fit needs at least two points in range");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  LogLawFit f;
  f.kappa = 1 / slope;
  f.B = (sy - slope * sx) / n;
  f.points = n;
  return f;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_time_series_csv(std::ostream& os, const std::vector<TimeSeriesRecord>& series) {
  os << "t,Ek,eps_Ek,eps_com,enstrophy,mass_flux,force\n";
  for (const auto& r : series)
    os << format_double(r.t) << ',' << format_double(r.Ek) << ',' << format_double(r.eps_Ek) << ','
       << format_double(r.eps_com) << ',' << format_double(r.enstrophy) << ',' << format_double(r.mass_flux) << ','
       << format_double(r.force) << '\n';
}

void write_profile_csv(std::ostream& os, const PlaneProfile& p, const WallUnits* wu) {
  os << "y,y_plus,rho,U,V,W,T,p,U_rms,V_rms,W_rms,rho_uv,rho_uv_over_tau_w,M_rms,M_t,U_plus,U_plus_vd\n";
  const bool w = wu != nullptr && wu->valid;
  const std::size_t half = w ? wu->y_plus.size() : 0;
  for (std::size_t j = 0; j < p.y.size(); ++j) {
    const bool h = j < half;
    os << format_double(p.y[j]) << ',' << (h ? format_double(wu->y_plus[j]) : "") << ',' << format_double(p.rho[j])
       << ',' << format_double(p.U[j]) << ',' << format_double(p.V[j]) << ',' << format_double(p.W[j]) << ','
       << format_double(p.T[j]) << ',' << format_double(p.p[j]) << ',' << format_double(p.U_rms[j]) << ','
       << format_double(p.V_rms[j]) << ',' << format_double(p.W_rms[j]) << ',' << format_double(p.uv[j]) << ','
       << (w ? format_double(-p.uv[j] / wu->tau_w) : "") << ',' << format_double(p.M_rms[j]) << ','
       << format_double(p.M_t[j]) << ',' << (h ? format_double(wu->U_plus[j]) : "") << ','
       << (h ? format_double(wu->U_plus_vd[j]) : "") << '\n';
  }
}

template std::vector<double> volume_integral_rows<float>(const Field<float>&, const Mesh&, const GasModel&);
template std::vector<double> volume_integral_rows<double>(const Field<double>&, const Mesh&, const GasModel&);
template std::vector<double> plane_moment_rows<float>(const Field<float>&, const GasModel&);
template std::vector<double> plane_moment_rows<double>(const Field<double>&, const GasModel&);

}  // namespace hgks
