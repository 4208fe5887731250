#include "hgks/precision_lab.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace hgks {

DivergenceSample field_divergence(const Checkpoint& a, const Checkpoint& b) {
  if (a.precision != Precision::fp32 || b.precision != Precision::fp64)
    throw ConfigError("divergence needs an fp32 and an fp64 field");
  if (!(a.extent == b.extent) || a.field32.size() != b.field64.size())
    throw ConfigError("divergence needs fields of the same resolution");
  DivergenceSample s;
  s.t = a.t;
  const std::size_t n = a.extent.cells();
  if (n == 0) return s;
  double sum = 0;
  for (int c = 0; c < 5; ++c) {
    const float* x = a.field32.data() + c * n;
    const double* y = b.field64.data() + c * n;
    double scale = 0;
    for (std::size_t m = 0; m < n; ++m) scale = std::max(scale, std::abs(y[m]));
    if (scale == 0) scale = 1;
    for (std::size_t m = 0; m < n; ++m) {
      const double d = (static_cast<double>(x[m]) - static_cast<double>(static_cast<float>(y[m]))) / scale;
      sum += d * d;
      s.max = std::max(s.max, std::abs(d));
    }
  }
  s.rms = std::sqrt(sum / (5.0 * static_cast<double>(n)));
  return s;
}

PrecisionReport precision_lab(const RunConfig& c32, const RunConfig& c64, const RunOptions& options) {
  if (c32.precision != Precision::fp32 || c64.precision != Precision::fp64)
    throw ConfigError("precision lab needs one fp32 and one fp64 config");
  RunConfig a = c32, b = c64;
  a.precision = b.precision;
  a.output_dir = b.output_dir;
  if (!(a == b)) throw ConfigError("precision lab configs differ in more than precision and output directory");

  // FP64 snapshots are kept as the double fields; the pair is matched by order
  // of output, and their times must agree.
  std::vector<Checkpoint> ref;
  PrecisionReport rep;
  RunOptions o64 = options;
  o64.restart = nullptr;
  o64.on_output = [&](const Checkpoint& c) { ref.push_back(c); };
  rep.fp64 = run_simulation(c64, o64);

  std::size_t next = 0;
  RunOptions o32 = options;
  o32.restart = nullptr;
  o32.on_output = [&](const Checkpoint& c) {
    if (next >= ref.size()) return;
    const Checkpoint& r = ref[next++];
    if (std::abs(r.t - c.t) > 1e-9 * std::max(1.0, c64.t_end)) return;
    rep.divergence.push_back(field_divergence(c, r));
  };
  rep.fp32 = run_simulation(c32, o32);

  rep.T_fp32 = rep.fp32.wall_seconds;
  rep.T_fp64 = rep.fp64.wall_seconds;
  rep.S_fp = rep.T_fp64 / rep.T_fp32;
  rep.bytes_fp32 = rep.fp32.resident_bytes;
  rep.bytes_fp64 = rep.fp64.resident_bytes;
  rep.R_fp = static_cast<double>(rep.bytes_fp64) / static_cast<double>(rep.bytes_fp32);
  rep.ok = rep.fp32.ok && rep.fp64.ok;
  return rep;
}

PrecisionReport precision_lab(const RunConfig& base, const RunOptions& options) {
  RunConfig a = base, b = base;
  a.precision = Precision::fp32;
  b.precision = Precision::fp64;
  a.output_dir = (std::filesystem::path(base.output_dir) / "fp32").string();
  b.output_dir = (std::filesystem::path(base.output_dir) / "fp64").string();
  PrecisionReport r = precision_lab(a, b, options);
  if (options.write_files) {
    std::ofstream rep(std::filesystem::path(base.output_dir) / "precision_report.txt");
    write_precision_report(rep, r);
    std::ofstream div(std::filesystem::path(base.output_dir) / "divergence.csv");
    write_divergence_csv(div, r.divergence);
  }
  return r;
}

void write_precision_report(std::ostream& os, const PrecisionReport& r) {
  os << "T_fp32 = " << format_double(r.T_fp32) << '\n'
     << "T_fp64 = " << format_double(r.T_fp64) << '\n'
     << "S_fp = " << format_double(r.S_fp) << '\n'
     << "bytes_fp32 = " << r.bytes_fp32 << '\n'
     << "bytes_fp64 = " << r.bytes_fp64 << '\n'
     << "R_fp = " << format_double(r.R_fp) << '\n'
     << "completed = " << (r.ok ? "yes" : "no") << '\n';
}

void write_divergence_csv(std::ostream& os, const std::vector<DivergenceSample>& d) {
  os << "t,rms,max\n";
  for (const auto& s : d) os << format_double(s.t) << ',' << format_double(s.rms) << ',' << format_double(s.max) << '\n';
}

}  // namespace hgks
