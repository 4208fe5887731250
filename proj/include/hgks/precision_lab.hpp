#pragma once

#include <iosfwd>
#include <vector>

#include "hgks/simulation.hpp"

namespace hgks {

struct DivergenceSample {
  double t = 0;
  double rms = 0;  // over cells and components, each component scaled by its max |q|
  double max = 0;
};

struct PrecisionReport {
  double T_fp32 = 0, T_fp64 = 0;
  double S_fp = 0;  // T_fp64 / T_fp32
  std::size_t bytes_fp32 = 0, bytes_fp64 = 0;
  double R_fp = 0;  // bytes_fp64 / bytes_fp32
  bool ok = true;   // both runs reached t_end
  std::vector<DivergenceSample> divergence;
  RunResult fp32, fp64;
};

/// Relative difference of a single-precision field against the double field
/// rounded to single, so identically initialised twins start at exactly zero.
DivergenceSample field_divergence(const Checkpoint& fp32, const Checkpoint& fp64);

/// Runs the twin pair one after the other (FP64 first) and compares their
/// fields at every diagnostic output. The configs must agree in every key
/// except precision and output_dir; otherwise ConfigError.
PrecisionReport precision_lab(const RunConfig& fp32, const RunConfig& fp64, const RunOptions& options = {});

/// Twin pair derived from one config; outputs go to <output_dir>/fp32 and /fp64.
PrecisionReport precision_lab(const RunConfig& base, const RunOptions& options = {});

void write_precision_report(std::ostream& os, const PrecisionReport& r);
void write_divergence_csv(std::ostream& os, const std::vector<DivergenceSample>& d);

}  // namespace hgks
