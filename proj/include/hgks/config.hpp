#pragma once

#include <string>

#include "hgks/cases.hpp"
#include "hgks/integrator.hpp"
#include "hgks/operator.hpp"

namespace hgks {

enum class CaseKind { tgv, channel };

/// Everything a run depends on. The text form is one `key = value` per
/// line; `#` starts a comment. Numbers are written in their shortest
/// round-trip form, so parse(to_text(c)) == c.
struct RunConfig {
  CaseKind kind = CaseKind::tgv;
  TgvSpec tgv;
  ChannelSpec channel;

  Precision precision = Precision::fp64;
  int workers = 1;
  TimeStepControl dt;
  double t_end = 1.0;
  double output_interval = 0.1;      // diagnostics cadence
  double checkpoint_interval = 0.0;  // 0: final checkpoint only
  double stats_interval = 0.5;       // channel plane statistics cadence
  double stats_start = 0.0;          // channel statistics window start
  double forcing_memory = 0.5;
  std::string isa = "auto";
  OperatorOptions op;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const;
  void validate() const;
  Mesh mesh() const;
  GasModel gas() const;
  BoundarySpec boundary() const;
  /// Reference density for the kinetic energy normalisation.
  double rho0() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string to_text(const RunConfig& c);

/// Text of the keys that define the physical problem (case, resolution,
/// gas, seed), used to tie checkpoints to their case.
std::string case_text(const RunConfig& c);
/// 64-bit FNV-1a.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ull);

std::string to_string(Precision p);
Precision precision_from_string(const std::string& s);

}  // namespace hgks
