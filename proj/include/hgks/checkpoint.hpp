#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hgks/common.hpp"
#include "hgks/field.hpp"
#include "hgks/statistics.hpp"

namespace hgks {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Everything needed to continue a run bit for bit. The field holds the owned
/// cells of the whole domain in (component, i, j, k) order, k fastest, in the
/// precision it was computed in.
struct Checkpoint {
  Precision precision = Precision::fp64;
  Extent extent;
  double t = 0;
  std::int64_t step = 0;
  std::uint64_t case_hash = 0;
  std::uint64_t seed = 0;

  // Channel forcing.
  double force = 0, mass_flux = 0;

  // Run schedule.
  double next_output = 0, next_stats = 0, next_checkpoint = 0;
  std::vector<TimeSeriesRecord> series;

  // Plane statistics.
  std::vector<double> stat_sums;
  double stat_weight = 0;
  std::int64_t stat_samples = 0;

  std::vector<float> field32;
  std::vector<double> field64;

  bool operator==(const Checkpoint&) const;
};

/// Fixed little-endian layout with a leading magic and version and a trailing
/// FNV-1a hash. Written to a temporary name and renamed, so a reader never
/// sees a half-written file.
void write_checkpoint(const std::string& path, const Checkpoint& c);
std::vector<std::byte> encode_checkpoint(const Checkpoint& c);

/// Verifies magic, version, length and hash before decoding anything; throws
/// CheckpointError otherwise.
Checkpoint read_checkpoint(const std::string& path);
Checkpoint decode_checkpoint(const std::vector<std::byte>& bytes);

/// Copies the stored field into `global` (owned cells), widening or rounding
/// when the stored precision differs. Returns true when a conversion happened.
template <class T>
bool load_field(const Checkpoint& c, Field<T>& global);

/// Stores the owned cells of `global` in the checkpoint, in T's precision.
template <class T>
void store_field(const Field<T>& global, Checkpoint& c);

}  // namespace hgks
