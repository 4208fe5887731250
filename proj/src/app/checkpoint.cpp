#include "hgks/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "hgks/config.hpp"

namespace hgks {

namespace {

constexpr char kMagic[8] = {'H', 'G', 'K', 'S', 'C', 'K', 'P', 'T'};
constexpr char kEndMagic[8] = {'H', 'G', 'K', 'S', 'E', 'N', 'D', '.'};
// magic + version + payload length, and hash + end magic.
constexpr std::size_t kHead = 8 + 4 + 8;
constexpr std::size_t kTail = 8 + 8;

class Writer {
 public:
  template <class U>
  void put_uint(U v) {
    for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<std::byte>((v >> (8 * b)) & 0xff));
  }
  void put(double v) { put_uint(std::bit_cast<std::uint64_t>(v)); }
  void put(float v) { put_uint(std::bit_cast<std::uint32_t>(v)); }
  void put_i64(std::int64_t v) { put_uint(static_cast<std::uint64_t>(v)); }
  void raw(const char* s, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out.push_back(static_cast<std::byte>(s[i]));
  }
  std::vector<std::byte> out;
};

class Reader {
 public:
  Reader(const std::byte* p, std::size_t n) : p_(p), n_(n) {}
  template <class U>
  U get_uint() {
    need(sizeof(U));
    U v = 0;
    for (std::size_t b = 0; b < sizeof(U); ++b) v |= static_cast<U>(std::to_integer<unsigned>(p_[pos_ + b])) << (8 * b);
    pos_ += sizeof(U);
    return v;
  }
  double get_double() { return std::bit_cast<double>(get_uint<std::uint64_t>()); }
  float get_float() { return std::bit_cast<float>(get_uint<std::uint32_t>()); }
  std::int64_t get_i64() { return static_cast<std::int64_t>(get_uint<std::uint64_t>()); }
  /// Element count followed by a bound check against the remaining bytes.
  std::size_t count(std::size_t elem) {
    const auto n = get_uint<std::uint64_t>();
    if (elem != 0 && n > (n_ - pos_) / elem) throw CheckpointError("checkpoint array length exceeds the file");
    return static_cast<std::size_t>(n);
  }
  bool done() const { return pos_ == n_; }

 private:
  void need(std::size_t k) const {
    if (k > n_ - pos_) throw CheckpointError("checkpoint payload is truncated");
  }
  const std::byte* p_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

void encode_payload(Writer& w, const Checkpoint& c) {
  w.put_uint(static_cast<std::uint32_t>(c.precision));
  w.put_uint(static_cast<std::uint32_t>(c.extent.nx));
  w.put_uint(static_cast<std::uint32_t>(c.extent.ny));
  w.put_uint(static_cast<std::uint32_t>(c.extent.nz));
  w.put(c.t);
  w.put_i64(c.step);
  w.put_uint(c.case_hash);
  w.put_uint(c.seed);
  w.put(c.force);
  w.put(c.mass_flux);
  w.put(c.next_output);
  w.put(c.next_stats);
  w.put(c.next_checkpoint);
  w.put_uint(static_cast<std::uint64_t>(c.series.size()));
  for (const auto& r : c.series)
    for (double v : {r.t, r.Ek, r.eps_Ek, r.eps_com, r.enstrophy, r.mass_flux, r.force}) w.put(v);
  w.put_uint(static_cast<std::uint64_t>(c.stat_sums.size()));
  for (double v : c.stat_sums) w.put(v);
  w.put(c.stat_weight);
  w.put_i64(c.stat_samples);
  if (c.precision == Precision::fp32) {
    w.put_uint(static_cast<std::uint64_t>(c.field32.size()));
    for (float v : c.field32) w.put(v);
  } else {
    w.put_uint(static_cast<std::uint64_t>(c.field64.size()));
    for (double v : c.field64) w.put(v);
  }
}

Checkpoint decode_payload(Reader& r) {
  Checkpoint c;
  const auto prec = r.get_uint<std::uint32_t>();
  if (prec != 32 && prec != 64) throw CheckpointError("checkpoint has an unknown precision tag");
  c.precision = static_cast<Precision>(prec);
  c.extent.nx = static_cast<int>(r.get_uint<std::uint32_t>());
  c.extent.ny = static_cast<int>(r.get_uint<std::uint32_t>());
  c.extent.nz = static_cast<int>(r.get_uint<std::uint32_t>());
  c.t = r.get_double();
  c.step = r.get_i64();
  c.case_hash = r.get_uint<std::uint64_t>();
  c.seed = r.get_uint<std::uint64_t>();
  c.force = r.get_double();
  c.mass_flux = r.get_double();
  c.next_output = r.get_double();
  c.next_stats = r.get_double();
  c.next_checkpoint = r.get_double();
  c.series.resize(r.count(7 * 8));
  for (auto& s : c.series)
    for (double* v : {&s.t, &s.Ek, &s.eps_Ek, &s.eps_com, &s.enstrophy, &s.mass_flux, &s.force}) *v = r.get_double();
  c.stat_sums.resize(r.count(8));
  for (double& v : c.stat_sums) v = r.get_double();
  c.stat_weight = r.get_double();
  c.stat_samples = r.get_i64();
  const std::size_t expected = 5 * c.extent.cells();
  if (c.precision == Precision::fp32) {
    c.field32.resize(r.count(4));
    for (float& v : c.field32) v = r.get_float();
    if (c.field32.size() != expected) throw CheckpointError("checkpoint field size does not match its resolution");
  } else {
    c.field64.resize(r.count(8));
    for (double& v : c.field64) v = r.get_double();
    if (c.field64.size() != expected) throw CheckpointError("checkpoint field size does not match its resolution");
  }
  if (!r.done()) throw CheckpointError("checkpoint payload has trailing bytes");
  return c;
}

}  // namespace

bool Checkpoint::operator==(const Checkpoint& o) const {
  // Byte comparison of the encoded form: bitwise, and NaN-safe.
  return encode_checkpoint(*this) == encode_checkpoint(o);
}

std::vector<std::byte> encode_checkpoint(const Checkpoint& c) {
  Writer payload;
  encode_payload(payload, c);
  Writer w;
  w.raw(kMagic, 8);
  w.put_uint(kCheckpointVersion);
  w.put_uint(static_cast<std::uint64_t>(payload.out.size()));
  w.out.insert(w.out.end(), payload.out.begin(), payload.out.end());
  w.put_uint(fnv1a(payload.out.data(), payload.out.size()));
  w.raw(kEndMagic, 8);
  return std::move(w.out);
}

Checkpoint decode_checkpoint(const std::vector<std::byte>& bytes) {
  if (bytes.size() < kHead + kTail) throw CheckpointError("checkpoint is truncated");
  if (std::memcmp(bytes.data(), kMagic, 8) != 0) throw CheckpointError("not a checkpoint file (bad magic)");
  Reader head(bytes.data() + 8, kHead - 8);
  const auto version = head.get_uint<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw CheckpointError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kCheckpointVersion) + ")");
  const auto length = head.get_uint<std::uint64_t>();
  if (length != bytes.size() - kHead - kTail) throw CheckpointError("checkpoint is truncated or padded");
  const std::byte* payload = bytes.data() + kHead;
  Reader tail(payload + length, kTail);
  const auto hash = tail.get_uint<std::uint64_t>();
  if (std::memcmp(payload + length + 8, kEndMagic, 8) != 0) throw CheckpointError("checkpoint end marker is missing");
  if (hash != fnv1a(payload, length)) throw CheckpointError("checkpoint hash mismatch (corrupted file)");
  Reader r(payload, length);
  return decode_payload(r);
}

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  const auto bytes = encode_checkpoint(c);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CheckpointError("cannot write checkpoint '" + tmp + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw CheckpointError("write failed for checkpoint '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CheckpointError("cannot move checkpoint into place at '" + path + "': " + ec.message());
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path + "'");
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  if (!raw.empty()) std::memcpy(bytes.data(), raw.data(), raw.size());
  try {
    return decode_checkpoint(bytes);
  } catch (const CheckpointError& e) {
    throw CheckpointError("'" + path + "': " + e.what());
  }
}

template <class T>
bool load_field(const Checkpoint& c, Field<T>& global) {
  if (!(global.extent() == c.extent)) throw CheckpointError("checkpoint resolution does not match the run");
  const Extent e = c.extent;
  std::size_t n = 0;
  auto copy = [&](const auto& src) {
    for (int comp = 0; comp < 5; ++comp)
      for (int i = 0; i < e.nx; ++i)
        for (int j = 0; j < e.ny; ++j)
          for (int k = 0; k < e.nz; ++k) global(comp, i, j, k) = static_cast<T>(src[n++]);
  };
  if (c.precision == Precision::fp32) copy(c.field32);
  else copy(c.field64);
  const Precision mine = sizeof(T) == 4 ? Precision::fp32 : Precision::fp64;
  return mine != c.precision;
}

template <class T>
void store_field(const Field<T>& global, Checkpoint& c) {
  const Extent e = global.extent();
  c.extent = e;
  std::vector<T> out;
  out.reserve(5 * e.cells());
  for (int comp = 0; comp < 5; ++comp)
    for (int i = 0; i < e.nx; ++i)
      for (int j = 0; j < e.ny; ++j)
        for (int k = 0; k < e.nz; ++k) out.push_back(global(comp, i, j, k));
  if constexpr (sizeof(T) == 4) {
    c.precision = Precision::fp32;
    c.field32 = std::move(out);
    c.field64.clear();
  } else {
    c.precision = Precision::fp64;
    c.field64 = std::move(out);
    c.field32.clear();
  }
}

template bool load_field(const Checkpoint&, Field<float>&);
template bool load_field(const Checkpoint&, Field<double>&);
template void store_field(const Field<float>&, Checkpoint&);
template void store_field(const Field<double>&, Checkpoint&);

}  // namespace hgks
