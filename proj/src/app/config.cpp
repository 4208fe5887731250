#include "hgks/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hgks/statistics.hpp"

namespace hgks {

std::string to_string(Precision p) { return p == Precision::fp32 ? "fp32" : "fp64"; }

Precision precision_from_string(const std::string& s) {
  if (s == "fp32") return Precision::fp32;
  if (s == "fp64") return Precision::fp64;
  throw ConfigError("precision must be fp32 or fp64, got '" + s + "'");
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

double parse_double(const std::string& v, const std::string& key) {
  double out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
  return out;
}

template <class I>
I parse_int(const std::string& v, const std::string& key) {
  I out = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
  return out;
}

// One table of keys drives both directions, so the two cannot drift apart.
struct Key {
  std::string name;
  bool physical;  // part of the case identity
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <class M>
Key number(std::string name, bool physical, M member) {
  return {name, physical, [member](const RunConfig& c) { return format_double(member(const_cast<RunConfig&>(c))); },
          [member, name](RunConfig& c, const std::string& v) { member(c) = parse_double(v, name); }};
}

template <class I, class M>
Key integer(std::string name, bool physical, M member) {
  return {name, physical, [member](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); },
          [member, name](RunConfig& c, const std::string& v) { member(c) = parse_int<I>(v, name); }};
}

template <class E>
Key choice(std::string name, bool physical, std::function<E&(RunConfig&)> member, std::map<std::string, E> names) {
  return {name, physical,
          [member, names](const RunConfig& c) {
            const E v = member(const_cast<RunConfig&>(c));
            for (const auto& [s, e] : names)
              if (e == v) return s;
            return std::string("?");
          },
          [member, names, name](RunConfig& c, const std::string& v) {
            const auto it = names.find(v);
            if (it == names.end()) throw ConfigError("'" + name + "' does not accept '" + v + "'");
            member(c) = it->second;
          }};
}

Key text(std::string name, std::function<std::string&(RunConfig&)> member) {
  return {name, false, [member](const RunConfig& c) { return member(const_cast<RunConfig&>(c)); },
          [member](RunConfig& c, const std::string& v) { member(c) = v; }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = [] {
    std::vector<Key> v;
    v.push_back(choice<CaseKind>("case", true, [](RunConfig& c) -> CaseKind& { return c.kind; },
                                 {{"tgv", CaseKind::tgv}, {"channel", CaseKind::channel}}));
    v.push_back(choice<Precision>("precision", false, [](RunConfig& c) -> Precision& { return c.precision; },
                                  {{"fp32", Precision::fp32}, {"fp64", Precision::fp64}}));
    v.push_back(integer<int>("workers", false, [](RunConfig& c) -> int& { return c.workers; }));
    v.push_back(choice<DtMode>("dt_mode", false, [](RunConfig& c) -> DtMode& { return c.dt.mode; },
                               {{"cfl", DtMode::cfl}, {"fixed", DtMode::fixed}}));
    v.push_back(number("cfl", false, [](RunConfig& c) -> double& { return c.dt.cfl; }));
    v.push_back(number("dt", false, [](RunConfig& c) -> double& { return c.dt.dt_fixed; }));
    v.push_back(number("t_end", false, [](RunConfig& c) -> double& { return c.t_end; }));
    v.push_back(number("output_interval", false, [](RunConfig& c) -> double& { return c.output_interval; }));
    v.push_back(number("checkpoint_interval", false, [](RunConfig& c) -> double& { return c.checkpoint_interval; }));
    v.push_back(number("stats_interval", false, [](RunConfig& c) -> double& { return c.stats_interval; }));
    v.push_back(number("stats_start", false, [](RunConfig& c) -> double& { return c.stats_start; }));
    v.push_back(number("forcing_memory", false, [](RunConfig& c) -> double& { return c.forcing_memory; }));
    v.push_back(text("isa", [](RunConfig& c) -> std::string& { return c.isa; }));
    v.push_back(choice<WenoKind>("weno", true, [](RunConfig& c) -> WenoKind& { return c.op.weno; },
                                 {{"z", WenoKind::z}, {"js", WenoKind::js}}));
    v.push_back(choice<EquilibriumSlope>("eq_slope", true,
                                         [](RunConfig& c) -> EquilibriumSlope& { return c.op.eq_slope; },
                                         {{"central", EquilibriumSlope::central},
                                          {"side_average", EquilibriumSlope::side_average}}));
    v.push_back(text("output_dir", [](RunConfig& c) -> std::string& { return c.output_dir; }));

    v.push_back(integer<int>("tgv.n", true, [](RunConfig& c) -> int& { return c.tgv.n; }));
    v.push_back(number("tgv.L", true, [](RunConfig& c) -> double& { return c.tgv.L; }));
    v.push_back(number("tgv.V0", true, [](RunConfig& c) -> double& { return c.tgv.V0; }));
    v.push_back(number("tgv.rho0", true, [](RunConfig& c) -> double& { return c.tgv.rho0; }));
    v.push_back(number("tgv.Ma", true, [](RunConfig& c) -> double& { return c.tgv.Ma; }));
    v.push_back(number("tgv.Re", true, [](RunConfig& c) -> double& { return c.tgv.Re; }));
    v.push_back(number("tgv.gamma", true, [](RunConfig& c) -> double& { return c.tgv.gamma; }));
    v.push_back(number("tgv.Pr", true, [](RunConfig& c) -> double& { return c.tgv.Pr; }));

    v.push_back(integer<int>("channel.nx", true, [](RunConfig& c) -> int& { return c.channel.nx; }));
    v.push_back(integer<int>("channel.ny", true, [](RunConfig& c) -> int& { return c.channel.ny; }));
    v.push_back(integer<int>("channel.nz", true, [](RunConfig& c) -> int& { return c.channel.nz; }));
    v.push_back(number("channel.H", true, [](RunConfig& c) -> double& { return c.channel.H; }));
    v.push_back(number("channel.bg", true, [](RunConfig& c) -> double& { return c.channel.bg; }));
    v.push_back(choice<ChannelTarget>("channel.target", true,
                                      [](RunConfig& c) -> ChannelTarget& { return c.channel.target; },
                                      {{"friction", ChannelTarget::friction}, {"bulk", ChannelTarget::bulk}}));
    v.push_back(number("channel.re_tau", true, [](RunConfig& c) -> double& { return c.channel.re_tau; }));
    v.push_back(number("channel.re_bulk", true, [](RunConfig& c) -> double& { return c.channel.re_bulk; }));
    v.push_back(number("channel.Ma", true, [](RunConfig& c) -> double& { return c.channel.Ma; }));
    v.push_back(number("channel.gamma", true, [](RunConfig& c) -> double& { return c.channel.gamma; }));
    v.push_back(number("channel.Pr", true, [](RunConfig& c) -> double& { return c.channel.Pr; }));
    v.push_back(choice<ViscosityLaw>("channel.viscosity", true,
                                     [](RunConfig& c) -> ViscosityLaw& { return c.channel.law; },
                                     {{"constant", ViscosityLaw::constant}, {"power", ViscosityLaw::power}}));
    v.push_back(number("channel.exponent", true, [](RunConfig& c) -> double& { return c.channel.exponent; }));
    v.push_back(number("channel.amplitude", true, [](RunConfig& c) -> double& { return c.channel.amplitude; }));
    v.push_back(integer<std::uint64_t>("seed", true, [](RunConfig& c) -> std::uint64_t& { return c.channel.seed; }));
    return v;
  }();
  return k;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  for (const auto& k : keys())
    if (k.get(*this) != k.get(o)) return false;
  return true;
}

void RunConfig::validate() const {
  if (kind == CaseKind::tgv) tgv.validate();
  else channel.validate();
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (dt.mode == DtMode::cfl && !(dt.cfl > 0 && dt.cfl <= 1)) throw ConfigError("cfl must lie in (0, 1]");
  if (dt.mode == DtMode::fixed && !(dt.dt_fixed > 0)) throw ConfigError("fixed dt must be positive");
  if (!(t_end > 0)) throw ConfigError("t_end must be positive");
  if (!(output_interval > 0)) throw ConfigError("output_interval must be positive");
  if (!(checkpoint_interval >= 0)) throw ConfigError("checkpoint_interval must be non-negative");
  if (!(stats_interval > 0)) throw ConfigError("stats_interval must be positive");
  if (!(forcing_memory >= 0 && forcing_memory < 1)) throw ConfigError("forcing_memory must lie in [0, 1)");
  if (isa != "auto") isa_from_string(isa);
  const Mesh m = mesh();
  m.validate();
  if (m.nx < 5 * workers) throw ConfigError("each worker needs at least 5 x-slices");
}

Mesh RunConfig::mesh() const { return kind == CaseKind::tgv ? tgv.mesh() : channel.mesh(); }
GasModel RunConfig::gas() const { return kind == CaseKind::tgv ? tgv.gas() : channel.gas(); }
BoundarySpec RunConfig::boundary() const { return kind == CaseKind::tgv ? BoundarySpec{} : channel.boundary(); }
double RunConfig::rho0() const { return kind == CaseKind::tgv ? tgv.rho0 : channel.rho_bulk(); }

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::map<std::string, const Key*> index;
  for (const auto& k : keys()) index[k.name] = &k;
  std::istringstream is(text);
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end()) throw ConfigError("line " + std::to_string(no) + ": unknown key '" + key + "'");
    try {
      it->second->set(c, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(no) + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const RunConfig& c) {
  std::string out;
  for (const auto& k : keys()) out += k.name + " = " + k.get(c) + "\n";
  return out;
}

std::string case_text(const RunConfig& c) {
  std::string out;
  for (const auto& k : keys())
    if (k.physical) out += k.name + " = " + k.get(c) + "\n";
  return out;
}

}  // namespace hgks
