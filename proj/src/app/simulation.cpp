#include "hgks/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

#include "hgks/boundary.hpp"
#include "hgks/cases.hpp"
#include "hgks/integrator.hpp"
#include "hgks/kernels.hpp"

namespace hgks {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// First point of origin + k * interval strictly after t. Multiplying instead
// of accumulating keeps long schedules on their nominal times.
double next_after(double t, double origin, double interval) {
  return origin + interval * (std::floor((t - origin) / interval + 1e-9) + 1);
}

// Shared between the worker threads; each field is written by the root only,
// except the per-rank slots.
struct Shared {
  Shared(const RunConfig& c, const RunOptions& o)
      : cfg(c), opt(o), mesh(c.mesh()), gm(c.gas()), bc(c.boundary()) {}

  const RunConfig& cfg;
  const RunOptions& opt;
  Mesh mesh;
  GasModel gm;
  BoundarySpec bc;
  const KernelTable* kernels = nullptr;
  std::uint64_t hash = 0;

  std::vector<WorkerTiming> timing;
  std::vector<std::size_t> bytes;
  RunResult result;
  std::mutex log_mutex;

  void log(const std::string& line) {
    std::lock_guard lock(log_mutex);
    result.log.push_back(line);
    if (opt.echo) *opt.echo << line << '\n';
  }
  std::filesystem::path path(const std::string& name) const { return std::filesystem::path(cfg.output_dir) / name; }
};

template <class T>
class Worker {
 public:
  Worker(Shared& s, Communicator& comm)
      : s_(s),
        comm_(comm),
        cfg_(s.cfg),
        channel_(cfg_.kind == CaseKind::channel),
        i0_(comm.slab().begin),
        q_(Extent{comm.slab().size(), s.mesh.ny, s.mesh.nz}),
        st_(s.mesh, i0_, comm.slab().size(), s.gm, cfg_.op, s.kernels->get<T>()),
        forcing_(channel_ ? cfg_.channel.target_mass_flux() : 0.0, cfg_.forcing_memory),
        acc_(s.mesh.ny) {}

  void run() {
    const auto t0 = Clock::now();
    start();
    loop();
    finish();
    const double total = seconds_since(t0);
    WorkerTiming w = comm_.timing();
    w.flow = total - w.com;
    s_.timing[comm_.rank()] = w;
    s_.bytes[comm_.rank()] = q_.bytes() + st_.bytes();
  }

 private:
  void fill(Field<T>& f) {
    fill_yz_ghosts(f, s_.bc, s_.gm);
    comm_.exchange_halo(f);
  }
  bool agree(bool ok) { return comm_.global_min(ok ? 1.0 : 0.0) > 0.5; }
  double tol(double interval) const { return 1e-9 * interval; }

  void start() {
    if (const Checkpoint* c = s_.opt.restart) {
      std::unique_ptr<Field<T>> global;
      bool converted = false;
      if (comm_.root()) {
        global = std::make_unique<Field<T>>(c->extent);
        converted = load_field(*c, *global);
      }
      comm_.scatter(global.get(), q_);
      t_ = c->t;
      step_ = c->step;
      next_output_ = c->next_output;
      next_stats_ = c->next_stats;
      next_checkpoint_ = c->next_checkpoint;
      series_ = c->series;
      if (!c->stat_sums.empty()) acc_.restore(c->stat_sums, c->stat_weight, c->stat_samples);
      if (channel_) forcing_.prime(c->mass_flux, c->force);
      if (comm_.root()) {
        s_.log("restart from t = " + format_double(t_) + ", step " + std::to_string(step_));
        if (converted)
          s_.log("precision change: checkpoint " + to_string(c->precision) + " -> run " +
                 to_string(sizeof(T) == 4 ? Precision::fp32 : Precision::fp64) +
                 (sizeof(T) == 4 ? " (field rounded)" : " (field widened)"));
      }
      return;
    }
    if (channel_) init_channel(cfg_.channel, s_.mesh, i0_, q_);
    else init_tgv(cfg_.tgv, s_.mesh, i0_, q_);
    if (channel_) forcing_.prime(mass_flux().first, 0.0);
    next_output_ = cfg_.output_interval;
    next_stats_ = cfg_.stats_start > 0 ? cfg_.stats_start : cfg_.stats_interval;
    next_checkpoint_ = cfg_.checkpoint_interval;
    if (comm_.root()) s_.log("start " + std::string(channel_ ? "channel" : "tgv") + " with " +
                             std::to_string(comm_.size()) + " worker(s), " +
                             to_string(sizeof(T) == 4 ? Precision::fp32 : Precision::fp64) + ", isa " +
                             to_string(s_.kernels->isa));
    output();
  }

  // {flux through a cross-section, mass per unit length}
  std::pair<double, double> mass_flux() {
    const auto tot = comm_.plane_sums(mass_flux_rows(q_, s_.mesh), 2);
    return {tot[0] / s_.mesh.lx, tot[1] / s_.mesh.lx};
  }

  void loop() {
    const double t_end = cfg_.t_end;
    std::int64_t taken = 0;
    while (t_ < t_end * (1 - 1e-12)) {
      if (s_.opt.max_steps >= 0 && taken >= s_.opt.max_steps) break;
      try {
        double bound = std::numeric_limits<double>::infinity();
        if (cfg_.dt.mode == DtMode::cfl) {
          double local = -1;
          try {
            local = local_dt_bound(q_, s_.mesh, i0_, s_.gm);
          } catch (const InvalidStateError& e) {
            failure_ = e.what();
          }
          bound = comm_.global_min(local);
          if (bound < 0) throw InvalidStateError(failure_.empty() ? "invalid state on another worker" : failure_);
        }
        double t_stop = next_output_;
        if (channel_) t_stop = std::min(t_stop, next_stats_);
        const double dt = next_dt(cfg_.dt, bound, t_, t_end, t_stop);
        st_.step(q_, dt, [this](Field<T>& f) { fill(f); }, [this](bool ok) { return agree(ok); });
        if (channel_) {
          const auto [mdot, mass] = mass_flux();
          apply_body_force(q_, forcing_.update(mdot, mass, dt), dt);
        }
        t_ += dt;
        ++step_;
        ++taken;
      } catch (const InvalidStateError& e) {
        failed_ = true;
        failure_ = e.what();
        break;
      }
      if (t_ >= next_output_ - tol(cfg_.output_interval)) {
        output();
        next_output_ = next_after(t_, 0.0, cfg_.output_interval);
      }
      if (channel_ && t_ >= next_stats_ - tol(cfg_.stats_interval)) {
        sample();
        next_stats_ = next_after(t_, cfg_.stats_start, cfg_.stats_interval);
      }
      if (cfg_.checkpoint_interval > 0 && t_ >= next_checkpoint_ - tol(cfg_.checkpoint_interval)) {
        next_checkpoint_ = next_after(t_, 0.0, cfg_.checkpoint_interval);
        const Checkpoint c = snapshot(true);
        if (comm_.root() && s_.opt.write_files) {
          write_checkpoint(s_.path("checkpoint.bin").string(), c);
          s_.log("checkpoint at t = " + format_double(t_) + ", step " + std::to_string(step_));
        }
      }
    }
    if (comm_.root()) s_.result.steps_taken = taken;
  }

  void output() {
    fill(q_);
    const auto tot = comm_.plane_sums(volume_integral_rows(q_, s_.mesh, s_.gm), kVolumeColumns);
    const VolumeIntegrals vi = volume_integrals(tot, s_.mesh, cfg_.rho0());
    TimeSeriesRecord r;
    r.t = t_;
    r.Ek = vi.Ek;
    r.eps_com = vi.eps_com();
    r.enstrophy = vi.enstrophy;
    if (channel_) {
      r.mass_flux = mass_flux().first;
      r.force = forcing_.force();
    }
    if (!series_.empty() && series_.back().t >= t_) return;
    series_.push_back(r);
    if (comm_.root())
      s_.log("t = " + format_double(t_) + "  step " + std::to_string(step_) + "  Ek = " + format_double(r.Ek) +
             "  eps_com = " + format_double(r.eps_com) + (channel_ ? "  force = " + format_double(r.force) : ""));
    if (s_.opt.on_output) {
      const Checkpoint c = snapshot(false);
      if (comm_.root()) s_.opt.on_output(c);
    }
  }

  void sample() {
    if (t_ < cfg_.stats_start - tol(cfg_.stats_interval)) return;
    const auto tot = comm_.plane_sums(plane_moment_rows(q_, s_.gm),
                                      static_cast<std::size_t>(s_.mesh.ny) * kPlaneMoments);
    acc_.add(tot, static_cast<double>(s_.mesh.nx) * s_.mesh.nz);
  }

  // Collective. The field is gathered to the root; `full` adds the schedule,
  // forcing and statistics state.
  Checkpoint snapshot(bool full) {
    Checkpoint c;
    c.t = t_;
    c.step = step_;
    std::unique_ptr<Field<T>> global;
    if (comm_.root()) global = std::make_unique<Field<T>>(Extent{s_.mesh.nx, s_.mesh.ny, s_.mesh.nz});
    comm_.gather(q_, global.get());
    if (comm_.root()) store_field(*global, c);
    if (!full) return c;
    c.case_hash = s_.hash;
    c.seed = cfg_.channel.seed;
    c.force = forcing_.force();
    c.mass_flux = forcing_.mass_flux();
    c.next_output = next_output_;
    c.next_stats = next_stats_;
    c.next_checkpoint = next_checkpoint_;
    c.series = series_;
    c.stat_sums = acc_.sums();
    c.stat_weight = acc_.weight();
    c.stat_samples = acc_.samples();
    return c;
  }

  void finish() {
    // A run stopped early (step budget or failure) keeps its series on the
    // output schedule so that a restart continues it unchanged.
    const bool at_end = t_ >= cfg_.t_end * (1 - 1e-12);
    if (!failed_ && at_end && (series_.empty() || series_.back().t < t_)) output();
    Checkpoint c = snapshot(true);
    if (!comm_.root()) return;
    RunResult& r = s_.result;
    r.ok = !failed_;
    r.error = failure_;
    r.t = t_;
    r.step = step_;
    r.series = series_;
    if (r.series.size() >= 2) dissipation_rate(r.series);
    if (channel_ && acc_.samples() > 0) {
      r.profile = acc_.profile(s_.mesh);
      r.wall = wall_units(*r.profile, s_.mesh, s_.gm, s_.bc.T_wall);
    }
    if (failed_) s_.log("step failed at t = " + format_double(t_) + ", step " + std::to_string(step_) + ": " + failure_);
    else s_.log("finished at t = " + format_double(t_) + " after " + std::to_string(step_) + " steps");
    if (s_.opt.write_files) {
      const std::string name = failed_ ? "checkpoint_failed.bin" : "checkpoint.bin";
      write_checkpoint(s_.path(name).string(), c);
      s_.log("wrote " + name);
    }
    r.final_state = std::move(c);
  }

  Shared& s_;
  Communicator& comm_;
  const RunConfig& cfg_;
  bool channel_;
  int i0_;
  Field<T> q_;
  Stepper<T> st_;
  ForcingController forcing_;
  PlaneAccumulator acc_;

  double t_ = 0;
  std::int64_t step_ = 0;
  double next_output_ = 0, next_stats_ = 0, next_checkpoint_ = 0;
  std::vector<TimeSeriesRecord> series_;
  bool failed_ = false;
  std::string failure_;
};

void write_outputs(const Shared& s, const RunResult& r) {
  namespace fs = std::filesystem;
  {
    std::ofstream os(s.path("timeseries.csv"));
    write_time_series_csv(os, r.series);
  }
  if (r.profile) {
    std::ofstream os(s.path("profile.csv"));
    write_profile_csv(os, *r.profile, r.wall.valid ? &r.wall : nullptr);
  }
  {
    std::ofstream os(s.path("timing.csv"));
    write_timing_csv(os, s.cfg.workers, r);
  }
  {
    std::ofstream os(s.path("config.txt"));
    os << to_text(s.cfg);
  }
  std::ofstream log(s.path("run.log"));
  for (const auto& line : r.log) log << line << '\n';
}

}  // namespace

std::uint64_t case_hash(const RunConfig& config) {
  const std::string text = case_text(config);
  return fnv1a(text.data(), text.size());
}

RunResult run_simulation(const RunConfig& config, const RunOptions& options) {
  config.validate();
  Shared s(config, options);
  s.kernels = config.isa == "auto" ? &default_kernels() : &kernels(isa_from_string(config.isa));
  s.hash = case_hash(config);
  const Mesh& m = s.mesh;
  const Decomposition d = decompose(Extent{m.nx, m.ny, m.nz}, config.workers, true);

  if (const Checkpoint* c = options.restart) {
    if (c->case_hash != s.hash) throw CheckpointError("checkpoint belongs to a different case (hash mismatch)");
    if (!(c->extent == d.global)) throw CheckpointError("checkpoint resolution does not match the run");
    if (c->seed != config.channel.seed) throw CheckpointError("checkpoint seed does not match the run");
  }
  if (options.write_files) std::filesystem::create_directories(config.output_dir);

  s.timing.resize(config.workers);
  s.bytes.resize(config.workers);
  const auto t0 = Clock::now();
  run_workers(d, std::chrono::minutes(10), [&](Communicator& comm) {
    if (config.precision == Precision::fp32) Worker<float>(s, comm).run();
    else Worker<double>(s, comm).run();
  });
  RunResult r = std::move(s.result);
  r.wall_seconds = seconds_since(t0);
  r.timing = s.timing;
  for (std::size_t b : s.bytes) r.resident_bytes += b;
  if (options.write_files) write_outputs(s, r);
  return r;
}

void write_timing_csv(std::ostream& os, int workers, const RunResult& r) {
  double flow = 0, com = 0;
  for (const auto& w : r.timing) {
    flow = std::max(flow, w.flow);
    com = std::max(com, w.com);
  }
  os << "workers,T_total,T_flow,T_com\n";
  os << workers << ',' << format_double(r.wall_seconds) << ',' << format_double(flow) << ',' << format_double(com)
     << '\n';
}

std::vector<TimingRow> read_timing_csv(std::istream& is) {
  std::vector<TimingRow> rows;
  std::string line;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    if (line.empty() || line.rfind("workers", 0) == 0) continue;
    std::istringstream ls(line);
    TimingRow r;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(ls >> r.workers >> c1 >> r.T_total >> c2 >> r.T_flow >> c3 >> r.T_com) || c1 != ',' || c2 != ',' ||
        c3 != ',')
      throw ConfigError("timing CSV line " + std::to_string(no) + " is malformed");
    rows.push_back(r);
  }
  return rows;
}

std::vector<TimingRow> scalability(std::vector<TimingRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const TimingRow& a, const TimingRow& b) { return a.workers < b.workers; });
  const auto one = std::find_if(rows.begin(), rows.end(), [](const TimingRow& r) { return r.workers == 1; });
  if (one == rows.end()) throw ConfigError("scalability needs a single-worker timing row");
  const double t1 = one->T_total;
  if (!(t1 > 0)) throw ConfigError("single-worker total time must be positive");
  for (auto& r : rows) r.S_n = r.T_total / t1;
  return rows;
}

void write_scalability_csv(std::ostream& os, const std::vector<TimingRow>& rows) {
  os << "workers,T_total,T_flow,T_com,S_n\n";
  for (const auto& r : rows)
    os << r.workers << ',' << format_double(r.T_total) << ',' << format_double(r.T_flow) << ','
       << format_double(r.T_com) << ',' << format_double(r.S_n) << '\n';
}

}  // namespace hgks
