#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "hgks/field.hpp"

namespace hgks {

struct Slab {
  int begin = 0, end = 0;
  int size() const { return end - begin; }
};

/// Balanced contiguous slabs in x. Neighbours are -1 at a wall end.
struct Decomposition {
  Extent global;
  int workers = 1;
  bool periodic = true;
  std::vector<Slab> slabs;

  int left(int rank) const;
  int right(int rank) const;
  /// Rank owning global x-slice i.
  int owner(int i) const;
};

/// Contiguous split of nx slices with sizes differing by at most one, the
/// larger slabs first. No stencil-size rule is applied.
std::vector<Slab> balanced_partition(int nx, int workers);

/// Throws ConfigError unless workers >= 1 and nx >= 5 * workers.
Decomposition decompose(Extent global, int workers, bool periodic);

/// Data direction of a halo message: rightward messages carry a worker's
/// last three owned planes into its right neighbour's left ghosts.
enum class Flow : int { rightward = 0, leftward = 1 };

struct HaloOp {
  enum class Kind { send, recv, self_copy } kind;
  int peer = -1;
  Flow flow = Flow::rightward;
};

/// Staged exchange protocol for one worker. Phase 1 moves data rightward
/// (even ranks send then receive, odd ranks receive then send), phase 2
/// repeats with the parity roles on the leftward flow. A single periodic
/// worker copies its own planes.
std::vector<HaloOp> halo_schedule(int rank, int workers, bool periodic);

/// Exhaustive search over every interleaving of the schedules of all workers
/// under rendezvous (synchronous) send/recv. Returns true if every execution
/// completes; `deadlocks` receives the number of distinct stuck states.
bool halo_protocol_deadlock_free(int workers, bool periodic, std::size_t* deadlocks = nullptr);

/// In-process rendezvous channels, one per (source, destination, tag).
/// A send blocks until the matching receive has copied the data.
class Transport {
 public:
  Transport(int workers, std::chrono::milliseconds timeout);
  ~Transport();
  Transport(const Transport&) = delete;
  Transport& operator=(const Transport&) = delete;

  void send(int src, int dst, int tag, std::span<const std::byte> data);
  void recv(int dst, int src, int tag, std::span<std::byte> data);
  /// Wakes every blocked call, which then throws TransportError.
  void abort();
  int workers() const { return workers_; }

 private:
  struct Channel;
  Channel& channel(int src, int dst, int tag);

  int workers_;
  std::chrono::milliseconds timeout_;
  std::atomic<bool> aborted_{false};
  std::mutex map_mutex_;
  std::map<std::tuple<int, int, int>, std::unique_ptr<Channel>> channels_;
};

/// Wall-clock split of one worker's time.
struct WorkerTiming {
  double flow = 0;  // seconds outside communication
  double com = 0;   // seconds inside communication calls
};

/// One worker's view of the group: point-to-point helpers, halo exchange,
/// reductions and root scatter/gather. Root is rank 0.
class Communicator {
 public:
  Communicator(Transport& t, int rank, const Decomposition& d) : t_(t), rank_(rank), d_(d) {}

  int rank() const { return rank_; }
  int size() const { return d_.workers; }
  bool root() const { return rank_ == 0; }
  const Decomposition& decomposition() const { return d_; }
  const Slab& slab() const { return d_.slabs[rank_]; }

  /// Ghost x-planes (with their y/z ghosts) from the neighbours, or the
  /// periodic wrap of the worker's own planes. Wall ends are left alone.
  template <class T>
  void exchange_halo(Field<T>& q);

  double global_min(double v);
  double global_max(double v);
  /// Element-wise sums of per-x-plane rows: `rows` holds width values for
  /// each owned plane. The root adds all planes in global order starting
  /// from zero and broadcasts, so the totals do not depend on the worker count.
  std::vector<double> plane_sums(const std::vector<double>& rows, std::size_t width);
  void broadcast(std::span<std::byte> data);
  template <class V>
  void broadcast_value(V& v) {
    broadcast(std::as_writable_bytes(std::span<V>(&v, 1)));
  }

  /// Root's full-domain field (owned cells) to every worker's slab.
  template <class T>
  void scatter(const Field<T>* global, Field<T>& local);
  template <class T>
  void gather(const Field<T>& local, Field<T>* global);

  /// Per-x-plane double rows to the root in global plane order.
  std::vector<double> gather_rows(const std::vector<double>& rows);

  WorkerTiming& timing() { return timing_; }

 private:
  void send(int dst, int tag, std::span<const std::byte> data);
  void recv(int src, int tag, std::span<std::byte> data);

  Transport& t_;
  int rank_;
  const Decomposition& d_;
  WorkerTiming timing_;
  std::vector<std::byte> buf_;
};

/// Runs `body` on one thread per worker. If any worker throws, the
/// transport is aborted and the first failure is rethrown after all threads
/// have joined.
void run_workers(const Decomposition& d, std::chrono::milliseconds timeout,
                 const std::function<void(Communicator&)>& body);

}  // namespace hgks
