#include "hgks/parallel.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstring>
#include <exception>
#include <set>
#include <string>
#include <thread>

namespace hgks {

namespace {

enum Tag : int { kHaloRight = 0, kHaloLeft = 1, kReduce = 2, kBcast = 3, kScatter = 4, kGather = 5, kRows = 6 };

using Clock = std::chrono::steady_clock;

}  // namespace

int Decomposition::left(int rank) const {
  if (rank > 0) return rank - 1;
  return periodic ? workers - 1 : -1;
}

int Decomposition::right(int rank) const {
  if (rank < workers - 1) return rank + 1;
  return periodic ? 0 : -1;
}

int Decomposition::owner(int i) const {
  for (int r = 0; r < workers; ++r)
    if (i >= slabs[r].begin && i < slabs[r].end) return r;
  throw std::out_of_range("x-slice outside the domain");
}

std::vector<Slab> balanced_partition(int nx, int workers) {
  if (workers < 1 || nx < workers) throw ConfigError("cannot split " + std::to_string(nx) + " slices over " +
                                                     std::to_string(workers) + " workers");
  std::vector<Slab> slabs;
  const int base = nx / workers, extra = nx % workers;
  int at = 0;
  for (int r = 0; r < workers; ++r) {
    const int n = base + (r < extra ? 1 : 0);
    slabs.push_back({at, at + n});
    at += n;
  }
  return slabs;
}

Decomposition decompose(Extent global, int workers, bool periodic) {
  if (workers < 1) throw ConfigError("worker count must be at least 1");
  if (global.nx < 5 * workers)
    throw ConfigError("nx = " + std::to_string(global.nx) + " cannot be split over " + std::to_string(workers) +
                      " workers: each slab needs at least 5 x-slices");
  Decomposition d;
  d.global = global;
  d.workers = workers;
  d.periodic = periodic;
  d.slabs = balanced_partition(global.nx, workers);
  return d;
}

std::vector<HaloOp> halo_schedule(int rank, int workers, bool periodic) {
  std::vector<HaloOp> ops;
  if (workers == 1) {
    if (periodic) ops.push_back({HaloOp::Kind::self_copy, rank, Flow::rightward});
    return ops;
  }
  const int left = rank > 0 ? rank - 1 : (periodic ? workers - 1 : -1);
  const int right = rank < workers - 1 ? rank + 1 : (periodic ? 0 : -1);
  const bool even = rank % 2 == 0;
  auto add = [&](HaloOp::Kind k, int peer, Flow f) {
    if (peer >= 0) ops.push_back({k, peer, f});
  };
  // Phase 1: rightward flow.
  if (even) {
    add(HaloOp::Kind::send, right, Flow::rightward);
    add(HaloOp::Kind::recv, left, Flow::rightward);
  } else {
    add(HaloOp::Kind::recv, left, Flow::rightward);
    add(HaloOp::Kind::send, right, Flow::rightward);
  }
  // Phase 2: leftward flow.
  if (even) {
    add(HaloOp::Kind::send, left, Flow::leftward);
    add(HaloOp::Kind::recv, right, Flow::leftward);
  } else {
    add(HaloOp::Kind::recv, right, Flow::leftward);
    add(HaloOp::Kind::send, left, Flow::leftward);
  }
  return ops;
}

bool halo_protocol_deadlock_free(int workers, bool periodic, std::size_t* deadlocks) {
  std::vector<std::vector<HaloOp>> prog;
  for (int r = 0; r < workers; ++r) prog.push_back(halo_schedule(r, workers, periodic));
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> stack{std::vector<int>(workers, 0)};
  std::size_t stuck = 0;
  while (!stack.empty()) {
    auto pc = stack.back();
    stack.pop_back();
    if (!seen.insert(pc).second) continue;
    bool done = true, moved = false;
    for (int r = 0; r < workers; ++r) {
      if (pc[r] >= static_cast<int>(prog[r].size())) continue;
      done = false;
      const HaloOp& op = prog[r][pc[r]];
      if (op.kind == HaloOp::Kind::self_copy) {
        auto next = pc;
        ++next[r];
        stack.push_back(next);
        moved = true;
        continue;
      }
      if (op.kind != HaloOp::Kind::send) continue;
      const int p = op.peer;
      if (pc[p] >= static_cast<int>(prog[p].size())) continue;
      const HaloOp& other = prog[p][pc[p]];
      if (other.kind == HaloOp::Kind::recv && other.peer == r && other.flow == op.flow) {
        auto next = pc;
        ++next[r];
        ++next[p];
        stack.push_back(next);
        moved = true;
      }
    }
    if (!done && !moved) ++stuck;
  }
  if (deadlocks) *deadlocks = stuck;
  return stuck == 0;
}

struct Transport::Channel {
  std::mutex m;
  std::condition_variable cv;
  const std::byte* data = nullptr;
  std::size_t size = 0;
  bool full = false;
  bool taken = false;
  bool mismatch = false;
};

Transport::Transport(int workers, std::chrono::milliseconds timeout) : workers_(workers), timeout_(timeout) {}

Transport::~Transport() = default;

Transport::Channel& Transport::channel(int src, int dst, int tag) {
  std::lock_guard lock(map_mutex_);
  auto& c = channels_[{src, dst, tag}];
  if (!c) c = std::make_unique<Channel>();
  return *c;
}

namespace {

std::string route(int src, int dst, int tag) {
  return "worker " + std::to_string(src) + " -> worker " + std::to_string(dst) + " (tag " + std::to_string(tag) + ")";
}

}  // namespace

void Transport::send(int src, int dst, int tag, std::span<const std::byte> data) {
  Channel& c = channel(src, dst, tag);
  std::unique_lock lock(c.m);
  auto ok = [&](auto pred) {
    if (!c.cv.wait_for(lock, timeout_, [&] { return aborted_.load() || pred(); }))
      throw TransportError("send timed out: " + route(src, dst, tag));
    if (aborted_) throw TransportError("transport aborted during send: " + route(src, dst, tag));
  };
  ok([&] { return !c.full; });
  c.data = data.data();
  c.size = data.size();
  c.full = true;
  c.taken = false;
  c.mismatch = false;
  c.cv.notify_all();
  ok([&] { return c.taken; });
  const bool mismatch = c.mismatch;
  c.full = false;
  c.data = nullptr;
  c.cv.notify_all();
  if (mismatch) throw TransportError("message size mismatch: " + route(src, dst, tag));
}

void Transport::recv(int dst, int src, int tag, std::span<std::byte> data) {
  Channel& c = channel(src, dst, tag);
  std::unique_lock lock(c.m);
  if (!c.cv.wait_for(lock, timeout_, [&] { return aborted_.load() || (c.full && !c.taken); }))
    throw TransportError("receive timed out: " + route(src, dst, tag));
  if (aborted_) throw TransportError("transport aborted during receive: " + route(src, dst, tag));
  const std::size_t got = c.size;
  if (got == data.size()) {
    std::memcpy(data.data(), c.data, got);
  } else {
    c.mismatch = true;
  }
  c.taken = true;
  c.cv.notify_all();
  if (got != data.size())
    throw TransportError("message size mismatch: " + route(src, dst, tag) + ", expected " +
                         std::to_string(data.size()) + " bytes, got " + std::to_string(got));
}

void Transport::abort() {
  aborted_ = true;
  std::lock_guard lock(map_mutex_);
  for (auto& [key, c] : channels_) {
    std::lock_guard cl(c->m);
    c->cv.notify_all();
  }
}

void Communicator::send(int dst, int tag, std::span<const std::byte> data) {
  const auto t0 = Clock::now();
  t_.send(rank_, dst, tag, data);
  timing_.com += std::chrono::duration<double>(Clock::now() - t0).count();
}

void Communicator::recv(int src, int tag, std::span<std::byte> data) {
  const auto t0 = Clock::now();
  t_.recv(rank_, src, tag, data);
  timing_.com += std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class T>
void Communicator::exchange_halo(Field<T>& q) {
  const int nxl = q.extent().nx;
  const std::size_t plane = static_cast<std::size_t>(q.stride_x());
  const std::size_t block = kGhost * plane;
  auto pack = [&](int first) {
    buf_.resize(5 * block * sizeof(T));
    T* out = reinterpret_cast<T*>(buf_.data());
    for (int c = 0; c < 5; ++c)
      std::copy_n(q.data(c) + q.index(first, -kGhost, -kGhost), block, out + c * block);
    return std::span<const std::byte>(buf_);
  };
  std::vector<std::byte> in(5 * block * sizeof(T));
  auto unpack = [&](int first) {
    const T* src = reinterpret_cast<const T*>(in.data());
    for (int c = 0; c < 5; ++c)
      std::copy_n(src + c * block, block, q.data(c) + q.index(first, -kGhost, -kGhost));
  };
  for (const HaloOp& op : halo_schedule(rank_, d_.workers, d_.periodic)) {
    switch (op.kind) {
      case HaloOp::Kind::self_copy:
        for (int c = 0; c < 5; ++c) {
          T* d = q.data(c);
          std::copy_n(d + q.index(nxl - kGhost, -kGhost, -kGhost), block, d + q.index(-kGhost, -kGhost, -kGhost));
          std::copy_n(d + q.index(0, -kGhost, -kGhost), block, d + q.index(nxl, -kGhost, -kGhost));
        }
        break;
      case HaloOp::Kind::send:
        if (op.flow == Flow::rightward) {
          send(op.peer, kHaloRight, pack(nxl - kGhost));
        } else {
          send(op.peer, kHaloLeft, pack(0));
        }
        break;
      case HaloOp::Kind::recv:
        if (op.flow == Flow::rightward) {
          recv(op.peer, kHaloRight, in);
          unpack(-kGhost);
        } else {
          recv(op.peer, kHaloLeft, in);
          unpack(nxl);
        }
        break;
    }
  }
}

double Communicator::global_min(double v) {
  if (root()) {
    for (int r = 1; r < size(); ++r) {
      double o;
      recv(r, kReduce, std::as_writable_bytes(std::span<double>(&o, 1)));
      v = std::min(v, o);
    }
  } else {
    send(0, kReduce, std::as_bytes(std::span<const double>(&v, 1)));
  }
  broadcast_value(v);
  return v;
}

double Communicator::global_max(double v) { return -global_min(-v); }

void Communicator::broadcast(std::span<std::byte> data) {
  if (root()) {
    for (int r = 1; r < size(); ++r) send(r, kBcast, data);
  } else {
    recv(0, kBcast, data);
  }
}

std::vector<double> Communicator::gather_rows(const std::vector<double>& rows) {
  if (!root()) {
    send(0, kRows, std::as_bytes(std::span<const double>(rows)));
    return {};
  }
  const std::size_t width = rows.size() / std::max(1, slab().size());
  std::vector<double> all(rows);
  for (int r = 1; r < size(); ++r) {
    std::vector<double> part(width * d_.slabs[r].size());
    recv(r, kRows, std::as_writable_bytes(std::span<double>(part)));
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

std::vector<double> Communicator::plane_sums(const std::vector<double>& rows, std::size_t width) {
  if (rows.size() != width * slab().size()) throw std::invalid_argument("plane_sums needs width values per owned plane");
  std::vector<double> totals(width, 0.0);
  const auto all = gather_rows(rows);
  if (root()) {
    const std::size_t planes = all.size() / std::max<std::size_t>(width, 1);
    for (std::size_t p = 0; p < planes; ++p)
      for (std::size_t w = 0; w < width; ++w) totals[w] += all[p * width + w];
  }
  broadcast(std::as_writable_bytes(std::span<double>(totals)));
  return totals;
}

template <class T>
void Communicator::scatter(const Field<T>* global, Field<T>& local) {
  const Extent e = local.extent();
  const std::size_t row = e.nz;
  auto copy_slab = [&](const Field<T>& g, int i0, Field<T>& l) {
    for (int c = 0; c < 5; ++c)
      for (int i = 0; i < l.extent().nx; ++i)
        for (int j = 0; j < e.ny; ++j)
          std::copy_n(g.data(c) + g.index(i0 + i, j, 0), row, l.data(c) + l.index(i, j, 0));
  };
  if (root()) {
    if (!global || !(global->extent() == d_.global)) throw TransportError("scatter: root field has the wrong extent");
    for (int r = 1; r < size(); ++r) {
      const Slab& s = d_.slabs[r];
      std::vector<T> out(5 * static_cast<std::size_t>(s.size()) * e.ny * row);
      std::size_t at = 0;
      for (int c = 0; c < 5; ++c)
        for (int i = s.begin; i < s.end; ++i)
          for (int j = 0; j < e.ny; ++j, at += row) std::copy_n(global->data(c) + global->index(i, j, 0), row, &out[at]);
      send(r, kScatter, std::as_bytes(std::span<const T>(out)));
    }
    copy_slab(*global, slab().begin, local);
  } else {
    std::vector<T> in(5 * static_cast<std::size_t>(e.nx) * e.ny * row);
    recv(0, kScatter, std::as_writable_bytes(std::span<T>(in)));
    std::size_t at = 0;
    for (int c = 0; c < 5; ++c)
      for (int i = 0; i < e.nx; ++i)
        for (int j = 0; j < e.ny; ++j, at += row) std::copy_n(&in[at], row, local.data(c) + local.index(i, j, 0));
  }
}

template <class T>
void Communicator::gather(const Field<T>& local, Field<T>* global) {
  const Extent e = local.extent();
  const std::size_t row = e.nz;
  if (!root()) {
    std::vector<T> out(5 * static_cast<std::size_t>(e.nx) * e.ny * row);
    std::size_t at = 0;
    for (int c = 0; c < 5; ++c)
      for (int i = 0; i < e.nx; ++i)
        for (int j = 0; j < e.ny; ++j, at += row) std::copy_n(local.data(c) + local.index(i, j, 0), row, &out[at]);
    send(0, kGather, std::as_bytes(std::span<const T>(out)));
    return;
  }
  if (!global || !(global->extent() == d_.global)) throw TransportError("gather: root field has the wrong extent");
  for (int c = 0; c < 5; ++c)
    for (int i = 0; i < e.nx; ++i)
      for (int j = 0; j < e.ny; ++j)
        std::copy_n(local.data(c) + local.index(i, j, 0), row, global->data(c) + global->index(slab().begin + i, j, 0));
  for (int r = 1; r < size(); ++r) {
    const Slab& s = d_.slabs[r];
    std::vector<T> in(5 * static_cast<std::size_t>(s.size()) * e.ny * row);
    recv(r, kGather, std::as_writable_bytes(std::span<T>(in)));
    std::size_t at = 0;
    for (int c = 0; c < 5; ++c)
      for (int i = s.begin; i < s.end; ++i)
        for (int j = 0; j < e.ny; ++j, at += row) std::copy_n(&in[at], row, global->data(c) + global->index(i, j, 0));
  }
}

template void Communicator::exchange_halo<float>(Field<float>&);
template void Communicator::exchange_halo<double>(Field<double>&);
template void Communicator::scatter<float>(const Field<float>*, Field<float>&);
template void Communicator::scatter<double>(const Field<double>*, Field<double>&);
template void Communicator::gather<float>(const Field<float>&, Field<float>*);
template void Communicator::gather<double>(const Field<double>&, Field<double>*);

void run_workers(const Decomposition& d, std::chrono::milliseconds timeout,
                 const std::function<void(Communicator&)>& body) {
  Transport transport(d.workers, timeout);
  std::mutex err_mutex;
  std::exception_ptr first;
  auto worker = [&](int rank) {
    Communicator comm(transport, rank, d);
    try {
      body(comm);
    } catch (...) {
      {
        std::lock_guard lock(err_mutex);
        if (!first) first = std::current_exception();
      }
      transport.abort();
    }
  };
  std::vector<std::thread> threads;
  for (int r = 1; r < d.workers; ++r) threads.emplace_back(worker, r);
  worker(0);
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace hgks
