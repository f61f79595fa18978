// Trace-driven experiment harness.
//
// Every request follows the get-then-put flow: get(k); on a miss, put(k, v)
// where v references a freshly written object. Hit ratios are only
// reproducible at threads=1; with more threads the interleaving of set
// accesses, and hence eviction order, varies from run to run.
#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mslru/policy.hpp"
#include "mslru/workload.hpp"

namespace mslru {

enum class InitMode { empty, random };

std::string_view to_string(InitMode m);
std::optional<InitMode> parse_init_mode(std::string_view name);

/// Backing objects for the optional payload touch. A hit reads `bytes` bytes
/// of the referenced object; a miss writes `bytes` bytes into a fresh one.
/// Slots are recycled round-robin per worker, so a reference may point at a
/// reused object; only the memory traffic matters here.
class ObjectPool {
 public:
  ObjectPool(std::size_t slots_per_worker, std::size_t workers, std::size_t bytes);

  std::size_t bytes() const { return words_ * sizeof(std::uint64_t); }
  std::uint64_t write_fresh(std::size_t worker, std::uint64_t stamp);
  void read(std::uint64_t ref);
  std::uint64_t checksum() const { return checksum_.load(std::memory_order_relaxed); }

 private:
  std::size_t words_;
  std::size_t slots_per_worker_;
  std::unique_ptr<std::atomic<std::uint64_t>[]> data_;
  std::vector<std::size_t> cursor_;
  std::atomic<std::uint64_t> checksum_{0};
};

/// One get-then-put request. Returns the lookup outcome of the get.
template <LaneWord Key>
Lookup<Key> run_flow(KeyValueCache<Key>& cache, Key k, ObjectPool* pool = nullptr, std::size_t worker = 0) {
  Lookup<Key> r = cache.get(k);
  if (r.hit()) {
    if (pool) pool->read(*r.value);
    return r;
  }
  const Key value = pool ? static_cast<Key>(pool->write_fresh(worker, k)) : Key{0};
  cache.put(k, value);
  return r;
}

struct ExperimentOptions {
  CacheConfig cache;
  WorkloadSpec workload;
  unsigned threads = 1;
  InitMode init = InitMode::empty;
  std::size_t touch_bytes = 0;
  bool warmup_curve = false;
  /// When set, requests are taken from this trace instead of the generator;
  /// the trace is split into contiguous chunks across threads.
  const Trace* replay = nullptr;
  /// When set (threads=1 only), receives every issued key.
  Trace* record = nullptr;
};

struct WarmupPoint {
  std::uint64_t ops = 0;
  double cumulative_hit_ratio = 0.0;
  /// Hit ratio of the requests since the previous checkpoint.
  double interval_hit_ratio = 0.0;
};

struct MetricsReport {
  Policy policy = Policy::multistep;
  CacheConfig cache;
  WorkloadSpec workload;
  unsigned threads = 1;
  InitMode init = InitMode::empty;
  std::size_t touch_bytes = 0;
  bool replayed = false;

  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  double hit_ratio = 0.0;
  /// False when no requests were issued; hit_ratio is then reported as 0.
  bool hit_ratio_defined = false;
  /// Hits per location: vector 1..M for set-associative policies, T1/T2 for
  /// ARC, a single bucket otherwise.
  std::vector<std::uint64_t> location_hits;
  std::vector<WarmupPoint> warmup;
  double wall_time_s = 0.0;
  double throughput_ops_s = 0.0;

  std::uint64_t operations() const { return hits + misses; }
};

/// Throws ConfigError on invalid combinations (e.g. threads > 1 with a
/// single-threaded baseline).
MetricsReport run_experiment(const ExperimentOptions& options);

enum class SweepAxis { cache_size, vectors, threads };

std::optional<SweepAxis> parse_sweep_axis(std::string_view name);

/// One report per point. cache_size points are item counts; vectors points
/// are M values at the template's total capacity.
std::vector<MetricsReport> sweep(const ExperimentOptions& base, SweepAxis axis, std::span<const std::uint64_t> points);

/// 10^3, 10^3.5, 10^4, ... up to and including total_ops.
std::vector<std::uint64_t> warmup_checkpoints(std::uint64_t total_ops);

/// Pre-fills the cache to capacity with distinct keys no workload produces.
template <LaneWord Key>
void fill_with_garbage(KeyValueCache<Key>& cache, std::uint64_t seed);

std::string_view csv_header();
void write_csv(std::ostream& out, std::span<const MetricsReport> reports);
void write_warmup_csv(std::ostream& out, std::span<const MetricsReport> reports);
void write_json(std::ostream& out, std::span<const MetricsReport> reports);

}  // namespace mslru
