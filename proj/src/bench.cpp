#include "mslru/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mslru/cache.hpp"
#include "mslru/factory.hpp"

namespace mslru {

std::string_view to_string(InitMode m) { return m == InitMode::empty ? "empty" : "random"; }

std::optional<InitMode> parse_init_mode(std::string_view name) {
  if (name == "empty") return InitMode::empty;
  if (name == "random") return InitMode::random;
  return std::nullopt;
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
  if (name == "cache_size" || name == "capacity") return SweepAxis::cache_size;
  if (name == "m" || name == "M" || name == "vectors") return SweepAxis::vectors;
  if (name == "threads") return SweepAxis::threads;
  return std::nullopt;
}

ObjectPool::ObjectPool(std::size_t slots_per_worker, std::size_t workers, std::size_t bytes)
    : words_((bytes + sizeof(std::uint64_t) - 1) / sizeof(std::uint64_t)),
      slots_per_worker_(std::max<std::size_t>(slots_per_worker, 1)),
      data_(new std::atomic<std::uint64_t>[std::max<std::size_t>(words_, 1) * slots_per_worker_ * workers]),
      cursor_(workers, 0) {
  const std::size_t n = std::max<std::size_t>(words_, 1) * slots_per_worker_ * workers;
  for (std::size_t i = 0; i < n; ++i) data_[i].store(0, std::memory_order_relaxed);
}

std::uint64_t ObjectPool::write_fresh(std::size_t worker, std::uint64_t stamp) {
  const std::size_t slot = worker * slots_per_worker_ + cursor_[worker];
  cursor_[worker] = cursor_[worker] + 1 == slots_per_worker_ ? 0 : cursor_[worker] + 1;
  std::atomic<std::uint64_t>* obj = data_.get() + slot * words_;
  for (std::size_t w = 0; w < words_; ++w) obj[w].store(stamp + w, std::memory_order_relaxed);
  return slot;
}

void ObjectPool::read(std::uint64_t ref) {
  const std::atomic<std::uint64_t>* obj = data_.get() + ref * words_;
  std::uint64_t sum = 0;
  for (std::size_t w = 0; w < words_; ++w) sum += obj[w].load(std::memory_order_relaxed);
  // Relaxed and uncontended in the common case; keeps the loads observable.
  if (sum == 0x5eed) checksum_.fetch_add(1, std::memory_order_relaxed);
}

std::vector<std::uint64_t> warmup_checkpoints(std::uint64_t total_ops) {
  std::vector<std::uint64_t> out;
  for (int step = 0;; ++step) {
    const double exponent = 3.0 + 0.5 * step;
    const auto at = static_cast<std::uint64_t>(std::llround(std::pow(10.0, exponent)));
    if (at >= total_ops) break;
    out.push_back(at);
  }
  if (total_ops > 0) out.push_back(total_ops);
  return out;
}

template <LaneWord Key>
void fill_with_garbage(KeyValueCache<Key>& cache, std::uint64_t seed) {
  // Far above any workload key: [2^62, 2^63) for 64-bit keys and
  // [2^31, 2^32 - 1) for 32-bit keys.
  constexpr std::uint64_t lo = sizeof(Key) == 8 ? (std::uint64_t{1} << 62) : (std::uint64_t{1} << 31);
  constexpr std::uint64_t hi = sizeof(Key) == 8 ? (std::uint64_t{1} << 63) - 1 : (std::uint64_t{1} << 32) - 2;
  Rng rng(seed, 0x6a7ba6e);
  const std::size_t capacity = cache.stats().capacity;
  std::size_t occupancy = cache.stats().occupancy;
  if (auto* sets = dynamic_cast<SetAssociativeCache<Key>*>(&cache)) {
    while (occupancy < capacity) {
      if (sets->insert_if_room(static_cast<Key>(rng.uniform(lo, hi)), Key{0})) ++occupancy;
    }
    return;
  }
  while (occupancy < capacity) {
    const auto r = cache.put(static_cast<Key>(rng.uniform(lo, hi)), Key{0});
    if (r.inserted && !r.evicted) ++occupancy;
  }
}

template void fill_with_garbage<std::uint64_t>(KeyValueCache<std::uint64_t>&, std::uint64_t);
template void fill_with_garbage<std::uint32_t>(KeyValueCache<std::uint32_t>&, std::uint64_t);

namespace {

struct WorkerResult {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::vector<std::uint64_t> location_hits;
  std::vector<WarmupPoint> warmup;
};

void check_options(const ExperimentOptions& o) {
  o.cache.validate();
  o.workload.validate();
  if (o.threads == 0) throw ConfigError("threads must be at least 1");
  if (o.threads > 1 && !o.cache.set_associative()) {
    throw ConfigError(std::string("policy ") + std::string(to_string(o.cache.policy)) +
                      " is single-threaded; use --threads 1");
  }
  if (o.record && o.threads != 1) throw ConfigError("trace recording requires threads=1");
  if (o.warmup_curve && o.threads != 1) throw ConfigError("warmup curves require threads=1");
  if (o.cache.lanes == 8) {
    std::uint64_t max_key = o.workload.record_count;
    if (o.workload.distribution == Distribution::latest) max_key += o.workload.operation_count;
    if (o.replay) {
      for (const auto k : o.replay->keys) max_key = std::max(max_key, k);
    }
    if (max_key >= (std::uint64_t{1} << 31)) throw ConfigError("P=8 uses 32-bit keys; keys must stay below 2^31");
  }
}

template <LaneWord Key>
WorkerResult run_worker(KeyValueCache<Key>& cache, const ExperimentOptions& o, unsigned worker,
                        std::uint64_t first_op, std::uint64_t ops, ObjectPool* pool, unsigned locations) {
  WorkerResult r;
  r.location_hits.assign(locations, 0);
  std::optional<RequestStream> stream;
  if (!o.replay) stream.emplace(o.workload, worker);

  std::vector<std::uint64_t> checkpoints;
  if (o.warmup_curve) checkpoints = warmup_checkpoints(ops);
  std::size_t next_cp = 0;
  std::uint64_t last_hits = 0, last_ops = 0;

  for (std::uint64_t i = 0; i < ops; ++i) {
    const std::uint64_t key = o.replay ? o.replay->keys[first_op + i] : stream->next();
    if (o.record) o.record->keys.push_back(key);
    const auto res = run_flow<Key>(cache, static_cast<Key>(key), pool, worker);
    if (res.hit()) {
      ++r.hits;
      if (res.hit_vector >= 1 && res.hit_vector <= locations) ++r.location_hits[res.hit_vector - 1];
    } else {
      ++r.misses;
    }
    if (next_cp < checkpoints.size() && i + 1 == checkpoints[next_cp]) {
      const std::uint64_t done = i + 1;
      const double interval = done > last_ops ? static_cast<double>(r.hits - last_hits) / (done - last_ops) : 0.0;
      r.warmup.push_back({done, static_cast<double>(r.hits) / done, interval});
      last_hits = r.hits;
      last_ops = done;
      ++next_cp;
    }
  }
  return r;
}

template <LaneWord Key>
MetricsReport run_typed(const ExperimentOptions& o) {
  auto cache = make_cache<Key>(o.cache);
  if (o.init == InitMode::random) fill_with_garbage<Key>(*cache, o.workload.seed);

  const std::uint64_t total = o.replay ? o.replay->keys.size() : o.workload.operation_count;
  const unsigned locations = cache->stats().locations;

  std::unique_ptr<ObjectPool> pool;
  if (o.touch_bytes > 0) {
    const std::size_t per_worker = 2 * o.cache.capacity_items() / o.threads + 1;
    pool = std::make_unique<ObjectPool>(per_worker, o.threads, o.touch_bytes);
  }
  if (o.record) {
    o.record->record_count = o.replay ? o.replay->record_count : o.workload.record_count;
    o.record->keys.clear();
    o.record->keys.reserve(total);
  }

  std::vector<WorkerResult> results(o.threads);
  const auto start = std::chrono::steady_clock::now();
  if (o.threads == 1) {
    results[0] = run_worker<Key>(*cache, o, 0, 0, total, pool.get(), locations);
  } else {
    std::vector<std::thread> workers;
    std::uint64_t first = 0;
    for (unsigned t = 0; t < o.threads; ++t) {
      const std::uint64_t share = total / o.threads + (t < total % o.threads ? 1 : 0);
      workers.emplace_back([&, t, first, share] {
        results[t] = run_worker<Key>(*cache, o, t, first, share, pool.get(), locations);
      });
      first += share;
    }
    for (auto& w : workers) w.join();
  }
  const auto stop = std::chrono::steady_clock::now();

  MetricsReport rep;
  rep.policy = o.cache.policy;
  rep.cache = cache->config();
  rep.cache.capacity = rep.cache.capacity_items();
  rep.workload = o.workload;
  if (o.replay) {
    rep.workload.record_count = o.replay->record_count;
    rep.workload.operation_count = o.replay->keys.size();
  }
  rep.threads = o.threads;
  rep.init = o.init;
  rep.touch_bytes = o.touch_bytes;
  rep.replayed = o.replay != nullptr;
  rep.location_hits.assign(locations, 0);
  for (const auto& r : results) {
    rep.hits += r.hits;
    rep.misses += r.misses;
    for (unsigned i = 0; i < locations; ++i) rep.location_hits[i] += r.location_hits[i];
  }
  rep.warmup = results[0].warmup;
  rep.hit_ratio_defined = rep.operations() > 0;
  rep.hit_ratio = rep.hit_ratio_defined ? static_cast<double>(rep.hits) / rep.operations() : 0.0;
  rep.wall_time_s = std::chrono::duration<double>(stop - start).count();
  rep.throughput_ops_s = rep.wall_time_s > 0 ? rep.operations() / rep.wall_time_s : 0.0;
  return rep;
}

std::string join_hits(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

MetricsReport run_experiment(const ExperimentOptions& options) {
  check_options(options);
  if (options.cache.lanes == 4) return run_typed<std::uint64_t>(options);
  return run_typed<std::uint32_t>(options);
}

std::vector<MetricsReport> sweep(const ExperimentOptions& base, SweepAxis axis, std::span<const std::uint64_t> points) {
  std::vector<MetricsReport> out;
  out.reserve(points.size());
  const std::size_t total_capacity = base.cache.capacity_items();
  for (const auto point : points) {
    ExperimentOptions o = base;
    switch (axis) {
      case SweepAxis::cache_size:
        o.cache = CacheConfig::with_capacity(base.cache.policy, point, base.cache.vectors, base.cache.lanes);
        break;
      case SweepAxis::vectors:
        o.cache = CacheConfig::with_capacity(base.cache.policy, total_capacity, static_cast<unsigned>(point),
                                             base.cache.lanes);
        break;
      case SweepAxis::threads:
        o.threads = static_cast<unsigned>(point);
        break;
    }
    out.push_back(run_experiment(o));
  }
  return out;
}

std::string_view csv_header() {
  return "policy,dist,alpha,records,ops,sets,m,p,capacity,threads,init,touch_bytes,seed,"
         "hits,misses,hit_ratio,hit_ratio_defined,location_hits,wall_time_s,throughput_ops_s";
}

void write_csv(std::ostream& out, std::span<const MetricsReport> reports) {
  out << csv_header() << '\n';
  for (const auto& r : reports) {
    std::ostringstream row;
    row.precision(10);
    row << to_string(r.policy) << ',' << to_string(r.workload.distribution) << ',' << r.workload.alpha << ','
        << r.workload.record_count << ',' << r.operations() << ',' << (r.cache.set_associative() ? r.cache.num_sets : 0)
        << ',' << r.cache.effective_vectors() << ',' << r.cache.lanes << ',' << r.cache.capacity_items() << ','
        << r.threads << ',' << to_string(r.init) << ',' << r.touch_bytes << ',' << r.workload.seed << ',' << r.hits
        << ',' << r.misses << ',' << r.hit_ratio << ',' << (r.hit_ratio_defined ? 1 : 0) << ','
        << join_hits(r.location_hits) << ',' << r.wall_time_s << ',' << r.throughput_ops_s;
    out << row.str() << '\n';
  }
}

void write_warmup_csv(std::ostream& out, std::span<const MetricsReport> reports) {
  out << "policy,m,capacity,init,ops_processed,cumulative_hit_ratio,interval_hit_ratio\n";
  for (const auto& r : reports) {
    for (const auto& w : r.warmup) {
      std::ostringstream row;
      row.precision(10);
      row << to_string(r.policy) << ',' << r.cache.effective_vectors() << ',' << r.cache.capacity_items() << ','
          << to_string(r.init) << ',' << w.ops << ',' << w.cumulative_hit_ratio << ',' << w.interval_hit_ratio;
      out << row.str() << '\n';
    }
  }
}

void write_json(std::ostream& out, std::span<const MetricsReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["policy"] = to_string(r.policy);
    j["config"] = {{"sets", r.cache.set_associative() ? r.cache.num_sets : 0},
                   {"m", r.cache.effective_vectors()},
                   {"p", r.cache.lanes},
                   {"capacity", r.cache.capacity_items()}};
    j["workload"] = {{"dist", to_string(r.workload.distribution)},
                     {"alpha", r.workload.alpha},
                     {"records", r.workload.record_count},
                     {"ops", r.workload.operation_count},
                     {"max_scan_len", r.workload.max_scan_length},
                     {"seed", r.workload.seed},
                     {"replayed", r.replayed}};
    j["threads"] = r.threads;
    j["init"] = to_string(r.init);
    j["touch_bytes"] = r.touch_bytes;
    j["hits"] = r.hits;
    j["misses"] = r.misses;
    j["hit_ratio"] = r.hit_ratio;
    j["hit_ratio_defined"] = r.hit_ratio_defined;
    j["location_hits"] = r.location_hits;
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& w : r.warmup) {
      curve.push_back({{"ops", w.ops}, {"cumulative_hit_ratio", w.cumulative_hit_ratio},
                       {"interval_hit_ratio", w.interval_hit_ratio}});
    }
    j["warmup"] = std::move(curve);
    j["wall_time_s"] = r.wall_time_s;
    j["throughput_ops_s"] = r.throughput_ops_s;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

}  // namespace mslru
