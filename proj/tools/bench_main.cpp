// bench: trace-driven hit-ratio and throughput harness.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mslru/bench.hpp"

namespace {

std::vector<std::uint64_t> parse_points(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string item = csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item.empty()) throw mslru::ConfigError("empty sweep point in '" + csv + "'");
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size()) throw mslru::ConfigError("bad sweep point '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-step LRU cache benchmark"};

  std::string policy = "multistep";
  std::size_t sets = 0;
  unsigned m = 2;
  unsigned p = 4;
  std::size_t capacity = 0;
  std::string dist = "zipfian";
  mslru::WorkloadSpec workload;
  unsigned threads = 1;
  std::string init = "empty";
  std::size_t touch = 0;
  bool warmup = false;
  bool breakdown = false;
  std::string out_path;
  std::string format = "csv";
  std::string record_path;
  std::string replay_path;
  std::string sweep_axis;
  std::string sweep_points;

  app.add_option("--policy", policy, "multistep|invector|gclock|lru|arc")
      ->check(CLI::IsMember({"multistep", "invector", "gclock", "lru", "exact_lru", "arc"}));
  app.add_option("--sets", sets, "Number of sets (set-associative policies)");
  app.add_option("--m", m, "Vectors per set (M)");
  app.add_option("--p", p, "Lanes per vector (4: 64-bit keys, 8: 32-bit keys)");
  app.add_option("--capacity", capacity, "Cache capacity in items");
  app.add_option("--dist", dist, "zipfian|latest|scan")->check(CLI::IsMember({"zipfian", "latest", "scan"}));
  app.add_option("--alpha", workload.alpha, "Zipfian skew exponent");
  app.add_option("--records", workload.record_count, "Number of distinct keys");
  app.add_option("--ops", workload.operation_count, "Number of key requests");
  app.add_option("--max-scan-len", workload.max_scan_length, "Upper bound of uniform scan length");
  app.add_option("--threads", threads, "Worker threads (multistep/invector only when > 1)");
  app.add_option("--seed", workload.seed, "PRNG seed");
  app.add_option("--init", init, "empty|random")->check(CLI::IsMember({"empty", "random"}));
  app.add_option("--touch-bytes", touch, "Bytes of the cached object read on hit / written on miss");
  app.add_flag("--warmup-curve", warmup, "Emit warmup checkpoints (CSV output switches to the warmup table)");
  app.add_flag("--breakdown", breakdown, "Print per-location hit counts to stderr");
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--record-trace", record_path, "Write the issued request keys to FILE (binary; .txt for text)");
  app.add_option("--replay-trace", replay_path, "Read request keys from FILE instead of generating them");
  app.add_option("--sweep-axis", sweep_axis, "cache_size|m|threads")
      ->check(CLI::IsMember({"cache_size", "m", "threads"}));
  app.add_option("--sweep-points", sweep_points, "Comma-separated axis values");

  CLI11_PARSE(app, argc, argv);

  try {
    mslru::ExperimentOptions options;
    const auto pol = *mslru::parse_policy(policy);
    if (pol == mslru::Policy::multistep || pol == mslru::Policy::invector) {
      const unsigned vectors = pol == mslru::Policy::invector ? 1 : m;
      if (sets == 0) {
        if (capacity == 0) throw mslru::ConfigError("set-associative policies need --sets or --capacity");
        options.cache = mslru::CacheConfig::with_capacity(pol, capacity, vectors, p);
      } else {
        options.cache.policy = pol;
        options.cache.num_sets = sets;
        options.cache.vectors = vectors;
        options.cache.lanes = p;
        options.cache.capacity = options.cache.capacity_items();
        if (capacity != 0 && capacity != options.cache.capacity) {
          throw mslru::ConfigError("--capacity disagrees with --sets x M x P");
        }
      }
    } else {
      if (capacity == 0) capacity = sets * m * p;
      if (capacity == 0) throw mslru::ConfigError("list-based policies need --capacity");
      options.cache = mslru::CacheConfig::with_capacity(pol, capacity, m, p);
    }
    options.cache.validate();

    workload.distribution = *mslru::parse_distribution(dist);
    options.workload = workload;
    options.threads = threads;
    options.init = *mslru::parse_init_mode(init);
    options.touch_bytes = touch;
    options.warmup_curve = warmup;

    mslru::Trace replay;
    if (!replay_path.empty()) {
      replay = mslru::read_trace(replay_path);
      options.replay = &replay;
    }
    mslru::Trace recorded;
    if (!record_path.empty()) options.record = &recorded;

    std::vector<mslru::MetricsReport> reports;
    if (!sweep_axis.empty()) {
      if (sweep_points.empty()) throw mslru::ConfigError("--sweep-axis needs --sweep-points");
      const auto points = parse_points(sweep_points);
      reports = mslru::sweep(options, *mslru::parse_sweep_axis(sweep_axis), points);
    } else {
      reports.push_back(mslru::run_experiment(options));
    }

    if (!record_path.empty()) {
      if (record_path.ends_with(".txt")) {
        mslru::write_trace_text(recorded, record_path);
      } else {
        mslru::write_trace_binary(recorded, record_path);
      }
    }

    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path, std::ios::trunc);
      if (!file) throw mslru::ConfigError("cannot open " + out_path);
    }
    std::ostream& out = out_path.empty() ? std::cout : file;
    if (format == "json") {
      mslru::write_json(out, reports);
    } else if (warmup) {
      mslru::write_warmup_csv(out, reports);
    } else {
      mslru::write_csv(out, reports);
    }

    if (breakdown) {
      for (const auto& r : reports) {
        std::cerr << mslru::to_string(r.policy) << " hits by location:";
        for (std::size_t i = 0; i < r.location_hits.size(); ++i) {
          const double share = r.hits ? 100.0 * r.location_hits[i] / r.hits : 0.0;
          std::cerr << " [" << i + 1 << "] " << r.location_hits[i] << " (" << share << "%)";
        }
        std::cerr << '\n';
      }
    }
  } catch (const mslru::ConfigError& e) {
    std::cerr << "bench: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
