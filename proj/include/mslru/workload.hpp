// YCSB-style request generators (zipfian, latest, scan) and trace files.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace mslru {

enum class Distribution { zipfian, latest, scan };

std::string_view to_string(Distribution d);
std::optional<Distribution> parse_distribution(std::string_view name);

struct WorkloadSpec {
  Distribution distribution = Distribution::zipfian;
  /// Skew exponent: rank i is drawn with probability proportional to 1/i^alpha.
  double alpha = 0.99;
  std::uint64_t record_count = 100'000;
  /// Number of key requests. A scan of length L contributes L requests.
  std::uint64_t operation_count = 1'000'000;
  std::uint64_t max_scan_length = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

/// mt19937_64 seeded from (seed, stream) through std::seed_seq, with
/// library-independent conversions so traces are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [lo, hi], both inclusive.
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi);

 private:
  std::mt19937_64 engine_;
};

/// Exact Zipf sampler over ranks [1, n] using rejection-inversion
/// (Hoermann and Derflinger, 1996). O(1) expected time per draw for any
/// exponent > 0, including exponent 1.
class ZipfianSampler {
 public:
  ZipfianSampler(std::uint64_t n, double alpha);

  std::uint64_t operator()(Rng& rng) const { return sample(rng, n_, h_integral_n_); }
  /// Draws from the same law truncated to [1, n]; n may differ per call.
  std::uint64_t sample(Rng& rng, std::uint64_t n) const;

  std::uint64_t size() const { return n_; }
  double alpha() const { return alpha_; }

 private:
  std::uint64_t sample(Rng& rng, std::uint64_t n, double h_integral_n) const;
  double h(double x) const;
  double h_integral(double x) const;
  double h_integral_inverse(double x) const;

  std::uint64_t n_;
  double alpha_;
  double h_integral_x1_;
  double h_integral_n_;
  double s_;
};

/// Keyed bijection on [1, n]: an invertible xor-multiply mix over the
/// smallest enclosing power of two, cycle-walked back into range. Ids above n
/// pass through unchanged so growing key spaces stay collision-free.
class KeyScrambler {
 public:
  explicit KeyScrambler(std::uint64_t n, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);

  std::uint64_t operator()(std::uint64_t id) const;
  std::uint64_t size() const { return n_; }

 private:
  std::uint64_t mix(std::uint64_t x) const;

  std::uint64_t n_;
  unsigned bits_;
  std::uint64_t mask_;
  std::uint64_t salt_;
};

struct ScanRange {
  std::uint64_t start;
  std::uint64_t length;
};

/// One past the last key a scan touches: start + length, clamped so no key
/// exceeds record_count.
constexpr std::uint64_t scan_end(const ScanRange& r, std::uint64_t record_count) {
  const std::uint64_t end = r.start + r.length;
  return end < record_count + 1 ? end : record_count + 1;
}

class ZipfianGenerator {
 public:
  explicit ZipfianGenerator(const WorkloadSpec& spec);

  std::uint64_t next_rank(Rng& rng) const { return sampler_(rng); }
  std::uint64_t next(Rng& rng) const { return scramble_(sampler_(rng)); }

  const ZipfianSampler& sampler() const { return sampler_; }
  const KeyScrambler& scrambler() const { return scramble_; }

 private:
  ZipfianSampler sampler_;
  KeyScrambler scramble_;
};

/// Most recently inserted ids are the most popular. insert_count starts at
/// record_count and grows by one each time the stream first requests an id
/// (a guaranteed miss-insert for every policy), which makes the hot set drift.
class LatestGenerator {
 public:
  explicit LatestGenerator(const WorkloadSpec& spec);

  /// Unscrambled recency draw: insert_count - o + 1 with o ~ Zipf[1, insert_count].
  static std::uint64_t draw(const ZipfianSampler& sampler, Rng& rng, std::uint64_t insert_count);

  std::uint64_t next_id(Rng& rng);
  std::uint64_t next(Rng& rng) { return scramble_(next_id(rng)); }
  std::uint64_t insert_count() const { return insert_count_; }

 private:
  ZipfianSampler sampler_;
  KeyScrambler scramble_;
  std::uint64_t insert_count_;
  std::vector<bool> seen_;
};

class ScanGenerator {
 public:
  explicit ScanGenerator(const WorkloadSpec& spec);

  ScanRange next(Rng& rng) const;
  std::uint64_t record_count() const { return record_count_; }

 private:
  ZipfianGenerator start_;
  std::uint64_t record_count_;
  std::uint64_t max_length_;
};

/// Flat stream of request keys for one worker. Scans are expanded into their
/// keys, truncated at record_count.
class RequestStream {
 public:
  RequestStream(const WorkloadSpec& spec, std::uint64_t stream);

  std::uint64_t next();
  std::uint64_t max_key() const;

 private:
  WorkloadSpec spec_;
  Rng rng_;
  std::optional<ZipfianGenerator> zipf_;
  std::optional<LatestGenerator> latest_;
  std::optional<ScanGenerator> scan_;
  std::uint64_t scan_next_ = 0;
  std::uint64_t scan_end_ = 0;
};

struct Trace {
  std::uint64_t record_count = 0;
  std::vector<std::uint64_t> keys;

  friend bool operator==(const Trace&, const Trace&) = default;
};

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generates spec.operation_count keys from stream 0.
Trace generate_trace(const WorkloadSpec& spec);

/// Binary layout, all integers little-endian:
///   bytes 0-7   magic "MSLRUTRC"
///   bytes 8-11  u32 version (1)
///   bytes 12-15 u32 key width in bytes (8)
///   bytes 16-23 u64 record_count
///   bytes 24-31 u64 operation_count
///   then operation_count u64 keys
void write_trace_binary(const Trace& trace, const std::filesystem::path& path);
/// One decimal key per line; lines starting with '#' are comments. A
/// "# records N" comment sets record_count, otherwise the largest key is used.
void write_trace_text(const Trace& trace, const std::filesystem::path& path);
/// Reads either format, detected by the magic bytes.
Trace read_trace(const std::filesystem::path& path);

}  // namespace mslru
