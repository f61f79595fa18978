#include "mslru/workload.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace mslru {

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::zipfian: return "zipfian";
    case Distribution::latest: return "latest";
    case Distribution::scan: return "scan";
  }
  return "unknown";
}

std::optional<Distribution> parse_distribution(std::string_view name) {
  if (name == "zipfian" || name == "zipf") return Distribution::zipfian;
  if (name == "latest") return Distribution::latest;
  if (name == "scan") return Distribution::scan;
  return std::nullopt;
}

void WorkloadSpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be a positive number");
  if (record_count < 1) throw std::invalid_argument("record_count must be at least 1");
  if (max_scan_length < 1) throw std::invalid_argument("max_scan_length must be at least 1");
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::uint64_t Rng::uniform(std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo;
  if (span == ~std::uint64_t{0}) return next();
  const std::uint64_t range = span + 1;
  // Reject the low partial bucket so every residue is equally likely.
  const std::uint64_t threshold = (std::uint64_t{0} - range) % range;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return lo + x % range;
  }
}

namespace {

// log1p(x)/x and expm1(x)/x with series fallbacks near zero.
double log1p_over_x(double x) {
  if (std::abs(x) > 1e-8) return std::log1p(x) / x;
  return 1.0 - x * (0.5 - x * (1.0 / 3.0 - 0.25 * x));
}

double expm1_over_x(double x) {
  if (std::abs(x) > 1e-8) return std::expm1(x) / x;
  return 1.0 + x * 0.5 * (1.0 + x * (1.0 / 3.0) * (1.0 + 0.25 * x));
}

}  // namespace

ZipfianSampler::ZipfianSampler(std::uint64_t n, double alpha) : n_(n), alpha_(alpha) {
  if (n == 0) throw std::invalid_argument("zipfian sampler needs at least one element");
  if (!(alpha > 0.0)) throw std::invalid_argument("zipfian exponent must be positive");
  h_integral_x1_ = h_integral(1.5) - 1.0;
  h_integral_n_ = h_integral(static_cast<double>(n) + 0.5);
  s_ = 2.0 - h_integral_inverse(h_integral(2.5) - h(2.0));
}

double ZipfianSampler::h(double x) const { return std::exp(-alpha_ * std::log(x)); }

double ZipfianSampler::h_integral(double x) const {
  const double log_x = std::log(x);
  return expm1_over_x((1.0 - alpha_) * log_x) * log_x;
}

double ZipfianSampler::h_integral_inverse(double x) const {
  double t = x * (1.0 - alpha_);
  if (t < -1.0) t = -1.0;
  return std::exp(log1p_over_x(t) * x);
}

std::uint64_t ZipfianSampler::sample(Rng& rng, std::uint64_t n) const {
  if (n == n_) return sample(rng, n_, h_integral_n_);
  return sample(rng, n, h_integral(static_cast<double>(n) + 0.5));
}

std::uint64_t ZipfianSampler::sample(Rng& rng, std::uint64_t n, double h_integral_n) const {
  for (;;) {
    const double u = h_integral_n + rng.uniform01() * (h_integral_x1_ - h_integral_n);
    const double x = h_integral_inverse(u);
    double kd = std::floor(x + 0.5);
    if (kd < 1.0) kd = 1.0;
    if (kd > static_cast<double>(n)) kd = static_cast<double>(n);
    const auto k = static_cast<std::uint64_t>(kd);
    if (kd - x <= s_ || u >= h_integral(kd + 0.5) - h(kd)) return k;
  }
}

KeyScrambler::KeyScrambler(std::uint64_t n, std::uint64_t seed) : n_(n) {
  if (n == 0) throw std::invalid_argument("scrambler domain must be non-empty");
  bits_ = n <= 2 ? 1u : static_cast<unsigned>(std::bit_width(n - 1));
  mask_ = bits_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits_) - 1;
  salt_ = seed & mask_;
}

std::uint64_t KeyScrambler::mix(std::uint64_t x) const {
  // Every step is a bijection on bits_-wide words.
  const unsigned shift = bits_ / 2 + 1;
  x ^= salt_;
  x = (x * 0xbf58476d1ce4e5b9ULL) & mask_;
  x ^= x >> shift;
  x = (x * 0x94d049bb133111ebULL) & mask_;
  x ^= x >> shift;
  x = (x * 0xff51afd7ed558ccdULL) & mask_;
  x ^= x >> shift;
  return x;
}

std::uint64_t KeyScrambler::operator()(std::uint64_t id) const {
  if (id == 0 || id > n_) return id;
  std::uint64_t x = mix(id - 1);
  while (x >= n_) x = mix(x);
  return x + 1;
}

ZipfianGenerator::ZipfianGenerator(const WorkloadSpec& spec)
    : sampler_(spec.record_count, spec.alpha), scramble_(spec.record_count, spec.seed ^ 0x5bd1e995ULL) {}

LatestGenerator::LatestGenerator(const WorkloadSpec& spec)
    : sampler_(spec.record_count, spec.alpha),
      scramble_(spec.record_count, spec.seed ^ 0x5bd1e995ULL),
      insert_count_(spec.record_count),
      seen_(spec.record_count + 1, false) {}

std::uint64_t LatestGenerator::draw(const ZipfianSampler& sampler, Rng& rng, std::uint64_t insert_count) {
  const std::uint64_t offset = sampler.sample(rng, insert_count);
  return insert_count - offset + 1;
}

std::uint64_t LatestGenerator::next_id(Rng& rng) {
  const std::uint64_t id = draw(sampler_, rng, insert_count_);
  if (!seen_[id]) {
    seen_[id] = true;
    ++insert_count_;
    seen_.push_back(false);
  }
  return id;
}

ScanGenerator::ScanGenerator(const WorkloadSpec& spec)
    : start_(spec), record_count_(spec.record_count), max_length_(spec.max_scan_length) {}

ScanRange ScanGenerator::next(Rng& rng) const {
  const std::uint64_t start = start_.next(rng);
  const std::uint64_t length = rng.uniform(1, max_length_);
  return {start, length};
}

RequestStream::RequestStream(const WorkloadSpec& spec, std::uint64_t stream) : spec_(spec), rng_(spec.seed, stream) {
  spec_.validate();
  switch (spec_.distribution) {
    case Distribution::zipfian: zipf_.emplace(spec_); break;
    case Distribution::latest: latest_.emplace(spec_); break;
    case Distribution::scan: scan_.emplace(spec_); break;
  }
}

std::uint64_t RequestStream::next() {
  if (zipf_) return zipf_->next(rng_);
  if (latest_) return latest_->next(rng_);
  while (scan_next_ >= scan_end_) {
    const ScanRange r = scan_->next(rng_);
    scan_next_ = r.start;
    scan_end_ = scan_end(r, spec_.record_count);
  }
  return scan_next_++;
}

std::uint64_t RequestStream::max_key() const {
  if (latest_) return latest_->insert_count();
  return spec_.record_count;
}

Trace generate_trace(const WorkloadSpec& spec) {
  RequestStream stream(spec, 0);
  Trace trace;
  trace.record_count = spec.record_count;
  trace.keys.resize(spec.operation_count);
  for (auto& k : trace.keys) k = stream.next();
  return trace;
}

namespace {

constexpr std::array<char, 8> kMagic = {'M', 'S', 'L', 'R', 'U', 'T', 'R', 'C'};
constexpr std::uint32_t kTraceVersion = 1;

template <class T>
void put_le(std::ostream& out, T v) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void write_trace_binary(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TraceError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kTraceVersion);
  put_le<std::uint32_t>(out, 8);
  put_le<std::uint64_t>(out, trace.record_count);
  put_le<std::uint64_t>(out, trace.keys.size());
  for (const auto k : trace.keys) put_le<std::uint64_t>(out, k);
  if (!out) throw TraceError("short write to " + path.string());
}

void write_trace_text(const Trace& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw TraceError("cannot open " + path.string() + " for writing");
  out << "# records " << trace.record_count << '\n';
  for (const auto k : trace.keys) out << k << '\n';
  if (!out) throw TraceError("short write to " + path.string());
}

Trace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  Trace trace;
  if (data.size() >= kMagic.size() && std::memcmp(data.data(), kMagic.data(), kMagic.size()) == 0) {
    constexpr std::size_t kHeader = 32;
    if (data.size() < kHeader) throw TraceError(path.string() + ": truncated header");
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    const auto version = get_le<std::uint32_t>(p + 8);
    const auto width = get_le<std::uint32_t>(p + 12);
    if (version != kTraceVersion) throw TraceError(path.string() + ": unsupported version " + std::to_string(version));
    if (width != 8) throw TraceError(path.string() + ": unsupported key width " + std::to_string(width));
    trace.record_count = get_le<std::uint64_t>(p + 16);
    const auto count = get_le<std::uint64_t>(p + 24);
    if ((data.size() - kHeader) / 8 != count || (data.size() - kHeader) % 8 != 0) {
      throw TraceError(path.string() + ": key count does not match file size");
    }
    trace.keys.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) trace.keys[i] = get_le<std::uint64_t>(p + kHeader + 8 * i);
    return trace;
  }

  std::istringstream lines(data);
  std::string line;
  std::optional<std::uint64_t> records;
  std::uint64_t max_key = 0;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream comment(line.substr(1));
      std::string word;
      std::uint64_t n;
      if (comment >> word && word == "records" && comment >> n) records = n;
      continue;
    }
    std::size_t used = 0;
    std::uint64_t k;
    try {
      k = std::stoull(line, &used);
    } catch (const std::exception&) {
      throw TraceError(path.string() + ":" + std::to_string(lineno) + ": not a key");
    }
    if (line.find_first_not_of(" \t\r", used) != std::string::npos) {
      throw TraceError(path.string() + ":" + std::to_string(lineno) + ": trailing characters");
    }
    trace.keys.push_back(k);
    max_key = std::max(max_key, k);
  }
  trace.record_count = records.value_or(max_key);
  return trace;
}

}  // namespace mslru
