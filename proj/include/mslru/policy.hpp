// Common configuration and the policy-agnostic cache interface shared by the
// set-associative cache and the list-based baselines.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mslru/lane_ops.hpp"
#include "mslru/multistep_set.hpp"

namespace mslru {

enum class Policy { multistep, invector, gclock, exact_lru, arc };

std::string_view to_string(Policy p);
/// Accepts the CLI spellings (multistep, invector, gclock, lru, arc) plus
/// "exact_lru".
std::optional<Policy> parse_policy(std::string_view name);

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CacheConfig {
  Policy policy = Policy::multistep;
  /// Set-associative policies only.
  std::size_t num_sets = 0;
  unsigned vectors = 2;
  unsigned lanes = 4;
  /// List-based policies only; derived for set-associative ones.
  std::size_t capacity = 0;

  bool set_associative() const { return policy == Policy::multistep || policy == Policy::invector; }
  unsigned effective_vectors() const { return policy == Policy::invector ? 1 : vectors; }
  std::size_t capacity_items() const;

  /// Throws ConfigError describing the first violated constraint.
  void validate() const;

  /// Builds a config holding `items` items. For set-associative policies the
  /// item count must be a positive multiple of M x P.
  static CacheConfig with_capacity(Policy policy, std::size_t items, unsigned vectors, unsigned lanes);
};

template <LaneWord Key>
using Lookup = SetLookupResult<Key>;

template <LaneWord Key>
struct PutResult {
  /// False when the key was already present and only its value changed.
  bool inserted = false;
  std::optional<Key> evicted;
};

struct CacheStats {
  std::size_t occupancy = 0;
  std::size_t capacity = 0;
  /// Number of distinct hit locations reported by Lookup::hit_vector.
  unsigned locations = 1;
};

struct AuditReport {
  bool ok = true;
  std::size_t occupancy = 0;
  std::size_t held_locks = 0;
  std::vector<std::string> problems;

  void fail(std::string what) {
    ok = false;
    if (problems.size() < 32) problems.push_back(std::move(what));
  }
};

/// Keys equal to kEmptyKey<Key> are rejected with std::invalid_argument.
template <LaneWord Key>
class KeyValueCache {
 public:
  using key_type = Key;
  using value_type = Key;

  virtual ~KeyValueCache() = default;

  virtual Lookup<Key> get(Key k) = 0;
  virtual PutResult<Key> put(Key k, Key value) = 0;
  virtual bool erase(Key k) = 0;

  virtual CacheStats stats() const = 0;
  /// Full scan of internal invariants. Not safe against concurrent writers.
  virtual AuditReport audit() const = 0;
  virtual const CacheConfig& config() const = 0;
  virtual bool thread_safe() const { return false; }
};

template <LaneWord Key>
inline void require_valid_key(Key k) {
  if (k == kEmptyKey<Key>) throw std::invalid_argument("the all-ones key is reserved for empty lanes");
}

}  // namespace mslru
