#include "mslru/policy.hpp"

#include <string>

namespace mslru {

std::string_view to_string(Policy p) {
  switch (p) {
    case Policy::multistep: return "multistep";
    case Policy::invector: return "invector";
    case Policy::gclock: return "gclock";
    case Policy::exact_lru: return "lru";
    case Policy::arc: return "arc";
  }
  return "unknown";
}

std::optional<Policy> parse_policy(std::string_view name) {
  if (name == "multistep") return Policy::multistep;
  if (name == "invector") return Policy::invector;
  if (name == "gclock") return Policy::gclock;
  if (name == "lru" || name == "exact_lru") return Policy::exact_lru;
  if (name == "arc") return Policy::arc;
  return std::nullopt;
}

std::size_t CacheConfig::capacity_items() const {
  if (set_associative()) return num_sets * effective_vectors() * lanes;
  return capacity;
}

void CacheConfig::validate() const {
  if (lanes != 4 && lanes != 8) throw ConfigError("P must be 4 or 8, got " + std::to_string(lanes));
  if (set_associative()) {
    if (num_sets == 0) throw ConfigError("num_sets must be positive");
    const unsigned m = effective_vectors();
    if (m != 1 && m != 2 && m != 4 && m != 8) throw ConfigError("M must be one of 1, 2, 4, 8, got " + std::to_string(m));
  } else if (capacity == 0) {
    throw ConfigError("capacity must be positive");
  }
}

CacheConfig CacheConfig::with_capacity(Policy policy, std::size_t items, unsigned vectors, unsigned lanes) {
  CacheConfig c;
  c.policy = policy;
  c.vectors = policy == Policy::invector ? 1 : vectors;
  c.lanes = lanes;
  if (c.set_associative()) {
    const std::size_t per_set = static_cast<std::size_t>(c.vectors) * lanes;
    if (per_set == 0 || items == 0 || items % per_set != 0) {
      throw ConfigError("capacity " + std::to_string(items) + " is not a positive multiple of M*P=" +
                        std::to_string(per_set));
    }
    c.num_sets = items / per_set;
  }
  c.capacity = items;
  c.validate();
  return c;
}

}  // namespace mslru
