#pragma once

#include <memory>

#include "mslru/baselines/arc.hpp"
#include "mslru/baselines/exact_lru.hpp"
#include "mslru/baselines/gclock.hpp"
#include "mslru/cache.hpp"
#include "mslru/policy.hpp"

namespace mslru {

template <LaneWord Key>
std::unique_ptr<KeyValueCache<Key>> make_cache(const CacheConfig& config) {
  config.validate();
  switch (config.policy) {
    case Policy::multistep:
    case Policy::invector:
      return std::make_unique<SetAssociativeCache<Key>>(config);
    case Policy::exact_lru:
      return std::make_unique<ExactLruCache<Key>>(config);
    case Policy::gclock:
      return std::make_unique<GclockCache<Key>>(config);
    case Policy::arc:
      return std::make_unique<ArcCache<Key>>(config);
  }
  throw ConfigError("unknown policy");
}

}  // namespace mslru
