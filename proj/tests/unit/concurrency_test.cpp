#include <cstdint>

#include <gtest/gtest.h>

#include "common/stress.hpp"
#include "mslru/cache.hpp"
#include "mslru/spin_lock.hpp"

namespace mslru {
namespace {

TEST(SpinLock, IsOneByteAndReleases) {
  LockByte lock{0};
  static_assert(sizeof(lock) == 1);
  {
    SpinLockGuard guard(lock);
    EXPECT_EQ(lock.load(), 1);
  }
  EXPECT_EQ(lock.load(), 0);
}

TEST(Concurrency, MixedStressKeepsInvariants) {
  CacheConfig config;
  config.policy = Policy::multistep;
  config.num_sets = 64;
  config.vectors = 2;
  config.lanes = 4;
  SetAssociativeCache<std::uint64_t> cache(config);
  const auto r = testing::run_stress(cache, 8, 200000, 2000, 1);
  EXPECT_EQ(r.hits + r.misses, r.flows);
  EXPECT_EQ(r.foreign_values, 0u);
  EXPECT_TRUE(r.balanced()) << r.inserts << " - " << r.evictions << " - " << r.deletes << " != " << r.occupancy;
  EXPECT_TRUE(r.audit.ok) << (r.audit.problems.empty() ? "" : r.audit.problems.front());
  EXPECT_EQ(r.audit.held_locks, 0u);
}

TEST(Concurrency, TinyCacheHeavyContention) {
  CacheConfig config;
  config.policy = Policy::invector;
  config.num_sets = 2;
  config.vectors = 1;
  config.lanes = 4;
  SetAssociativeCache<std::uint64_t> cache(config);
  const auto r = testing::run_stress(cache, 4, 50000, 16, 2);
  EXPECT_EQ(r.foreign_values, 0u);
  EXPECT_TRUE(r.balanced());
  EXPECT_TRUE(r.audit.ok);
}

}  // namespace
}  // namespace mslru
