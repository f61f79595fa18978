// Set-associative key-value cache using multi-step LRU (or plain in-vector
// LRU) inside each set.
//
// Memory layout. Sets live in one 32-byte aligned allocation with a fixed
// stride of (2M + 1) vectors:
//
//   [ key vector 0 .. key vector M-1 | value vector 0 .. M-1 | lock ]
//
// The lock is a single byte at the start of the trailing 32-byte slot; the
// remaining 31 bytes are padding so that every set, and therefore every
// vector, stays vector-aligned. With M=2, P=4 a set occupies 160 bytes.
#pragma once

#include <cassert>
#include <cstddef>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <unordered_set>

#include "mslru/hash.hpp"
#include "mslru/multistep_set.hpp"
#include "mslru/policy.hpp"
#include "mslru/spin_lock.hpp"

namespace mslru {

template <LaneWord Key>
class SetAssociativeCache final : public KeyValueCache<Key> {
 public:
  static constexpr unsigned kP = kLanes<Key>;

  explicit SetAssociativeCache(const CacheConfig& config) : config_(config) {
    config_.validate();
    if (!config_.set_associative()) throw ConfigError("SetAssociativeCache needs multistep or invector");
    if (config_.lanes != kP) throw ConfigError("lane count does not match the key width");
    if (config_.policy == Policy::invector) config_.vectors = 1;
    vectors_ = config_.vectors;
    stride_ = (2 * static_cast<std::size_t>(vectors_) + 1) * kVectorBytes;
    storage_.reset(static_cast<std::byte*>(
        ::operator new[](stride_ * config_.num_sets, std::align_val_t{kVectorBytes})));
    for (std::size_t s = 0; s < config_.num_sets; ++s) {
      std::byte* base = storage_.get() + s * stride_;
      auto* keys = reinterpret_cast<KeyVector<Key>*>(base);
      for (unsigned i = 0; i < vectors_; ++i) new (keys + i) KeyVector<Key>(empty_key_vector<Key>());
      auto* values = keys + vectors_;
      for (unsigned i = 0; i < vectors_; ++i) new (values + i) LaneVector<Key>();
      new (values + vectors_) LockByte(0);
    }
  }

  std::size_t num_sets() const { return config_.num_sets; }
  std::size_t set_of(Key k) const { return hash_to_set(k, config_.num_sets); }

  Lookup<Key> get(Key k) override {
    require_valid_key(k);
    const std::size_t s = set_of(k);
    SpinLockGuard guard(lock(s));
    if (config_.policy == Policy::invector) return invector_view(s).get(k);
    return multistep_view(s).get(k);
  }

  PutResult<Key> put(Key k, Key value) override {
    require_valid_key(k);
    const std::size_t s = set_of(k);
    SpinLockGuard guard(lock(s));
    if (config_.policy == Policy::invector) {
      auto set = invector_view(s);
      if (set.update(k, value)) return {};
      return {true, set.put(k, value)};
    }
    auto set = multistep_view(s);
    if (set.update(k, value)) return {};
    return {true, set.put(k, value)};
  }

  bool erase(Key k) override {
    require_valid_key(k);
    const std::size_t s = set_of(k);
    SpinLockGuard guard(lock(s));
    if (config_.policy == Policy::invector) return invector_view(s).erase(k);
    return multistep_view(s).erase(k);
  }

  CacheStats stats() const override {
    CacheStats st;
    st.capacity = config_.capacity_items();
    st.locations = vectors_;
    for (std::size_t s = 0; s < config_.num_sets; ++s) st.occupancy += const_view(s).occupancy();
    return st;
  }

  AuditReport audit() const override {
    AuditReport report;
    std::unordered_set<Key> seen;
    for (std::size_t s = 0; s < config_.num_sets; ++s) {
      if (lock(s).load(std::memory_order_acquire) != 0) {
        ++report.held_locks;
        report.fail("lock held on set " + std::to_string(s));
      }
      const auto set = const_view(s);
      for (unsigned i = 0; i < vectors_; ++i) {
        const auto& v = set.key_vector(i);
        bool hole = false;
        for (unsigned j = 0; j < kP; ++j) {
          const Key k = v.lane[j];
          if (k == kEmptyKey<Key>) {
            hole = true;
            continue;
          }
          ++report.occupancy;
          if (hole) report.fail("valid lane after an empty one in set " + std::to_string(s));
          if (set_of(k) != s) report.fail("key " + std::to_string(k) + " resides outside its set");
          if (!seen.insert(k).second) report.fail("key " + std::to_string(k) + " stored twice");
        }
      }
    }
    return report;
  }

  const CacheConfig& config() const override { return config_; }
  bool thread_safe() const override { return true; }

  /// Unsynchronized view of one set, for tests and debugging.
  MultiStepSetRef<Key> multistep_view(std::size_t s) { return {key_span(s), value_span(s)}; }

  /// Inserts `k` only if its set has a free lane. Used to pre-fill the cache.
  bool insert_if_room(Key k, Key value) {
    require_valid_key(k);
    const std::size_t s = set_of(k);
    SpinLockGuard guard(lock(s));
    auto set = multistep_view(s);
    if (set.full() || set.find(k)) return false;
    set.put(k, value);
    return true;
  }

  const LockByte& lock_byte(std::size_t s) const { return lock(s); }

 private:
  struct AlignedDelete {
    void operator()(std::byte* p) const { ::operator delete[](p, std::align_val_t{kVectorBytes}); }
  };

  KeyVector<Key>* key_base(std::size_t s) const {
    return std::launder(reinterpret_cast<KeyVector<Key>*>(storage_.get() + s * stride_));
  }
  std::span<KeyVector<Key>> key_span(std::size_t s) const { return {key_base(s), vectors_}; }
  std::span<LaneVector<Key>> value_span(std::size_t s) const { return {key_base(s) + vectors_, vectors_}; }

  LockByte& lock(std::size_t s) const {
    return *std::launder(reinterpret_cast<LockByte*>(key_base(s) + 2 * vectors_));
  }

  InVectorSetRef<Key> invector_view(std::size_t s) { return {key_base(s)[0], key_base(s)[1]}; }
  const MultiStepSetRef<Key> const_view(std::size_t s) const { return {key_span(s), value_span(s)}; }

  CacheConfig config_;
  unsigned vectors_ = 1;
  std::size_t stride_ = 0;
  std::unique_ptr<std::byte[], AlignedDelete> storage_;
};

}  // namespace mslru
