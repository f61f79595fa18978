#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "mslru/policy.hpp"

namespace mslru {

/// Generalized CLOCK. Each slot keeps a 4-bit reference count in the top
/// four bits of its value word, so stored values are limited to
/// kValueBits bits. Hits bump the count (saturating at 15); an eviction sweep
/// walks from the hand, decrementing positive counts, and replaces the first
/// slot whose count is zero. The hand only moves during sweeps.
template <LaneWord Key>
class GclockCache final : public KeyValueCache<Key> {
 public:
  static constexpr unsigned kCountBits = 4;
  static constexpr unsigned kValueBits = sizeof(Key) * 8 - kCountBits;
  static constexpr Key kValueMask = (Key{1} << kValueBits) - 1;
  static constexpr unsigned kMaxCount = (1u << kCountBits) - 1;

  struct Slot {
    Key key = kEmptyKey<Key>;
    Key tagged = 0;

    Key value() const { return tagged & kValueMask; }
    unsigned count() const { return static_cast<unsigned>(tagged >> kValueBits); }
    void set(Key v, unsigned c) { tagged = (v & kValueMask) | (static_cast<Key>(c) << kValueBits); }
  };

  explicit GclockCache(const CacheConfig& config) : config_(config), slots_(config.capacity) {
    config_.validate();
    free_.reserve(slots_.size());
    for (std::size_t i = slots_.size(); i-- > 0;) free_.push_back(i);
    index_.reserve(slots_.size());
  }

  Lookup<Key> get(Key k) override {
    require_valid_key(k);
    const auto it = index_.find(k);
    if (it == index_.end()) return {};
    Slot& s = slots_[it->second];
    s.set(s.value(), std::min(s.count() + 1, kMaxCount));
    return {s.value(), 1};
  }

  PutResult<Key> put(Key k, Key value) override {
    require_valid_key(k);
    if (value > kValueMask) throw std::invalid_argument("value does not fit beside the reference count");
    if (const auto it = index_.find(k); it != index_.end()) {
      Slot& s = slots_[it->second];
      s.set(value, std::min(s.count() + 1, kMaxCount));
      return {};
    }
    PutResult<Key> result{true, std::nullopt};
    std::size_t where;
    if (!free_.empty()) {
      where = free_.back();
      free_.pop_back();
    } else {
      where = sweep();
      result.evicted = slots_[where].key;
      index_.erase(slots_[where].key);
    }
    slots_[where].key = k;
    slots_[where].set(value, 0);
    index_.emplace(k, where);
    return result;
  }

  bool erase(Key k) override {
    require_valid_key(k);
    const auto it = index_.find(k);
    if (it == index_.end()) return false;
    slots_[it->second] = Slot{};
    free_.push_back(it->second);
    index_.erase(it);
    return true;
  }

  CacheStats stats() const override { return {index_.size(), slots_.size(), 1}; }

  AuditReport audit() const override {
    AuditReport report;
    report.occupancy = index_.size();
    if (!slots_.empty() && hand_ >= slots_.size()) report.fail("hand out of range");
    if (index_.size() + free_.size() != slots_.size()) report.fail("slot accounting mismatch");
    for (const auto& [key, at] : index_) {
      if (slots_[at].key != key) report.fail("index entry does not match its slot");
    }
    return report;
  }

  const CacheConfig& config() const override { return config_; }

  std::size_t hand() const { return hand_; }
  const Slot& slot(std::size_t i) const { return slots_[i]; }
  /// Slots visited by the most recent eviction sweep.
  std::size_t last_sweep_steps() const { return last_sweep_steps_; }

 private:
  std::size_t sweep() {
    last_sweep_steps_ = 0;
    for (;;) {
      Slot& s = slots_[hand_];
      const std::size_t at = hand_;
      hand_ = hand_ + 1 == slots_.size() ? 0 : hand_ + 1;
      ++last_sweep_steps_;
      if (s.count() == 0) return at;
      s.set(s.value(), s.count() - 1);
    }
  }

  CacheConfig config_;
  std::vector<Slot> slots_;
  std::vector<std::size_t> free_;
  std::unordered_map<Key, std::size_t> index_;
  std::size_t hand_ = 0;
  std::size_t last_sweep_steps_ = 0;
};

}  // namespace mslru
