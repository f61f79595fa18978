// Replacement logic for one set of M key vectors x P lanes.
//
// Vector 0 is the highest tier and vector M-1 the lowest. New items enter at
// the MRU lane of the lowest tier. A hit at lane j > 0 promotes the item to
// lane 0 of its own vector; a hit at lane 0 of vector i > 0 swaps the item
// with the LRU item of vector i-1 (an "upgrade"). Each operation touches one
// vector, or two neighbouring vectors for an upgrade.
//
// The set types here are non-owning views over key/value vector arrays so
// the cache can lay sets out contiguously. SetBlock owns the storage for a
// single standalone set.
#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mslru/lane_ops.hpp"

namespace mslru {

template <LaneWord Key>
struct SetLookupResult {
  std::optional<Key> value;
  /// 1-based vector index of the hit, 0 on a miss.
  unsigned hit_vector = 0;

  bool hit() const { return value.has_value(); }
};

struct LaneCoord {
  unsigned vector;
  unsigned lane;

  friend bool operator==(const LaneCoord&, const LaneCoord&) = default;
};

template <LaneWord Key>
class MultiStepSetRef {
 public:
  static constexpr unsigned kP = kLanes<Key>;

  MultiStepSetRef(std::span<KeyVector<Key>> keys, std::span<LaneVector<Key>> values)
      : keys_(keys), values_(values) {
    assert(!keys_.empty() && keys_.size() == values_.size());
  }

  unsigned vectors() const { return static_cast<unsigned>(keys_.size()); }

  std::optional<LaneCoord> find(Key k) const {
    for (unsigned i = 0; i < vectors(); ++i) {
      if (auto lane = lane_ops::match_lane(keys_[i], k)) return LaneCoord{i, *lane};
    }
    return std::nullopt;
  }

  /// Applies hit movement to the item at `at` and returns where it ended up.
  LaneCoord touch(LaneCoord at) {
    const unsigned i = at.vector;
    if (at.lane > 0) {
      keys_[i] = lane_ops::promote(keys_[i], at.lane);
      values_[i] = lane_ops::promote(values_[i], at.lane);
      return {i, 0};
    }
    if (i == 0) return at;

    const unsigned upper = i - 1;
    const unsigned upper_valid = lane_ops::count_valid(keys_[upper]);
    if (upper_valid == kP) {
      std::swap(keys_[i].lane[0], keys_[upper].lane[kP - 1]);
      std::swap(values_[i].lane[0], values_[upper].lane[kP - 1]);
      return {upper, kP - 1};
    }
    // The upper vector has room: the item takes its first empty lane (its
    // LRU end) and the hole left behind is compacted away.
    keys_[upper].lane[upper_valid] = keys_[i].lane[0];
    values_[upper].lane[upper_valid] = values_[i].lane[0];
    keys_[i] = lane_ops::remove_lane(keys_[i], 0, kEmptyKey<Key>);
    values_[i] = lane_ops::remove_lane(values_[i], 0, Key{0});
    return {upper, upper_valid};
  }

  SetLookupResult<Key> get(Key k) {
    assert(k != kEmptyKey<Key>);
    const auto at = find(k);
    if (!at) return {};
    const unsigned hit_vector = at->vector + 1;
    const LaneCoord now = touch(*at);
    return {values_[now.vector].lane[now.lane], hit_vector};
  }

  /// Hit movement plus an in-place value overwrite. Returns false if absent.
  bool update(Key k, Key value) {
    const auto at = find(k);
    if (!at) return false;
    const LaneCoord now = touch(*at);
    values_[now.vector].lane[now.lane] = value;
    return true;
  }

  /// Inserts an absent key. Fills the lowest-tier vector that still has an
  /// empty lane; when the set is full, evicts the LRU lane of the last vector.
  std::optional<Key> put(Key k, Key value) {
    assert(k != kEmptyKey<Key>);
    assert(!find(k).has_value());
    for (unsigned i = vectors(); i-- > 0;) {
      const unsigned valid = lane_ops::count_valid(keys_[i]);
      if (valid < kP) {
        insert_front(i, valid, k, value);
        return std::nullopt;
      }
    }
    const unsigned last = vectors() - 1;
    const Key evicted = keys_[last].lane[kP - 1];
    insert_front(last, kP - 1, k, value);
    return evicted;
  }

  bool erase(Key k) {
    assert(k != kEmptyKey<Key>);
    const auto at = find(k);
    if (!at) return false;
    keys_[at->vector] = lane_ops::remove_lane(keys_[at->vector], at->lane, kEmptyKey<Key>);
    values_[at->vector] = lane_ops::remove_lane(values_[at->vector], at->lane, Key{0});
    return true;
  }

  std::size_t occupancy() const {
    std::size_t n = 0;
    for (const auto& v : keys_) n += lane_ops::count_valid(v);
    return n;
  }

  bool full() const { return occupancy() == static_cast<std::size_t>(vectors()) * kP; }

  const KeyVector<Key>& key_vector(unsigned i) const { return keys_[i]; }
  const LaneVector<Key>& value_vector(unsigned i) const { return values_[i]; }
  KeyVector<Key>& key_vector(unsigned i) { return keys_[i]; }
  LaneVector<Key>& value_vector(unsigned i) { return values_[i]; }

 private:
  // Brings lane `slot` to lane 0 (shifting the lanes before it one toward
  // LRU) and writes the new item there.
  void insert_front(unsigned vector, unsigned slot, Key k, Key value) {
    keys_[vector] = lane_ops::replace_lane0(lane_ops::promote(keys_[vector], slot), k);
    values_[vector] = lane_ops::set_lane0(lane_ops::promote(values_[vector], slot), value);
  }

  std::span<KeyVector<Key>> keys_;
  std::span<LaneVector<Key>> values_;
};

/// Exact LRU over the P lanes of a single vector.
template <LaneWord Key>
class InVectorSetRef {
 public:
  static constexpr unsigned kP = kLanes<Key>;

  InVectorSetRef(KeyVector<Key>& keys, LaneVector<Key>& values) : keys_(&keys), values_(&values) {}

  SetLookupResult<Key> get(Key k) {
    const auto lane = lane_ops::match_lane(*keys_, k);
    if (!lane) return {};
    *keys_ = lane_ops::promote(*keys_, *lane);
    *values_ = lane_ops::promote(*values_, *lane);
    return {values_->lane[0], 1};
  }

  bool update(Key k, Key value) {
    if (!get(k).hit()) return false;
    values_->lane[0] = value;
    return true;
  }

  std::optional<Key> put(Key k, Key value) {
    assert(!lane_ops::match_lane(*keys_, k).has_value());
    const unsigned valid = lane_ops::count_valid(*keys_);
    std::optional<Key> evicted;
    LaneVector<Key> keys, values;
    if (valid < kP) {
      keys = lane_ops::promote(*keys_, valid);
      values = lane_ops::promote(*values_, valid);
    } else {
      evicted = keys_->lane[kP - 1];
      keys = lane_ops::rotate_lru_to_front(*keys_);
      values = lane_ops::rotate_lru_to_front(*values_);
    }
    *keys_ = lane_ops::replace_lane0(keys, k);
    *values_ = lane_ops::set_lane0(values, value);
    return evicted;
  }

  bool erase(Key k) {
    const auto lane = lane_ops::match_lane(*keys_, k);
    if (!lane) return false;
    *keys_ = lane_ops::remove_lane(*keys_, *lane, kEmptyKey<Key>);
    *values_ = lane_ops::remove_lane(*values_, *lane, Key{0});
    return true;
  }

  std::size_t occupancy() const { return lane_ops::count_valid(*keys_); }

 private:
  KeyVector<Key>* keys_;
  LaneVector<Key>* values_;
};

/// Owning storage for one standalone set.
template <LaneWord Key>
class SetBlock {
 public:
  explicit SetBlock(unsigned vectors)
      : keys_(vectors, empty_key_vector<Key>()), values_(vectors) {
    assert(vectors > 0);
  }

  MultiStepSetRef<Key> multistep() { return {keys_, values_}; }
  InVectorSetRef<Key> invector() {
    assert(keys_.size() == 1);
    return {keys_[0], values_[0]};
  }

  unsigned vectors() const { return static_cast<unsigned>(keys_.size()); }
  std::vector<KeyVector<Key>>& keys() { return keys_; }
  std::vector<LaneVector<Key>>& values() { return values_; }
  const std::vector<KeyVector<Key>>& keys() const { return keys_; }
  const std::vector<LaneVector<Key>>& values() const { return values_; }

  friend bool operator==(const SetBlock&, const SetBlock&) = default;

 private:
  std::vector<KeyVector<Key>> keys_;
  std::vector<LaneVector<Key>> values_;
};

}  // namespace mslru
