#pragma once

#include <cstddef>
#include <list>
#include <unordered_map>

#include "mslru/policy.hpp"

namespace mslru {

/// Exact LRU: a doubly linked recency list (head = MRU) plus a hash index.
template <LaneWord Key>
class ExactLruCache final : public KeyValueCache<Key> {
 public:
  explicit ExactLruCache(const CacheConfig& config) : config_(config) {
    config_.validate();
    index_.reserve(config_.capacity);
  }

  Lookup<Key> get(Key k) override {
    require_valid_key(k);
    const auto it = index_.find(k);
    if (it == index_.end()) return {};
    list_.splice(list_.begin(), list_, it->second);
    return {it->second->value, 1};
  }

  PutResult<Key> put(Key k, Key value) override {
    require_valid_key(k);
    if (const auto it = index_.find(k); it != index_.end()) {
      it->second->value = value;
      list_.splice(list_.begin(), list_, it->second);
      return {};
    }
    PutResult<Key> result{true, std::nullopt};
    if (list_.size() == config_.capacity) {
      // Reuse the tail node for the incoming item.
      auto tail = std::prev(list_.end());
      result.evicted = tail->key;
      index_.erase(tail->key);
      tail->key = k;
      tail->value = value;
      list_.splice(list_.begin(), list_, tail);
    } else {
      list_.push_front({k, value});
    }
    index_.emplace(k, list_.begin());
    return result;
  }

  bool erase(Key k) override {
    require_valid_key(k);
    const auto it = index_.find(k);
    if (it == index_.end()) return false;
    list_.erase(it->second);
    index_.erase(it);
    return true;
  }

  CacheStats stats() const override { return {list_.size(), config_.capacity, 1}; }

  AuditReport audit() const override {
    AuditReport report;
    report.occupancy = list_.size();
    if (list_.size() > config_.capacity) report.fail("list longer than capacity");
    if (list_.size() != index_.size()) report.fail("index and list disagree in size");
    for (auto it = list_.begin(); it != list_.end(); ++it) {
      const auto found = index_.find(it->key);
      if (found == index_.end() || found->second != it) report.fail("index entry does not point at its node");
    }
    return report;
  }

  const CacheConfig& config() const override { return config_; }

  /// Keys from MRU to LRU.
  std::vector<Key> recency_order() const {
    std::vector<Key> out;
    out.reserve(list_.size());
    for (const auto& n : list_) out.push_back(n.key);
    return out;
  }

 private:
  struct Node {
    Key key;
    Key value;
  };

  CacheConfig config_;
  std::list<Node> list_;
  std::unordered_map<Key, typename std::list<Node>::iterator> index_;
};

}  // namespace mslru
