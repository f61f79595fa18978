// Fully associative LRU by exhaustive timestamp scan. Test-only.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace mslru::oracle {

template <class Key>
struct OracleGet {
  std::optional<Key> value;
};

template <class Key>
struct OraclePut {
  bool inserted = false;
  std::optional<Key> evicted;
};

template <class Key>
class OracleLru {
 public:
  explicit OracleLru(std::size_t capacity) : capacity_(capacity) {}

  OracleGet<Key> get(Key k) {
    auto it = items_.find(k);
    if (it == items_.end()) return {};
    it->second.last = ++clock_;
    return {it->second.value};
  }

  OraclePut<Key> put(Key k, Key value) {
    if (auto it = items_.find(k); it != items_.end()) {
      it->second.value = value;
      it->second.last = ++clock_;
      return {};
    }
    OraclePut<Key> r{true, std::nullopt};
    if (items_.size() == capacity_) {
      auto victim = items_.begin();
      for (auto it = items_.begin(); it != items_.end(); ++it) {
        if (it->second.last < victim->second.last) victim = it;
      }
      r.evicted = victim->first;
      items_.erase(victim);
    }
    items_.emplace(k, Item{value, ++clock_});
    return r;
  }

  bool erase(Key k) { return items_.erase(k) > 0; }

  std::size_t size() const { return items_.size(); }

  /// Keys from most to least recently used.
  std::vector<Key> recency_order() const {
    std::vector<std::pair<std::uint64_t, Key>> v;
    for (const auto& [k, item] : items_) v.emplace_back(item.last, k);
    std::sort(v.rbegin(), v.rend());
    std::vector<Key> out;
    for (const auto& e : v) out.push_back(e.second);
    return out;
  }

  std::optional<Key> value_of(Key k) const {
    auto it = items_.find(k);
    if (it == items_.end()) return std::nullopt;
    return it->second.value;
  }

 private:
  struct Item {
    Key value;
    std::uint64_t last;
  };

  std::size_t capacity_;
  std::uint64_t clock_ = 0;
  std::map<Key, Item> items_;
};

}  // namespace mslru::oracle
