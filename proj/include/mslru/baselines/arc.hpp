// Adaptive Replacement Cache after Megiddo and Modha (FAST '03).
//
// T1/T2 hold resident items seen once/at least twice; B1/B2 are ghost lists
// of keys recently evicted from T1/T2. p is the adaptive target size of T1.
// The state machine follows the published ARC(c) pseudocode, cases I-IV with
// the REPLACE subroutine. A request is split over the cache API: get() runs
// case I for resident keys and is a side-effect-free miss otherwise; put()
// of a non-resident key runs case II, III or IV.
//
// erase() can leave the cache below capacity while ghosts exist, a state
// the original algorithm never reaches. REPLACE is therefore skipped whenever
// |T1| + |T2| < c, which is a no-op change for erase-free request streams.
#pragma once

#include <algorithm>
#include <cstddef>
#include <list>
#include <unordered_map>

#include "mslru/policy.hpp"

namespace mslru {

template <LaneWord Key>
class ArcCache final : public KeyValueCache<Key> {
 public:
  enum class ListId : unsigned char { t1, t2, b1, b2 };

  struct Breakdown {
    std::size_t t1_hits = 0;
    std::size_t t2_hits = 0;
  };

  explicit ArcCache(const CacheConfig& config) : config_(config), c_(config.capacity) {
    config_.validate();
    index_.reserve(2 * c_);
  }

  Lookup<Key> get(Key k) override {
    require_valid_key(k);
    const auto it = index_.find(k);
    if (it == index_.end() || !resident(it->second.list)) return {};
    const Key value = hit(it->second);
    return {value, hit_location()};
  }

  PutResult<Key> put(Key k, Key value) override {
    require_valid_key(k);
    const auto it = index_.find(k);
    if (it != index_.end() && resident(it->second.list)) {
      hit(it->second);
      it->second.node->value = value;
      return {};
    }
    PutResult<Key> result{true, std::nullopt};
    if (it != index_.end()) {
      Entry& e = it->second;
      if (e.list == ListId::b1) {
        const double delta = b1_.size() >= b2_.size() ? 1.0 : static_cast<double>(b2_.size()) / b1_.size();
        p_ = std::min(p_ + delta, static_cast<double>(c_));
        result.evicted = replace(false);
      } else {
        const double delta = b2_.size() >= b1_.size() ? 1.0 : static_cast<double>(b1_.size()) / b2_.size();
        p_ = std::max(p_ - delta, 0.0);
        result.evicted = replace(true);
      }
      e.node->value = value;
      move_to(e, ListId::t2);
    } else {
      const std::size_t l1 = t1_.size() + b1_.size();
      if (l1 == c_) {
        if (t1_.size() < c_) {
          drop_lru(ListId::b1);
          result.evicted = replace(false);
        } else {
          result.evicted = t1_.back().key;
          drop_lru(ListId::t1);
        }
      } else {
        const std::size_t total = l1 + t2_.size() + b2_.size();
        if (total >= c_) {
          if (total == 2 * c_) drop_lru(ListId::b2);
          result.evicted = replace(false);
        }
      }
      t1_.push_front({k, value});
      index_.emplace(k, Entry{ListId::t1, t1_.begin()});
    }
    return result;
  }

  bool erase(Key k) override {
    require_valid_key(k);
    const auto it = index_.find(k);
    if (it == index_.end() || !resident(it->second.list)) return false;
    list(it->second.list).erase(it->second.node);
    index_.erase(it);
    return true;
  }

  CacheStats stats() const override { return {t1_.size() + t2_.size(), c_, 2}; }

  AuditReport audit() const override {
    AuditReport report;
    report.occupancy = t1_.size() + t2_.size();
    if (t1_.size() + t2_.size() > c_) report.fail("|T1|+|T2| > c");
    if (t1_.size() + b1_.size() > c_) report.fail("|T1|+|B1| > c");
    if (t1_.size() + t2_.size() + b1_.size() + b2_.size() > 2 * c_) report.fail("directory larger than 2c");
    if (p_ < 0.0 || p_ > static_cast<double>(c_)) report.fail("p outside [0, c]");
    const std::size_t listed = t1_.size() + t2_.size() + b1_.size() + b2_.size();
    if (listed != index_.size()) report.fail("index and lists disagree in size");
    return report;
  }

  const CacheConfig& config() const override { return config_; }

  Breakdown breakdown() const { return breakdown_; }
  double target() const { return p_; }
  std::size_t t1_size() const { return t1_.size(); }
  std::size_t t2_size() const { return t2_.size(); }
  std::size_t b1_size() const { return b1_.size(); }
  std::size_t b2_size() const { return b2_.size(); }

  std::optional<ListId> where(Key k) const {
    const auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second.list;
  }

 private:
  struct Node {
    Key key;
    Key value;
  };
  using NodeList = std::list<Node>;
  struct Entry {
    ListId list;
    typename NodeList::iterator node;
  };

  static bool resident(ListId id) { return id == ListId::t1 || id == ListId::t2; }

  NodeList& list(ListId id) {
    switch (id) {
      case ListId::t1: return t1_;
      case ListId::t2: return t2_;
      case ListId::b1: return b1_;
      case ListId::b2: return b2_;
    }
    return t1_;
  }

  unsigned hit_location() const { return last_hit_in_t1_ ? 1u : 2u; }

  // Case I.
  Key hit(Entry& e) {
    last_hit_in_t1_ = e.list == ListId::t1;
    if (last_hit_in_t1_) {
      ++breakdown_.t1_hits;
    } else {
      ++breakdown_.t2_hits;
    }
    move_to(e, ListId::t2);
    return e.node->value;
  }

  void move_to(Entry& e, ListId to) {
    NodeList& dst = list(to);
    dst.splice(dst.begin(), list(e.list), e.node);
    e.list = to;
  }

  void drop_lru(ListId id) {
    NodeList& l = list(id);
    index_.erase(l.back().key);
    l.pop_back();
  }

  // REPLACE(x, p). Returns the key leaving the resident set.
  std::optional<Key> replace(bool request_in_b2) {
    if (t1_.size() + t2_.size() < c_) return std::nullopt;
    const double t1 = static_cast<double>(t1_.size());
    const bool from_t1 = !t1_.empty() && (t1 > p_ || (request_in_b2 && t1 == p_));
    ListId src = from_t1 || t2_.empty() ? ListId::t1 : ListId::t2;
    NodeList& l = list(src);
    auto victim = std::prev(l.end());
    const Key key = victim->key;
    Entry& e = index_.find(key)->second;
    move_to(e, src == ListId::t1 ? ListId::b1 : ListId::b2);
    return key;
  }

  CacheConfig config_;
  std::size_t c_;
  double p_ = 0.0;
  NodeList t1_, t2_, b1_, b2_;
  std::unordered_map<Key, Entry> index_;
  Breakdown breakdown_;
  bool last_hit_in_t1_ = false;
};

}  // namespace mslru
