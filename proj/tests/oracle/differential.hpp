// Random get/put/delete drivers that run a structure under test in lockstep
// with an oracle and report the first divergence.
#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "mslru/cache.hpp"
#include "mslru/multistep_set.hpp"
#include "oracle_lru.hpp"
#include "oracle_multistep.hpp"

namespace mslru::oracle {

struct DiffResult {
  bool ok = true;
  std::size_t ops = 0;
  std::string mismatch;
};

enum class OpKind { get, put, erase };

struct RandomOp {
  OpKind kind;
  std::uint64_t key;
  std::uint64_t value;
};

/// Gets dominate so items climb tiers; deletes are rare enough that sets fill.
class OpSource {
 public:
  OpSource(std::uint64_t seed, std::uint64_t key_space) : rng_(seed), key_space_(key_space) {}

  RandomOp next() {
    const auto r = rng_() % 100;
    const OpKind kind = r < 55 ? OpKind::get : r < 93 ? OpKind::put : OpKind::erase;
    return {kind, rng_() % key_space_ + 1, rng_() % 1'000'000};
  }

 private:
  std::mt19937_64 rng_;
  std::uint64_t key_space_;
};

inline std::string describe(std::size_t step, const RandomOp& op, const std::string& what) {
  std::ostringstream s;
  static const char* names[] = {"get", "put", "delete"};
  s << "step " << step << " " << names[static_cast<int>(op.kind)] << "(" << op.key << "): " << what;
  return s.str();
}

/// Single multi-step set vs the list-based multi-step simulator.
template <LaneWord Key>
DiffResult diff_set_vs_multistep_oracle(unsigned vectors, std::size_t ops, std::uint64_t seed) {
  constexpr unsigned P = kLanes<Key>;
  SetBlock<Key> block(vectors);
  auto set = block.multistep();
  OracleMultiStep<Key> oracle(vectors, P);
  OpSource source(seed, 3ull * vectors * P);
  DiffResult result;
  for (std::size_t step = 0; step < ops; ++step) {
    const RandomOp op = source.next();
    const Key k = static_cast<Key>(op.key);
    const Key v = static_cast<Key>(op.value);
    switch (op.kind) {
      case OpKind::get: {
        const auto got = set.get(k);
        const auto want = oracle.get(k);
        if (got.value != want.value || got.hit_vector != want.hit_vector) {
          return {false, step, describe(step, op, "lookup differs")};
        }
        break;
      }
      case OpKind::put: {
        std::optional<Key> evicted;
        bool inserted = false;
        if (!set.update(k, v)) {
          evicted = set.put(k, v);
          inserted = true;
        }
        const auto want = oracle.put(k, v);
        if (inserted != want.inserted || evicted != want.evicted) {
          return {false, step, describe(step, op, "insert/eviction differs")};
        }
        break;
      }
      case OpKind::erase:
        if (set.erase(k) != oracle.erase(k)) return {false, step, describe(step, op, "delete differs")};
        break;
    }
    if (step % 64 == 0 || step + 1 == ops) {
      for (unsigned i = 0; i < vectors; ++i) {
        std::vector<Key> keys, values;
        for (unsigned j = 0; j < P; ++j) {
          if (block.keys()[i].lane[j] == kEmptyKey<Key>) continue;
          keys.push_back(block.keys()[i].lane[j]);
          values.push_back(block.values()[i].lane[j]);
        }
        if (keys != oracle.keys()[i] || values != oracle.values()[i]) {
          return {false, step, describe(step, op, "contents of vector " + std::to_string(i + 1) + " differ")};
        }
      }
    }
  }
  result.ops = ops;
  return result;
}

/// Single-vector multi-step set vs a timestamp LRU of capacity P.
template <LaneWord Key>
DiffResult diff_single_vector_vs_lru(std::size_t ops, std::uint64_t seed) {
  constexpr unsigned P = kLanes<Key>;
  SetBlock<Key> block(1);
  auto set = block.multistep();
  OracleLru<Key> oracle(P);
  OpSource source(seed, 3ull * P);
  for (std::size_t step = 0; step < ops; ++step) {
    const RandomOp op = source.next();
    const Key k = static_cast<Key>(op.key);
    const Key v = static_cast<Key>(op.value);
    switch (op.kind) {
      case OpKind::get: {
        const auto got = set.get(k);
        if (got.value != oracle.get(k).value) return {false, step, describe(step, op, "hit/miss differs")};
        break;
      }
      case OpKind::put: {
        std::optional<Key> evicted;
        bool inserted = false;
        if (!set.update(k, v)) {
          evicted = set.put(k, v);
          inserted = true;
        }
        const auto want = oracle.put(k, v);
        if (inserted != want.inserted || evicted != want.evicted) {
          return {false, step, describe(step, op, "eviction differs")};
        }
        break;
      }
      case OpKind::erase:
        if (set.erase(k) != oracle.erase(k)) return {false, step, describe(step, op, "delete differs")};
        break;
    }
  }
  std::vector<Key> lanes;
  for (const Key k : block.keys()[0].lane) {
    if (k != kEmptyKey<Key>) lanes.push_back(k);
  }
  if (lanes != oracle.recency_order()) return {false, ops, "final contents differ"};
  for (const Key k : lanes) {
    const auto at = set.find(k);
    if (block.values()[0].lane[at->lane] != *oracle.value_of(k)) return {false, ops, "final values differ"};
  }
  return {true, ops, {}};
}

/// Two caches of different policy run the same random stream; every result
/// and the final per-set contents must agree.
template <LaneWord Key>
DiffResult diff_caches(SetAssociativeCache<Key>& a, SetAssociativeCache<Key>& b, std::size_t ops,
                       std::uint64_t seed, std::uint64_t key_space) {
  OpSource source(seed, key_space);
  for (std::size_t step = 0; step < ops; ++step) {
    const RandomOp op = source.next();
    const Key k = static_cast<Key>(op.key);
    const Key v = static_cast<Key>(op.value);
    switch (op.kind) {
      case OpKind::get: {
        const auto x = a.get(k), y = b.get(k);
        if (x.value != y.value || x.hit_vector != y.hit_vector) return {false, step, describe(step, op, "get differs")};
        break;
      }
      case OpKind::put: {
        const auto x = a.put(k, v), y = b.put(k, v);
        if (x.inserted != y.inserted || x.evicted != y.evicted) return {false, step, describe(step, op, "put differs")};
        break;
      }
      case OpKind::erase:
        if (a.erase(k) != b.erase(k)) return {false, step, describe(step, op, "delete differs")};
        break;
    }
  }
  for (std::size_t s = 0; s < a.num_sets(); ++s) {
    const auto x = a.multistep_view(s), y = b.multistep_view(s);
    if (x.key_vector(0) != y.key_vector(0) || x.value_vector(0) != y.value_vector(0)) {
      return {false, ops, "final contents of set " + std::to_string(s) + " differ"};
    }
  }
  return {true, ops, {}};
}

}  // namespace mslru::oracle
