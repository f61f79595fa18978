// Width-P lane primitives over one 256-bit vector of keys or values.
//
// A vector holds P = 32 / sizeof(Word) lanes: four 64-bit words or eight
// 32-bit words. Lane 0 is the MRU position and lane P-1 the LRU position.
// Empty lanes hold the all-ones sentinel and are always contiguous at the
// LRU end of a key vector.
//
// Two implementations are provided. lane_ops::scalar is the portable
// reference; lane_ops::avx2 uses compare/movemask/permutevar8x32 and is
// compiled only when MSLRU_HAVE_AVX2 is defined. The unqualified
// lane_ops:: functions dispatch to the fastest available one.
#pragma once

#include <array>
#include <bit>
#include <cassert>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>

#if defined(MSLRU_HAVE_AVX2)
#include <immintrin.h>
#endif

namespace mslru {

template <class Word>
concept LaneWord = std::same_as<Word, std::uint64_t> || std::same_as<Word, std::uint32_t>;

inline constexpr std::size_t kVectorBytes = 32;

template <LaneWord Word>
inline constexpr unsigned kLanes = kVectorBytes / sizeof(Word);

template <LaneWord Word>
inline constexpr Word kEmptyKey = std::numeric_limits<Word>::max();

template <LaneWord Word>
struct alignas(kVectorBytes) LaneVector {
  std::array<Word, kLanes<Word>> lane{};

  friend bool operator==(const LaneVector&, const LaneVector&) = default;
};

template <LaneWord Key>
using KeyVector = LaneVector<Key>;

template <LaneWord Key>
constexpr KeyVector<Key> empty_key_vector() {
  KeyVector<Key> v;
  v.lane.fill(kEmptyKey<Key>);
  return v;
}

/// Row i moves lane i to lane 0 and shifts lanes 0..i-1 down by one;
/// lanes i+1..P-1 stay put. Row 0 is the identity. out[d] = in[row[d]].
template <unsigned P>
struct PermutationTable {
  std::array<std::array<std::uint8_t, P>, P> rows{};

  static constexpr PermutationTable promote() {
    PermutationTable t;
    for (unsigned i = 0; i < P; ++i) {
      t.rows[i][0] = static_cast<std::uint8_t>(i);
      for (unsigned d = 1; d <= i; ++d) t.rows[i][d] = static_cast<std::uint8_t>(d - 1);
      for (unsigned d = i + 1; d < P; ++d) t.rows[i][d] = static_cast<std::uint8_t>(d);
    }
    return t;
  }

  /// Row i removes lane i: lanes i+1..P-1 shift one toward MRU and the old
  /// lane i lands at P-1.
  static constexpr PermutationTable compact() {
    PermutationTable t;
    for (unsigned i = 0; i < P; ++i) {
      for (unsigned d = 0; d < i; ++d) t.rows[i][d] = static_cast<std::uint8_t>(d);
      for (unsigned d = i; d + 1 < P; ++d) t.rows[i][d] = static_cast<std::uint8_t>(d + 1);
      t.rows[i][P - 1] = static_cast<std::uint8_t>(i);
    }
    return t;
  }
};

template <unsigned P>
inline constexpr PermutationTable<P> kPromoteTable = PermutationTable<P>::promote();

template <unsigned P>
inline constexpr PermutationTable<P> kCompactTable = PermutationTable<P>::compact();

/// Expands a lane permutation into the 8 x 32-bit index pattern consumed by
/// vpermd. Each 64-bit lane l becomes the dword pair (2l, 2l+1).
template <unsigned P>
constexpr std::array<std::int32_t, 8> dword_pattern(const std::array<std::uint8_t, P>& row) {
  static_assert(P == 4 || P == 8);
  std::array<std::int32_t, 8> out{};
  constexpr unsigned kDwordsPerLane = 8 / P;
  for (unsigned d = 0; d < P; ++d) {
    for (unsigned k = 0; k < kDwordsPerLane; ++k) {
      out[d * kDwordsPerLane + k] = static_cast<std::int32_t>(row[d] * kDwordsPerLane + k);
    }
  }
  return out;
}

template <unsigned P>
struct alignas(kVectorBytes) DwordPatternTable {
  std::array<std::array<std::int32_t, 8>, P> rows{};

  static constexpr DwordPatternTable from(const PermutationTable<P>& t) {
    DwordPatternTable out;
    for (unsigned i = 0; i < P; ++i) out.rows[i] = dword_pattern<P>(t.rows[i]);
    return out;
  }
};

template <unsigned P>
inline constexpr DwordPatternTable<P> kPromotePatterns = DwordPatternTable<P>::from(kPromoteTable<P>);

template <unsigned P>
inline constexpr DwordPatternTable<P> kCompactPatterns = DwordPatternTable<P>::from(kCompactTable<P>);

namespace lane_ops {

namespace scalar {

template <LaneWord Key>
std::optional<unsigned> match_lane(const KeyVector<Key>& v, Key k) {
  assert(k != kEmptyKey<Key>);
  for (unsigned i = 0; i < kLanes<Key>; ++i) {
    if (v.lane[i] == k) return i;
  }
  return std::nullopt;
}

/// Number of leading valid lanes, i.e. the index of the first empty lane.
template <LaneWord Key>
unsigned count_valid(const KeyVector<Key>& v) {
  for (unsigned i = 0; i < kLanes<Key>; ++i) {
    if (v.lane[i] == kEmptyKey<Key>) return i;
  }
  return kLanes<Key>;
}

template <LaneWord Word>
LaneVector<Word> permute(const LaneVector<Word>& v, const std::array<std::uint8_t, kLanes<Word>>& row) {
  LaneVector<Word> out;
  for (unsigned d = 0; d < kLanes<Word>; ++d) out.lane[d] = v.lane[row[d]];
  return out;
}

template <LaneWord Word>
LaneVector<Word> promote(const LaneVector<Word>& v, unsigned i) {
  assert(i < kLanes<Word>);
  return permute(v, kPromoteTable<kLanes<Word>>.rows[i]);
}

/// Moves lane i to P-1 and shifts the lanes behind it one toward MRU. The
/// caller overwrites lane P-1.
template <LaneWord Word>
LaneVector<Word> compact(const LaneVector<Word>& v, unsigned i) {
  assert(i < kLanes<Word>);
  return permute(v, kCompactTable<kLanes<Word>>.rows[i]);
}

}  // namespace scalar

#if defined(MSLRU_HAVE_AVX2)
namespace avx2 {

template <LaneWord Word>
inline __m256i load(const LaneVector<Word>& v) {
  return _mm256_load_si256(reinterpret_cast<const __m256i*>(v.lane.data()));
}

template <LaneWord Word>
inline LaneVector<Word> store(__m256i r) {
  LaneVector<Word> out;
  _mm256_store_si256(reinterpret_cast<__m256i*>(out.lane.data()), r);
  return out;
}

template <LaneWord Key>
inline unsigned equal_mask(const KeyVector<Key>& v, Key k) {
  const __m256i keys = load(v);
  if constexpr (sizeof(Key) == 8) {
    const __m256i eq = _mm256_cmpeq_epi64(_mm256_set1_epi64x(static_cast<long long>(k)), keys);
    return static_cast<unsigned>(_mm256_movemask_pd(_mm256_castsi256_pd(eq)));
  } else {
    const __m256i eq = _mm256_cmpeq_epi32(_mm256_set1_epi32(static_cast<int>(k)), keys);
    return static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(eq)));
  }
}

template <LaneWord Key>
std::optional<unsigned> match_lane(const KeyVector<Key>& v, Key k) {
  assert(k != kEmptyKey<Key>);
  const unsigned mask = equal_mask(v, k);
  if (mask == 0) return std::nullopt;
  return static_cast<unsigned>(std::countr_zero(mask));
}

template <LaneWord Key>
unsigned count_valid(const KeyVector<Key>& v) {
  const unsigned mask = equal_mask(v, kEmptyKey<Key>);
  if (mask == 0) return kLanes<Key>;
  return static_cast<unsigned>(std::countr_zero(mask));
}

template <LaneWord Word>
inline LaneVector<Word> permute(const LaneVector<Word>& v, const std::array<std::int32_t, 8>& pattern) {
  const __m256i p = _mm256_load_si256(reinterpret_cast<const __m256i*>(pattern.data()));
  return store<Word>(_mm256_permutevar8x32_epi32(load(v), p));
}

template <LaneWord Word>
LaneVector<Word> promote(const LaneVector<Word>& v, unsigned i) {
  assert(i < kLanes<Word>);
  return permute(v, kPromotePatterns<kLanes<Word>>.rows[i]);
}

template <LaneWord Word>
LaneVector<Word> compact(const LaneVector<Word>& v, unsigned i) {
  assert(i < kLanes<Word>);
  return permute(v, kCompactPatterns<kLanes<Word>>.rows[i]);
}

}  // namespace avx2
namespace impl = avx2;
#else
namespace impl = scalar;
#endif

#if defined(MSLRU_HAVE_AVX2)
inline constexpr bool kAccelerated = true;
#else
inline constexpr bool kAccelerated = false;
#endif

template <LaneWord Key>
std::optional<unsigned> match_lane(const KeyVector<Key>& v, Key k) {
  return impl::match_lane(v, k);
}

template <LaneWord Key>
unsigned count_valid(const KeyVector<Key>& v) {
  return impl::count_valid(v);
}

/// Applies promote-table row i. Used for both key and value vectors so that
/// values follow their keys.
template <LaneWord Word>
LaneVector<Word> promote(const LaneVector<Word>& v, unsigned i) {
  return impl::promote(v, i);
}

template <LaneWord Word>
LaneVector<Word> rotate_lru_to_front(const LaneVector<Word>& v) {
  return impl::promote(v, kLanes<Word> - 1);
}

template <LaneWord Key>
KeyVector<Key> replace_lane0(KeyVector<Key> v, Key k) {
  assert(k != kEmptyKey<Key>);
  assert(!scalar::match_lane(v, k).has_value());
  v.lane[0] = k;
  return v;
}

template <LaneWord Word>
LaneVector<Word> set_lane0(LaneVector<Word> v, Word w) {
  v.lane[0] = w;
  return v;
}

/// Removes lane i and refills lane P-1 with `fill`.
template <LaneWord Word>
LaneVector<Word> remove_lane(const LaneVector<Word>& v, unsigned i, Word fill) {
  LaneVector<Word> out = impl::compact(v, i);
  out.lane[kLanes<Word> - 1] = fill;
  return out;
}

}  // namespace lane_ops
}  // namespace mslru
