// Helpers shared by the unit tests.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "mslru/multistep_set.hpp"

namespace mslru::testing {

// Letter notation used throughout: 'A'..'Z' are keys 1..26, '_' is an empty lane.
template <LaneWord Key>
constexpr Key letter(char c) {
  return c == '_' ? kEmptyKey<Key> : static_cast<Key>(c - 'A' + 1);
}

template <LaneWord Key>
constexpr Key value_for(Key k) {
  return k * 100 + 7;
}

template <LaneWord Key>
KeyVector<Key> lanes(std::string_view s) {
  KeyVector<Key> v = empty_key_vector<Key>();
  for (unsigned i = 0; i < s.size() && i < kLanes<Key>; ++i) v.lane[i] = letter<Key>(s[i]);
  return v;
}

template <LaneWord Key>
std::string render(const KeyVector<Key>& v) {
  std::string out;
  for (const Key k : v.lane) out += k == kEmptyKey<Key> ? '_' : static_cast<char>('A' + k - 1);
  return out;
}

/// "ABCD|EFGH" -> block whose values are value_for(key).
template <LaneWord Key>
SetBlock<Key> block(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const auto bar = spec.find('|', pos);
    parts.push_back(spec.substr(pos, bar == std::string_view::npos ? std::string_view::npos : bar - pos));
    if (bar == std::string_view::npos) break;
    pos = bar + 1;
  }
  SetBlock<Key> b(static_cast<unsigned>(parts.size()));
  for (unsigned i = 0; i < parts.size(); ++i) {
    b.keys()[i] = lanes<Key>(parts[i]);
    for (unsigned j = 0; j < kLanes<Key>; ++j) {
      const Key k = b.keys()[i].lane[j];
      b.values()[i].lane[j] = k == kEmptyKey<Key> ? 0 : value_for(k);
    }
  }
  return b;
}

template <LaneWord Key>
std::string render(const SetBlock<Key>& b) {
  std::string out;
  for (unsigned i = 0; i < b.vectors(); ++i) {
    if (i) out += '|';
    out += render(b.keys()[i]);
  }
  return out;
}

/// Valid keys per vector, lane order.
template <LaneWord Key>
std::vector<std::vector<Key>> contents(const SetBlock<Key>& b) {
  std::vector<std::vector<Key>> out(b.vectors());
  for (unsigned i = 0; i < b.vectors(); ++i) {
    for (const Key k : b.keys()[i].lane) {
      if (k != kEmptyKey<Key>) out[i].push_back(k);
    }
  }
  return out;
}

template <LaneWord Key>
std::vector<std::vector<Key>> value_contents(const SetBlock<Key>& b) {
  std::vector<std::vector<Key>> out(b.vectors());
  for (unsigned i = 0; i < b.vectors(); ++i) {
    for (unsigned j = 0; j < kLanes<Key>; ++j) {
      if (b.keys()[i].lane[j] != kEmptyKey<Key>) out[i].push_back(b.values()[i].lane[j]);
    }
  }
  return out;
}

/// Upper-tail p-value of Pearson's statistic for observed vs expected counts.
inline double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace mslru::testing
