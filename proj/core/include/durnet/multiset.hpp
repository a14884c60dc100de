#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "durnet/errors.hpp"
#include "durnet/symbol.hpp"

namespace durnet {

using Count = std::uint64_t;
using Stamp = std::uint64_t;

Count checked_add(Count a, Count b);
Count checked_mul(Count a, Count b);

// One durational token: a place together with its time-stamp.
struct Token {
  Place place;
  Stamp stamp = 0;

  friend bool operator==(const Token&, const Token&) = default;
  friend auto operator<=>(const Token& a, const Token& b) {
    if (auto c = a.place <=> b.place; c != 0) return c;
    return a.stamp <=> b.stamp;
  }
};

// Finite multiset stored as a sorted vector of (element, count) pairs.
// Zero counts are never stored. Values are immutable once built.
template <class Key>
class Multiset {
 public:
  using Entry = std::pair<Key, Count>;

  Multiset() = default;

  // Accepts unsorted entries with repetitions; merges and drops zero counts.
  explicit Multiset(std::vector<Entry> entries) : entries_(std::move(entries)) {
    normalize();
  }

  Multiset(std::initializer_list<Entry> entries)
      : Multiset(std::vector<Entry>(entries)) {}

  static Multiset singleton(const Key& key, Count n = 1) {
    return Multiset(std::vector<Entry>{{key, n}});
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t distinct() const noexcept { return entries_.size(); }

  Count total() const {
    Count n = 0;
    for (const auto& [k, c] : entries_) n = checked_add(n, c);
    return n;
  }

  Count count(const Key& key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const Entry& e, const Key& k) { return e.first < k; });
    return (it != entries_.end() && it->first == key) ? it->second : 0;
  }

  std::size_t hash() const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ entries_.size();
    for (const auto& [k, c] : entries_) {
      h = mix(h, key_hash(k));
      h = mix(h, static_cast<std::size_t>(c));
    }
    return h;
  }

  friend bool operator==(const Multiset&, const Multiset&) = default;
  friend bool operator<(const Multiset& a, const Multiset& b) {
    return a.entries_ < b.entries_;
  }

 private:
  static std::size_t mix(std::size_t h, std::size_t v) noexcept {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
  static std::size_t key_hash(const Key& k) noexcept {
    if constexpr (std::is_same_v<Key, Token>) {
      return mix(std::hash<Place>{}(k.place), std::hash<Stamp>{}(k.stamp));
    } else {
      return std::hash<Key>{}(k);
    }
  }

  void normalize() {
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (auto& e : entries_) {
      if (e.second == 0) continue;
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second = checked_add(merged.back().second, e.second);
      } else {
        merged.push_back(e);
      }
    }
    entries_ = std::move(merged);
  }

  std::vector<Entry> entries_;
};

using PlaceMultiset = Multiset<Place>;
using DurationalMarking = Multiset<Token>;

// Point-wise sum.
template <class Key>
Multiset<Key> add(const Multiset<Key>& a, const Multiset<Key>& b) {
  std::vector<typename Multiset<Key>::Entry> out;
  out.reserve(a.distinct() + b.distinct());
  auto i = a.entries().begin(), ie = a.entries().end();
  auto j = b.entries().begin(), je = b.entries().end();
  while (i != ie || j != je) {
    if (j == je || (i != ie && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == ie || j->first < i->first) {
      out.push_back(*j++);
    } else {
      out.emplace_back(i->first, checked_add(i->second, j->second));
      ++i;
      ++j;
    }
  }
  return Multiset<Key>(std::move(out));
}

// Point-wise a(e) <= b(e) for every e.
template <class Key>
bool leq(const Multiset<Key>& a, const Multiset<Key>& b) {
  auto j = b.entries().begin(), je = b.entries().end();
  for (const auto& [k, c] : a.entries()) {
    while (j != je && j->first < k) ++j;
    if (j == je || !(j->first == k) || j->second < c) return false;
  }
  return true;
}

// Point-wise difference; throws UnderflowError unless b <= a.
template <class Key>
Multiset<Key> subtract(const Multiset<Key>& a, const Multiset<Key>& b) {
  std::vector<typename Multiset<Key>::Entry> out;
  out.reserve(a.distinct());
  auto j = b.entries().begin(), je = b.entries().end();
  for (const auto& [k, c] : a.entries()) {
    if (j != je && j->first < k) throw UnderflowError("multiset difference underflow");
    if (j != je && j->first == k) {
      if (j->second > c) throw UnderflowError("multiset difference underflow");
      if (j->second < c) out.emplace_back(k, c - j->second);
      ++j;
    } else {
      out.emplace_back(k, c);
    }
  }
  if (j != je) throw UnderflowError("multiset difference underflow");
  return Multiset<Key>(std::move(out));
}

// Durational-marking utilities.

PlaceMultiset untime(const DurationalMarking& m);
std::set<Stamp> stamps(const DurationalMarking& m);
// Greatest stamp, or 0 for the empty marking.
Stamp max_stamp(const DurationalMarking& m);
// Smallest stamp, or 0 for the empty marking.
Stamp min_stamp(const DurationalMarking& m);
// Translates every stamp by delta. Throws DomainError if a stamp would become
// negative and OverflowError if it would leave the representable range.
DurationalMarking shift(const DurationalMarking& m, std::int64_t delta);
// Stamps every token of an ordinary multiset with t.
DurationalMarking stamp_all(const PlaceMultiset& m, Stamp t);

// Entries ordered by (place name, stamp); the order used for serialization.
std::vector<DurationalMarking::Entry> canonical_entries(const DurationalMarking& m);
std::vector<PlaceMultiset::Entry> canonical_entries(const PlaceMultiset& m);

}  // namespace durnet

template <class Key>
struct std::hash<durnet::Multiset<Key>> {
  std::size_t operator()(const durnet::Multiset<Key>& m) const noexcept { return m.hash(); }
};
