#include "durnet/multiset.hpp"

#include <deque>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace durnet {

namespace detail {
namespace {

struct Table {
  std::shared_mutex mutex;
  std::deque<std::string> names;  // deque keeps references stable
  std::unordered_map<std::string_view, std::uint32_t> ids;

  Table() {
    names.emplace_back();
    ids.emplace(names.back(), 0);
  }
};

Table& table_for(SymbolTable t) {
  static Table tables[2];
  return tables[static_cast<int>(t)];
}

}  // namespace

std::uint32_t intern(SymbolTable which, std::string_view name) {
  Table& t = table_for(which);
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(name); it != t.ids.end()) return it->second;
  }
  std::unique_lock lock(t.mutex);
  if (auto it = t.ids.find(name); it != t.ids.end()) return it->second;
  auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(t.names.back(), id);
  return id;
}

const std::string& symbol_name(SymbolTable which, std::uint32_t id) {
  Table& t = table_for(which);
  std::shared_lock lock(t.mutex);
  return t.names.at(id);
}

}  // namespace detail

Count checked_add(Count a, Count b) {
  Count r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("count overflow");
  return r;
}

Count checked_mul(Count a, Count b) {
  Count r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("count overflow");
  return r;
}

PlaceMultiset untime(const DurationalMarking& m) {
  std::vector<PlaceMultiset::Entry> out;
  out.reserve(m.distinct());
  for (const auto& [tok, c] : m.entries()) {
    // Entries are sorted by place first, so equal places are adjacent.
    if (!out.empty() && out.back().first == tok.place) {
      out.back().second = checked_add(out.back().second, c);
    } else {
      out.emplace_back(tok.place, c);
    }
  }
  return PlaceMultiset(std::move(out));
}

std::set<Stamp> stamps(const DurationalMarking& m) {
  std::set<Stamp> out;
  for (const auto& [tok, c] : m.entries()) out.insert(tok.stamp);
  return out;
}

Stamp max_stamp(const DurationalMarking& m) {
  Stamp best = 0;
  for (const auto& [tok, c] : m.entries()) best = std::max(best, tok.stamp);
  return best;
}

Stamp min_stamp(const DurationalMarking& m) {
  if (m.empty()) return 0;
  Stamp best = std::numeric_limits<Stamp>::max();
  for (const auto& [tok, c] : m.entries()) best = std::min(best, tok.stamp);
  return best;
}

DurationalMarking shift(const DurationalMarking& m, std::int64_t delta) {
  std::vector<DurationalMarking::Entry> out;
  out.reserve(m.distinct());
  for (const auto& [tok, c] : m.entries()) {
    Stamp s = tok.stamp;
    if (delta < 0) {
      auto down = static_cast<Stamp>(-(delta + 1)) + 1;
      if (s < down) throw DomainError("shift would produce a negative time-stamp");
      s -= down;
    } else if (__builtin_add_overflow(s, static_cast<Stamp>(delta), &s)) {
      throw OverflowError("time-stamp overflow");
    }
    out.emplace_back(Token{tok.place, s}, c);
  }
  return DurationalMarking(std::move(out));
}

DurationalMarking stamp_all(const PlaceMultiset& m, Stamp t) {
  std::vector<DurationalMarking::Entry> out;
  out.reserve(m.distinct());
  for (const auto& [p, c] : m.entries()) out.emplace_back(Token{p, t}, c);
  return DurationalMarking(std::move(out));
}

std::vector<DurationalMarking::Entry> canonical_entries(const DurationalMarking& m) {
  auto out = m.entries();
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.place != b.first.place) return a.first.place.name() < b.first.place.name();
    return a.first.stamp < b.first.stamp;
  });
  return out;
}

std::vector<PlaceMultiset::Entry> canonical_entries(const PlaceMultiset& m) {
  auto out = m.entries();
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.first.name() < b.first.name();
  });
  return out;
}

std::string SourceSpan::to_string() const {
  std::string out = file.empty() ? std::string("<input>") : file;
  out += ":" + std::to_string(line) + ":" + std::to_string(column_begin);
  if (column_end > column_begin + 1) out += "-" + std::to_string(column_end - 1);
  return out;
}

ParseError::ParseError(SourceSpan span, const std::string& message)
    : Error(span.to_string() + ": " + message), span_(std::move(span)), detail_(message) {}

}  // namespace durnet
