#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace durnet {

namespace detail {
enum class SymbolTable : int { kPlaces = 0, kLabels = 1 };

std::uint32_t intern(SymbolTable table, std::string_view name);
const std::string& symbol_name(SymbolTable table, std::uint32_t id);
}  // namespace detail

// Interned identifier. Equality and ordering compare the interning id, so two
// symbols with the same text are always identical. Names only matter at the
// I/O boundary; canonical (textual) order is obtained through name_less().
template <detail::SymbolTable Table>
class Symbol {
 public:
  Symbol() = default;

  static Symbol intern(std::string_view name) {
    return Symbol(detail::intern(Table, name));
  }

  const std::string& name() const { return detail::symbol_name(Table, id_); }
  std::uint32_t id() const noexcept { return id_; }

  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol, Symbol) = default;

 private:
  explicit Symbol(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

using Place = Symbol<detail::SymbolTable::kPlaces>;
using Label = Symbol<detail::SymbolTable::kLabels>;

template <detail::SymbolTable Table>
bool name_less(Symbol<Table> a, Symbol<Table> b) {
  return a != b && a.name() < b.name();
}

}  // namespace durnet

template <durnet::detail::SymbolTable Table>
struct std::hash<durnet::Symbol<Table>> {
  std::size_t operator()(durnet::Symbol<Table> s) const noexcept {
    return std::hash<std::uint32_t>{}(s.id());
  }
};
