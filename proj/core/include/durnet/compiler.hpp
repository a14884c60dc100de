#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "durnet/minsky.hpp"
#include "durnet/net.hpp"

namespace durnet {

enum class RuleKind { kI, kD, kZ, kZI, kZII, kZIII, kO, kTI, kTII, kTIII };

const char* rule_kind_name(RuleKind k);

// Where a compiled rule comes from. Global (T) rules have instruction 0 and
// no side; (O) has no counter.
struct RuleInfo {
  RuleKind kind = RuleKind::kO;
  std::size_t instruction = 0;
  char side = 0;  // 'p', 'q' or 0
  int counter = -1;

  std::string name() const;  // e.g. "Z_III@3q", "T_I@0", "O@5"
};

inline constexpr RuleIndex kNoMirror = std::numeric_limits<RuleIndex>::max();

struct CompiledNet {
  MinskyMachine machine;
  Net net;
  DurationalMarking left_init;   // 0@p1
  DurationalMarking right_init;  // 0@q1
  std::vector<RuleInfo> rule_info;
  // Counterpart on the other side (p <-> q) of every rule; global rules map to
  // themselves and (O) to kNoMirror.
  std::vector<RuleIndex> mirror;

  // Index of the rule of the given kind; side is ignored for global rules.
  std::optional<RuleIndex> find_rule(RuleKind kind, std::size_t instruction, char side,
                                     int counter = -1) const;
};

CompiledNet compile(const MinskyMachine& m);

// JSON mapping from construction names (p_i, 0', Z''_1, ...) to emitted place
// ids, the label table, per-rule provenance and the machine source.
std::string sidecar_json(const CompiledNet& c);

// Rebuilds a compiled net from its sidecar and checks it against `net`.
// Throws ValidationError on mismatch and ParseError on malformed input.
CompiledNet load_compiled(const Net& net, std::string_view sidecar);

// Control places are p<i>, q<i>, pp<i> (primed p), qq<i> (primed q).
struct ControlPlace {
  char side = 'p';
  bool primed = false;
  std::size_t instruction = 0;
};

std::optional<ControlPlace> parse_control(Place p);
Place control_place(const ControlPlace& c);
Place counter_place(int counter, bool second);  // c<b>a / c<b>b
Place zero_place(int counter, bool second);     // z<b>a / z<b>b

// Swaps p-side and q-side control places, leaving every other token alone.
DurationalMarking swap_sides(const DurationalMarking& m);

struct MachineView {
  std::size_t pc = 0;
  bool primed = false;
  char side = 'p';
  Stamp stamp = 0;  // stamp of the control token
  std::uint64_t c0 = 0;
  std::uint64_t c1 = 0;
  DurationalMarking residue;  // everything outside control + counter pairs

  std::uint64_t counter(int b) const { return b == 0 ? c0 : c1; }
};

// Counter b is min(#b', #b'') over all stamps; the pairs taken into the view
// are those with the highest stamps. Throws ShapeError unless exactly one
// control token is present.
MachineView extract_state(const DurationalMarking& m);

enum class Conformance { kEqual, kConforming, kNone };

// kConforming iff the markings differ exactly by the p/q swap of their single
// control token.
Conformance is_conforming(const DurationalMarking& left, const DurationalMarking& right);

}  // namespace durnet
