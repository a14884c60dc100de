#pragma once

#include <memory>
#include <optional>

#include "durnet/compiler.hpp"
#include "durnet/game.hpp"
#include "durnet/solver.hpp"

// Executable Spoiler and Duplicator strategies for the bisimulation game on a
// compiled counter machine, under global-time impatient semantics.
namespace durnet {

// Spoiler simulates the machine honestly on the left-hand side: one control
// rule per large step, then (T_I) completions for counter 0 before counter 1.
class SpoilerStrategy {
 public:
  explicit SpoilerStrategy(std::shared_ptr<const CompiledNet> compiled);

  // Throws OffScriptError unless pos is conforming and the next honest move
  // is enabled.
  GameMove next_move(const GamePosition& pos) const;

 private:
  std::shared_ptr<const CompiledNet> compiled_;
  Game game_;
};

enum class DuplicatorMode {
  kCopy,      // equal modulo dead tokens: replay the identical rule
  kMirror,    // conforming: fire the p/q counterpart
  kCheat,     // answering a significant cheat
  kFallback,  // off the strategy's domain, answered by search
};

const char* mode_name(DuplicatorMode m);

struct DuplicatorChoice {
  Response response;
  DuplicatorMode mode = DuplicatorMode::kMirror;
};

// Duplicator's survival strategy. The mode is recovered from the position each
// time, so the strategy can be queried at any point of a play.
class DuplicatorStrategy {
 public:
  // Without a fallback, off-domain positions raise OffScriptError.
  explicit DuplicatorStrategy(std::shared_ptr<const CompiledNet> compiled,
                              std::optional<unsigned> fallback_depth = std::nullopt);

  // Throws StuckError when the move has no legal answer at all and
  // ImpossibleResponseError when legal answers exist but none is the one the
  // case analysis prescribes.
  DuplicatorChoice respond(const GamePosition& pos, const GameMove& move);

  std::optional<DuplicatorMode> last_mode() const noexcept { return last_mode_; }

 private:
  std::shared_ptr<const CompiledNet> compiled_;
  Game game_;
  std::optional<SearchStrategy> fallback_;
  std::optional<DuplicatorMode> last_mode_;
};

}  // namespace durnet
