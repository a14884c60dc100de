#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <unordered_map>
#include <variant>
#include <vector>

#include "durnet/game.hpp"

namespace durnet {

struct SpoilerWins {
  unsigned rounds = 0;
  friend bool operator==(const SpoilerWins&, const SpoilerWins&) = default;
};

// Certified: `relation` together with the identity relation is a
// bisimulation containing the queried pair. Pairs are stored in the solver's
// canonical form (see SolverOptions).
struct Bisimilar {
  std::vector<GamePosition> relation;
  friend bool operator==(const Bisimilar&, const Bisimilar&) = default;
};

struct Unknown {
  unsigned depth = 0;
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

using Verdict = std::variant<SpoilerWins, Bisimilar, Unknown>;

struct SolverOptions {
  // Distinct canonical positions the bounded search may memoize.
  std::size_t max_positions = 1'000'000;
  // Positions the certificate closure may visit before giving up with Unknown.
  std::size_t certificate_budget = 100'000;
  bool certify = true;
  // Memo positions (l, r) and (r, l) under one key.
  bool symmetric_memo = false;
  // Global-time impatient only: strip dead tokens before memoizing.
  bool prune_dead_tokens = false;
};

struct SolverStats {
  std::size_t memo_entries = 0;
  std::size_t nodes = 0;
  std::size_t certificate_positions = 0;
};

// Bounded AND-OR search for Spoiler wins. The memo survives across calls, so a
// single Solver can answer many queries over the same game cheaply.
class Solver {
 public:
  explicit Solver(Game game, SolverOptions options = {});

  const Game& game() const noexcept { return game_; }
  const SolverOptions& options() const noexcept { return options_; }
  const SolverStats& stats() const noexcept { return stats_; }

  Verdict solve(const GamePosition& pos, unsigned depth);

  // Least n <= depth such that Spoiler forces a win in n rounds.
  std::optional<unsigned> rounds_to_win(const GamePosition& pos, unsigned depth);

  // Form used as memo key: shifted to stamp 0, optionally without dead tokens
  // and with the pair ordered.
  GamePosition canonical(const GamePosition& pos) const;

 private:
  struct Entry {
    // Exact least number of rounds, when known.
    std::optional<unsigned> rounds;
    // Spoiler cannot win within this many rounds.
    unsigned no_win_within = 0;
  };

  unsigned search(const GamePosition& key, unsigned budget);
  Entry& entry(const GamePosition& key);
  std::optional<std::vector<GamePosition>> certify(const GamePosition& root);

  Game game_;
  SolverOptions options_;
  SolverStats stats_;
  std::unordered_map<GamePosition, Entry, GamePositionHash> memo_;
};

Verdict solve_bounded(const Net& net, Semantics sem, const GamePosition& pos, unsigned depth,
                      const SolverOptions& options = {});

// Re-checks both transfer clauses for every pair of `relation` (plus the
// identity) using `canonical` to compare successor pairs with members.
bool is_bisimulation(const Game& game, const std::vector<GamePosition>& relation,
                     const std::function<GamePosition(const GamePosition&)>& canonical);

class StuckError : public Error {
 public:
  using Error::Error;
};

// Engine opponent driven by the bounded solver.
class SearchStrategy {
 public:
  SearchStrategy(Game game, unsigned depth, std::uint64_t seed = 0, SolverOptions options = {});

  // Move minimizing proven rounds-to-win; otherwise the move leaving Duplicator
  // the fewest answers. Throws StuckError if Spoiler has no move.
  GameMove choose_move(const GamePosition& pos);

  // Response avoiding positions with a proven Spoiler win, preferring equal
  // markings; otherwise the response delaying the loss longest. Throws
  // StuckError if there is no response.
  Response choose_response(const GamePosition& pos, const GameMove& move);

  Solver& solver() noexcept { return solver_; }

 private:
  Solver solver_;
  unsigned depth_;
  std::mt19937_64 rng_;
};

}  // namespace durnet
