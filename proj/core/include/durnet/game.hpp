#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "durnet/net.hpp"

namespace durnet {

enum class Side { kLeft, kRight };

inline Side opposite(Side s) { return s == Side::kLeft ? Side::kRight : Side::kLeft; }
const char* side_name(Side s);

struct GamePosition {
  DurationalMarking left;
  DurationalMarking right;

  const DurationalMarking& at(Side s) const { return s == Side::kLeft ? left : right; }
  DurationalMarking& at(Side s) { return s == Side::kLeft ? left : right; }

  friend bool operator==(const GamePosition&, const GamePosition&) = default;
  friend bool operator<(const GamePosition& a, const GamePosition& b) {
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  }
};

struct GamePositionHash {
  std::size_t operator()(const GamePosition& p) const noexcept {
    return p.left.hash() * 0x100000001b3ULL ^ p.right.hash();
  }
};

// A Spoiler move: a transition (action, time) taken on one side.
struct GameMove {
  Side side = Side::kLeft;
  Label action;
  Stamp time_label = 0;
  FireableInstance instance;

  friend bool operator==(const GameMove&, const GameMove&) = default;
};

// A Duplicator answer to a move together with the position it produces.
struct Response {
  FireableInstance instance;
  GamePosition position;

  friend bool operator==(const Response&, const Response&) = default;
};

// A Spoiler move together with all of Duplicator's answers to it.
struct MoveOptions {
  GameMove move;
  std::vector<Response> responses;
};

// The bisimulation game over the durational transition system of one net.
class Game {
 public:
  Game(Net net, Semantics sem);
  Game(std::shared_ptr<const Net> net, Semantics sem);

  const Net& net() const noexcept { return *net_; }
  std::shared_ptr<const Net> shared_net() const noexcept { return net_; }
  Semantics semantics() const noexcept { return sem_; }

  // Every enabled instance on the left, then every one on the right.
  std::vector<GameMove> spoiler_moves(const GamePosition& pos) const;

  // Instances on the opposite side with the same action and the same time
  // label. Responses leading to identical positions are reported once. Throws
  // IllegalMoveError if the move is not enabled at pos.
  std::vector<Response> duplicator_responses(const GamePosition& pos, const GameMove& move) const;

  // spoiler_moves paired with duplicator_responses, computing each side's
  // enabled instances once.
  std::vector<MoveOptions> expand(const GamePosition& pos) const;

  // Position after the move only (before Duplicator answers).
  GamePosition after_move(const GamePosition& pos, const GameMove& move) const;

  GameMove make_move(Side side, const FireableInstance& inst) const;

 private:
  std::shared_ptr<const Net> net_;
  Semantics sem_;
};

// One half of a round, as recorded in sessions and transcripts.
struct HalfMove {
  Side side = Side::kLeft;
  Label action;
  Stamp time_label = 0;
  RuleIndex rule = 0;
  GamePosition after;
};

// A play in progress. History is a stack so moves can be undone.
class GameSession {
 public:
  GameSession(Game game, GamePosition start);

  const Game& game() const noexcept { return game_; }
  const GamePosition& current() const noexcept { return positions_.back(); }
  const GamePosition& start() const noexcept { return positions_.front(); }
  std::size_t rounds() const noexcept { return positions_.size() - 1; }
  const std::vector<GamePosition>& history() const noexcept { return positions_; }
  // Two half-moves per round.
  const std::vector<HalfMove>& log() const noexcept { return log_; }

  // Validates the move and the response against the current position.
  const GamePosition& apply_move(const GameMove& move, const Response& response);
  // Throws Error when there is nothing to undo.
  const GamePosition& undo();

 private:
  Game game_;
  std::vector<GamePosition> positions_;
  std::vector<HalfMove> log_;
};

}  // namespace durnet
