#include "durnet/game.hpp"

#include <algorithm>
#include <map>

namespace durnet {

const char* side_name(Side s) { return s == Side::kLeft ? "left" : "right"; }

Game::Game(Net net, Semantics sem) : net_(std::make_shared<const Net>(std::move(net))), sem_(sem) {}

Game::Game(std::shared_ptr<const Net> net, Semantics sem) : net_(std::move(net)), sem_(sem) {}

GameMove Game::make_move(Side side, const FireableInstance& inst) const {
  return GameMove{side, net_->rule(inst.rule).label, inst.time_label, inst};
}

std::vector<GameMove> Game::spoiler_moves(const GamePosition& pos) const {
  std::vector<GameMove> out;
  for (Side s : {Side::kLeft, Side::kRight}) {
    for (auto& inst : enabled(*net_, sem_, pos.at(s))) out.push_back(make_move(s, inst));
  }
  return out;
}

std::vector<MoveOptions> Game::expand(const GamePosition& pos) const {
  const std::vector<FireableInstance> en[2] = {enabled(*net_, sem_, pos.left), enabled(*net_, sem_, pos.right)};
  // Answers depend only on (action, time); build each group once per side.
  std::map<std::pair<Label, Stamp>, std::vector<const FireableInstance*>> groups[2];
  for (int s = 0; s < 2; ++s) {
    for (const auto& inst : en[s]) groups[s][{net_->rule(inst.rule).label, inst.time_label}].push_back(&inst);
  }
  std::vector<MoveOptions> out;
  for (int s = 0; s < 2; ++s) {
    const Side side = s == 0 ? Side::kLeft : Side::kRight;
    const auto& theirs = groups[1 - s];
    for (const auto& inst : en[s]) {
      MoveOptions mo{make_move(side, inst), {}};
      auto it = theirs.find({mo.move.action, inst.time_label});
      if (it != theirs.end()) {
        for (const FireableInstance* r : it->second) {
          bool seen = std::any_of(mo.responses.begin(), mo.responses.end(), [&](const Response& x) {
            return x.instance.successor == r->successor;
          });
          if (seen) continue;
          GamePosition next = pos;
          next.at(side) = inst.successor;
          next.at(opposite(side)) = r->successor;
          mo.responses.push_back(Response{*r, std::move(next)});
        }
      }
      out.push_back(std::move(mo));
    }
  }
  return out;
}

GamePosition Game::after_move(const GamePosition& pos, const GameMove& move) const {
  GamePosition next = pos;
  next.at(move.side) = move.instance.successor;
  return next;
}

std::vector<Response> Game::duplicator_responses(const GamePosition& pos, const GameMove& move) const {
  auto mine = enabled(*net_, sem_, pos.at(move.side));
  if (std::find(mine.begin(), mine.end(), move.instance) == mine.end() ||
      net_->rule(move.instance.rule).label != move.action ||
      move.instance.time_label != move.time_label) {
    throw IllegalMoveError("move is not enabled at this position");
  }
  std::vector<Response> out;
  const Side other = opposite(move.side);
  for (auto& inst : enabled(*net_, sem_, pos.at(other))) {
    if (inst.time_label != move.time_label || net_->rule(inst.rule).label != move.action) continue;
    bool seen = std::any_of(out.begin(), out.end(), [&](const Response& r) {
      return r.instance.successor == inst.successor;
    });
    if (seen) continue;
    GamePosition next = pos;
    next.at(move.side) = move.instance.successor;
    next.at(other) = inst.successor;
    out.push_back(Response{std::move(inst), std::move(next)});
  }
  return out;
}

GameSession::GameSession(Game game, GamePosition start) : game_(std::move(game)) {
  positions_.push_back(std::move(start));
}

const GamePosition& GameSession::apply_move(const GameMove& move, const Response& response) {
  auto responses = game_.duplicator_responses(current(), move);  // validates the move
  auto it = std::find_if(responses.begin(), responses.end(), [&](const Response& r) {
    return r.position == response.position;
  });
  if (it == responses.end() || !(response.instance.successor == it->instance.successor)) {
    throw IllegalMoveError("response is not a legal answer to the move");
  }
  const Net& net = game_.net();
  GamePosition mid = game_.after_move(current(), move);
  log_.push_back(HalfMove{move.side, move.action, move.time_label, move.instance.rule, mid});
  log_.push_back(HalfMove{opposite(move.side), net.rule(response.instance.rule).label,
                          response.instance.time_label, response.instance.rule, response.position});
  positions_.push_back(response.position);
  return current();
}

const GamePosition& GameSession::undo() {
  if (positions_.size() == 1) throw Error("nothing to undo");
  positions_.pop_back();
  log_.pop_back();
  log_.pop_back();
  return current();
}

}  // namespace durnet
