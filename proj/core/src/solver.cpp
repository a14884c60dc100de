#include "durnet/solver.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_set>

namespace durnet {

namespace {

constexpr unsigned kNoWin = std::numeric_limits<unsigned>::max();

}  // namespace

Solver::Solver(Game game, SolverOptions options) : game_(std::move(game)), options_(options) {}

GamePosition Solver::canonical(const GamePosition& pos) const {
  GamePosition p = pos;
  if (options_.prune_dead_tokens && game_.semantics().is_global_impatient()) {
    p.left = live_tokens(game_.net(), game_.semantics(), p.left);
    p.right = live_tokens(game_.net(), game_.semantics(), p.right);
  }
  auto c = canonicalize_pair(p.left, p.right);
  p.left = std::move(c.left);
  p.right = std::move(c.right);
  if (options_.symmetric_memo && p.right < p.left) std::swap(p.left, p.right);
  return p;
}

Solver::Entry& Solver::entry(const GamePosition& key) {
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  if (memo_.size() >= options_.max_positions) {
    throw ResourceLimitError("solver exceeded " + std::to_string(options_.max_positions) +
                             " distinct positions");
  }
  stats_.memo_entries = memo_.size() + 1;
  return memo_.emplace(key, Entry{}).first->second;
}

// Returns the least number of rounds within which Spoiler wins from key, or
// kNoWin if that number exceeds budget.
unsigned Solver::search(const GamePosition& key, unsigned budget) {
  if (budget == 0) return kNoWin;
  ++stats_.nodes;
  {
    Entry& e = entry(key);
    if (e.rounds) return *e.rounds <= budget ? *e.rounds : kNoWin;
    if (e.no_win_within >= budget) return kNoWin;
    if (key.left == key.right) {
      e.no_win_within = kNoWin;
      return kNoWin;
    }
  }

  // Successor pairs per Spoiler move, deduplicated, equal pairs first.
  std::vector<std::vector<GamePosition>> options;
  for (auto& mo : game_.expand(key)) {
    std::vector<GamePosition> children;
    for (auto& r : mo.responses) {
      GamePosition c = canonical(r.position);
      if (std::find(children.begin(), children.end(), c) == children.end()) {
        children.push_back(std::move(c));
      }
    }
    std::stable_partition(children.begin(), children.end(),
                          [](const GamePosition& c) { return c.left == c.right; });
    options.push_back(std::move(children));
  }
  std::stable_sort(options.begin(), options.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });

  unsigned best = kNoWin;
  for (const auto& children : options) {
    if (children.empty()) {
      best = 1;
      break;
    }
    const unsigned limit = std::min(budget, best == kNoWin ? kNoWin : best - 1);
    if (limit < 2) continue;
    unsigned worst = 0;
    for (const auto& child : children) {
      unsigned sub = search(child, limit - 1);
      if (sub == kNoWin) {
        worst = kNoWin;
        break;
      }
      worst = std::max(worst, sub + 1);
    }
    if (worst != kNoWin) best = worst;
  }

  Entry& e = entry(key);
  if (best != kNoWin) {
    e.rounds = best;
  } else {
    e.no_win_within = std::max(e.no_win_within, budget);
  }
  return best;
}

std::optional<unsigned> Solver::rounds_to_win(const GamePosition& pos, unsigned depth) {
  unsigned r = search(canonical(pos), depth);
  if (r == kNoWin) return std::nullopt;
  return r;
}

std::optional<std::vector<GamePosition>> Solver::certify(const GamePosition& root) {
  std::vector<GamePosition> nodes{root};
  std::unordered_map<GamePosition, std::size_t, GamePositionHash> index{{root, 0}};
  // edges[i][m] lists the successor pairs available against move m of node i.
  std::vector<std::vector<std::vector<std::size_t>>> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    edges.emplace_back();
    const GamePosition pos = nodes[i];
    if (pos.left == pos.right) continue;
    for (auto& mo : game_.expand(pos)) {
      std::vector<std::size_t> answers;
      for (auto& r : mo.responses) {
        GamePosition c = canonical(r.position);
        auto [it, inserted] = index.emplace(c, nodes.size());
        if (inserted) {
          if (nodes.size() >= options_.certificate_budget) {
            stats_.certificate_positions = nodes.size();
            return std::nullopt;
          }
          nodes.push_back(std::move(c));
        }
        answers.push_back(it->second);
      }
      edges[i].push_back(std::move(answers));
    }
  }
  stats_.certificate_positions = nodes.size();

  std::vector<char> alive(nodes.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!alive[i]) continue;
      for (const auto& answers : edges[i]) {
        bool answered = std::any_of(answers.begin(), answers.end(),
                                    [&](std::size_t j) { return alive[j] != 0; });
        if (!answered) {
          alive[i] = 0;
          changed = true;
          break;
        }
      }
    }
  }
  if (!alive[0]) return std::nullopt;
  std::vector<GamePosition> relation;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (alive[i] && nodes[i].left != nodes[i].right) relation.push_back(nodes[i]);
  }
  return relation;
}

Verdict Solver::solve(const GamePosition& pos, unsigned depth) {
  GamePosition key = canonical(pos);
  unsigned r = search(key, depth);
  if (r != kNoWin) return SpoilerWins{r};
  if (options_.certify) {
    if (auto relation = certify(key)) return Bisimilar{std::move(*relation)};
  }
  return Unknown{depth};
}

Verdict solve_bounded(const Net& net, Semantics sem, const GamePosition& pos, unsigned depth,
                      const SolverOptions& options) {
  Solver solver(Game(net, sem), options);
  return solver.solve(pos, depth);
}

bool is_bisimulation(const Game& game, const std::vector<GamePosition>& relation,
                     const std::function<GamePosition(const GamePosition&)>& canonical) {
  std::unordered_set<GamePosition, GamePositionHash> members(relation.begin(), relation.end());
  auto member = [&](const GamePosition& p) {
    GamePosition c = canonical(p);
    return c.left == c.right || members.count(c) > 0;
  };
  for (const auto& pos : relation) {
    if (pos.left == pos.right) continue;
    for (const auto& mo : game.expand(pos)) {
      bool ok = std::any_of(mo.responses.begin(), mo.responses.end(),
                            [&](const Response& r) { return member(r.position); });
      if (!ok) return false;
    }
  }
  return true;
}

SearchStrategy::SearchStrategy(Game game, unsigned depth, std::uint64_t seed, SolverOptions options)
    : solver_(std::move(game), options), depth_(depth), rng_(seed) {
  if (depth == 0) throw DomainError("search strategy needs depth >= 1");
}

GameMove SearchStrategy::choose_move(const GamePosition& pos) {
  const Game& game = solver_.game();
  auto moves = game.spoiler_moves(pos);
  if (moves.empty()) throw StuckError("Spoiler has no move");

  unsigned best = kNoWin;
  std::size_t best_index = 0;
  std::vector<std::size_t> fewest;
  std::size_t fewest_count = std::numeric_limits<std::size_t>::max();
  for (std::size_t i = 0; i < moves.size(); ++i) {
    auto responses = game.duplicator_responses(pos, moves[i]);
    unsigned value = responses.empty() ? 1 : 0;
    for (const auto& r : responses) {
      auto sub = solver_.rounds_to_win(r.position, depth_ - 1);
      if (!sub) {
        value = kNoWin;
        break;
      }
      value = std::max(value, *sub + 1);
    }
    if (value < best) {
      best = value;
      best_index = i;
    }
    if (responses.size() < fewest_count) {
      fewest_count = responses.size();
      fewest.clear();
    }
    if (responses.size() == fewest_count) fewest.push_back(i);
  }
  if (best != kNoWin) return moves[best_index];
  std::uniform_int_distribution<std::size_t> pick(0, fewest.size() - 1);
  return moves[fewest[pick(rng_)]];
}

Response SearchStrategy::choose_response(const GamePosition& pos, const GameMove& move) {
  auto responses = solver_.game().duplicator_responses(pos, move);
  if (responses.empty()) throw StuckError("Duplicator has no response");

  std::optional<std::size_t> safe;
  std::size_t delay_index = 0;
  unsigned delay = 0;
  for (std::size_t i = 0; i < responses.size(); ++i) {
    const auto& p = responses[i].position;
    auto sub = depth_ > 1 ? solver_.rounds_to_win(p, depth_ - 1) : std::nullopt;
    if (!sub) {
      if (p.left == p.right) return responses[i];
      if (!safe) safe = i;
    } else if (*sub > delay) {
      delay = *sub;
      delay_index = i;
    }
  }
  return responses[safe.value_or(delay_index)];
}

}  // namespace durnet
