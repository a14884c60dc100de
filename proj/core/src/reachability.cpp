#include "durnet/reachability.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace durnet {

namespace {

struct Node {
  DurationalMarking marking;
  std::size_t parent = 0;
  FireableInstance via;  // unused for the root
};

std::vector<FireableInstance> path_to(const std::vector<Node>& nodes, std::size_t i) {
  std::vector<FireableInstance> path;
  while (i != 0) {
    path.push_back(nodes[i].via);
    i = nodes[i].parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

Count saturating_pow_bound(Count base_tokens, Count factor, Stamp exponent) {
  const Count cap = std::numeric_limits<Count>::max();
  Count bound = base_tokens;
  for (Stamp i = 0; i < exponent && factor > 1; ++i) {
    if (bound > cap / factor) return cap;
    bound *= factor;
  }
  return bound;
}

// Generic BFS; `hit` decides success and `keep` filters successors.
template <class Hit, class Keep>
std::variant<ReachFound, std::size_t> bfs(const Net& net, Semantics sem, const DurationalMarking& source,
                                          std::size_t limit, bool throw_on_limit, Hit hit, Keep keep) {
  std::vector<Node> nodes{{source, 0, {}}};
  std::unordered_map<DurationalMarking, std::size_t> seen{{source, 0}};
  if (hit(source)) return ReachFound{};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const DurationalMarking current = nodes[i].marking;
    for (auto& inst : enabled(net, sem, current)) {
      if (!keep(inst.successor)) continue;
      if (seen.count(inst.successor)) continue;
      if (nodes.size() >= limit) {
        if (throw_on_limit) {
          throw ResourceLimitError("reachability exceeded " + std::to_string(limit) + " markings");
        }
        return nodes.size();
      }
      seen.emplace(inst.successor, nodes.size());
      DurationalMarking succ = inst.successor;
      nodes.push_back(Node{std::move(succ), i, std::move(inst)});
      if (hit(nodes.back().marking)) return ReachFound{path_to(nodes, nodes.size() - 1)};
    }
  }
  return nodes.size();
}

}  // namespace

DurationalReach reach_durational(const Net& net, Semantics sem, const DurationalMarking& source,
                                 const DurationalMarking& target, const ReachOptions& options) {
  const bool empty_post = std::any_of(net.rules().begin(), net.rules().end(),
                                      [](const TransitionRule& r) { return r.post.empty(); });
  const Stamp bound = max_stamp(target);
  Count max_post = 1;
  for (const auto& r : net.rules()) max_post = std::max(max_post, r.post.total());
  const Count token_bound = saturating_pow_bound(std::max<Count>(source.total(), 1), max_post, bound);

  auto keep = [&](const DurationalMarking& m) {
    if (!options.stamp_prune) return true;
    if (max_stamp(m) > bound) return false;
    if (!empty_post && m.total() > token_bound) {
      throw Error("token-count monitor violated: " + std::to_string(m.total()) + " tokens");
    }
    return true;
  };
  if (source != target && !keep(source)) return NotReachable{!empty_post};

  auto r = bfs(net, sem, source, options.max_markings, true,
               [&](const DurationalMarking& m) { return m == target; }, keep);
  if (auto* f = std::get_if<ReachFound>(&r)) return std::move(*f);
  return NotReachable{!empty_post || !options.stamp_prune};
}

UntimedReach reach_untimed_bounded(const Net& net, Semantics sem, const DurationalMarking& source,
                                   const PlaceMultiset& target, std::size_t budget) {
  if (budget == 0) throw DomainError("untimed reachability needs a budget of at least 1");
  auto r = bfs(net, sem, source, budget, false,
               [&](const DurationalMarking& m) { return untime(m) == target; },
               [](const DurationalMarking&) { return true; });
  if (auto* f = std::get_if<ReachFound>(&r)) return std::move(*f);
  return NotWithinBudget{std::get<std::size_t>(r)};
}

DurationalMarking replay(const Net& net, const DurationalMarking& source,
                         const std::vector<FireableInstance>& path) {
  DurationalMarking m = source;
  for (const auto& inst : path) m = fire(net, m, inst);
  return m;
}

}  // namespace durnet
