#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "durnet/net.hpp"

namespace durnet {

struct ReachFound {
  std::vector<FireableInstance> path;
};

// `definitive` is false when the net has a rule with an empty post-set: such a
// rule can remove a token stamped above the target's maximum, which the stamp
// bound relies on never happening.
struct NotReachable {
  bool definitive = true;
};

struct NotWithinBudget {
  std::size_t explored = 0;
};

using DurationalReach = std::variant<ReachFound, NotReachable>;
using UntimedReach = std::variant<ReachFound, NotWithinBudget>;

struct ReachOptions {
  std::size_t max_markings = 1'000'000;
  // Drop successors carrying a stamp above max_stamp(target).
  bool stamp_prune = true;
};

// Breadth-first search from source for exactly `target`. Witnesses are
// shortest. Throws ResourceLimitError past options.max_markings.
DurationalReach reach_durational(const Net& net, Semantics sem, const DurationalMarking& source,
                                 const DurationalMarking& target, const ReachOptions& options = {});

// Breadth-first search for any marking whose untiming is `target`, visiting
// at most `budget` distinct markings. Throws DomainError if budget is 0.
UntimedReach reach_untimed_bounded(const Net& net, Semantics sem, const DurationalMarking& source,
                                   const PlaceMultiset& target, std::size_t budget);

// Replays a path with fire(); throws StaleInstanceError if a step does not apply.
DurationalMarking replay(const Net& net, const DurationalMarking& source,
                         const std::vector<FireableInstance>& path);

}  // namespace durnet
