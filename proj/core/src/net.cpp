#include "durnet/net.hpp"

#include <algorithm>
#include <limits>

namespace durnet {

Net::Net(std::vector<TransitionRule> rules, std::vector<Place> extra_places)
    : rules_(std::move(rules)) {
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const auto& r = rules_[i];
    if (r.duration == 0) {
      throw ValidationError("rule " + std::to_string(i) + " (" + r.label.name() +
                            "): duration must be positive");
    }
    if (r.pre.empty()) {
      throw ValidationError("rule " + std::to_string(i) + " (" + r.label.name() +
                            "): pre-set must be nonempty");
    }
    labels_.insert(r.label);
    for (const auto& [p, c] : r.pre.entries()) places_.insert(p);
    for (const auto& [p, c] : r.post.entries()) places_.insert(p);
  }
  places_.insert(extra_places.begin(), extra_places.end());
}

bool Net::has_place(std::string_view name) const {
  return std::any_of(places_.begin(), places_.end(),
                     [&](Place p) { return p.name() == name; });
}

std::optional<Semantics> parse_semantics(std::string_view code) {
  if (code == "gp") return Semantics::global_patient();
  if (code == "gi") return Semantics::global_impatient();
  if (code == "lp") return Semantics::local_patient();
  if (code == "li") return Semantics::local_impatient();
  return std::nullopt;
}

std::string semantics_code(Semantics sem) {
  std::string out = sem.clock == Clock::kGlobalTime ? "g" : "l";
  out += sem.patience == Patience::kPatient ? "p" : "i";
  return out;
}

namespace {

using TokenRange = std::pair<std::vector<DurationalMarking::Entry>::const_iterator,
                             std::vector<DurationalMarking::Entry>::const_iterator>;

TokenRange tokens_on(const DurationalMarking& m, Place p) {
  const auto& es = m.entries();
  auto lo = std::lower_bound(es.begin(), es.end(), p,
                             [](const auto& e, Place q) { return e.first.place < q; });
  auto hi = lo;
  while (hi != es.end() && hi->first.place == p) ++hi;
  return {lo, hi};
}

Stamp fresh_stamp(Stamp t, Stamp duration) {
  Stamp out;
  if (__builtin_add_overflow(t, duration, &out)) throw OverflowError("time-stamp overflow");
  return out;
}

DurationalMarking successor_of(const TransitionRule& rule, const DurationalMarking& m,
                               const DurationalMarking& sub, Stamp t) {
  return add(subtract(m, sub), stamp_all(rule.post, fresh_stamp(t, rule.duration)));
}

// All ways to pick `need` tokens (as a multiset) from the stamps available on
// one place. Each choice is a list of (stamp, count) with counts summing to need.
void choose_from_place(const TokenRange& avail, Count need,
                       std::vector<std::vector<std::pair<Stamp, Count>>>& out) {
  std::vector<std::pair<Stamp, Count>> pick;
  std::vector<std::pair<Stamp, Count>> slots;
  for (auto it = avail.first; it != avail.second; ++it) slots.emplace_back(it->first.stamp, it->second);
  auto rec = [&](auto&& self, std::size_t idx, Count left) -> void {
    if (left == 0) {
      out.push_back(pick);
      return;
    }
    if (idx == slots.size()) return;
    Count maxhere = std::min(left, slots[idx].second);
    for (Count take = maxhere + 1; take-- > 0;) {
      if (take > 0) pick.emplace_back(slots[idx].first, take);
      self(self, idx + 1, left - take);
      if (take > 0) pick.pop_back();
    }
  };
  rec(rec, 0, need);
}

void enumerate_rule(const Net& net, RuleIndex ri, Patience patience, const DurationalMarking& m,
                    std::vector<FireableInstance>& out) {
  const auto& rule = net.rule(ri);
  const auto& pre = rule.pre.entries();
  std::size_t first = out.size();

  if (patience == Patience::kImpatient) {
    auto head = tokens_on(m, pre.front().first);
    for (auto it = head.first; it != head.second; ++it) {
      Stamp t = it->first.stamp;
      bool ok = true;
      std::vector<DurationalMarking::Entry> sub;
      for (const auto& [p, k] : pre) {
        if (m.count(Token{p, t}) < k) {
          ok = false;
          break;
        }
        sub.emplace_back(Token{p, t}, k);
      }
      if (!ok) continue;
      DurationalMarking x(std::move(sub));
      auto succ = successor_of(rule, m, x, t);
      out.push_back(FireableInstance{ri, std::move(x), t, std::move(succ)});
    }
    return;
  }

  std::vector<std::vector<std::vector<std::pair<Stamp, Count>>>> per_place;
  per_place.reserve(pre.size());
  for (const auto& [p, k] : pre) {
    per_place.emplace_back();
    choose_from_place(tokens_on(m, p), k, per_place.back());
    if (per_place.back().empty()) return;
  }
  std::vector<std::size_t> idx(pre.size(), 0);
  while (true) {
    std::vector<DurationalMarking::Entry> sub;
    Stamp t = 0;
    for (std::size_t i = 0; i < pre.size(); ++i) {
      for (const auto& [s, c] : per_place[i][idx[i]]) {
        sub.emplace_back(Token{pre[i].first, s}, c);
        t = std::max(t, s);
      }
    }
    DurationalMarking x(std::move(sub));
    auto succ = successor_of(rule, m, x, t);
    out.push_back(FireableInstance{ri, std::move(x), t, std::move(succ)});

    std::size_t d = 0;
    while (d < idx.size() && ++idx[d] == per_place[d].size()) idx[d++] = 0;
    if (d == idx.size()) break;
  }
  std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end(),
            [](const FireableInstance& a, const FireableInstance& b) {
              if (a.time_label != b.time_label) return a.time_label < b.time_label;
              return a.submarking < b.submarking;
            });
}

}  // namespace

std::vector<FireableInstance> locally_enabled(const Net& net, Patience patience,
                                              const DurationalMarking& m) {
  std::vector<FireableInstance> out;
  if (m.empty()) return out;
  for (RuleIndex i = 0; i < net.rules().size(); ++i) enumerate_rule(net, i, patience, m, out);
  return out;
}

std::vector<FireableInstance> enabled(const Net& net, Semantics sem, const DurationalMarking& m) {
  auto local = locally_enabled(net, sem.patience, m);
  if (sem.clock == Clock::kLocalTime || local.empty()) return local;
  Stamp tmin = std::numeric_limits<Stamp>::max();
  for (const auto& inst : local) tmin = std::min(tmin, inst.time_label);
  std::erase_if(local, [tmin](const FireableInstance& f) { return f.time_label != tmin; });
  return local;
}

std::optional<Stamp> min_time_label(const Net& net, Semantics sem, const DurationalMarking& m) {
  auto local = locally_enabled(net, sem.patience, m);
  if (local.empty()) return std::nullopt;
  Stamp tmin = std::numeric_limits<Stamp>::max();
  for (const auto& inst : local) tmin = std::min(tmin, inst.time_label);
  return tmin;
}

DurationalMarking fire(const Net& net, const DurationalMarking& m, const FireableInstance& inst) {
  if (!leq(inst.submarking, m)) {
    throw StaleInstanceError("instance submarking is not contained in the marking");
  }
  return successor_of(net.rule(inst.rule), m, inst.submarking, inst.time_label);
}

namespace {
void require_global_impatient(Semantics sem) {
  if (!sem.is_global_impatient()) {
    throw UnsupportedSemanticsError("dead tokens are defined for global-time impatient semantics only");
  }
}
}  // namespace

DurationalMarking dead_tokens(const Net& net, Semantics sem, const DurationalMarking& m) {
  require_global_impatient(sem);
  auto tmin = min_time_label(net, sem, m);
  if (!tmin) return m;
  std::vector<DurationalMarking::Entry> dead;
  for (const auto& e : m.entries()) {
    if (e.first.stamp < *tmin) dead.push_back(e);
  }
  return DurationalMarking(std::move(dead));
}

DurationalMarking live_tokens(const Net& net, Semantics sem, const DurationalMarking& m) {
  return subtract(m, dead_tokens(net, sem, m));
}

bool is_equimarking(const Net& net, Semantics sem, const DurationalMarking& m, Stamp t) {
  auto live = live_tokens(net, sem, m);
  return std::all_of(live.entries().begin(), live.entries().end(),
                     [t](const auto& e) { return e.first.stamp == t; });
}

DurationalMarking PatientLift::lift_marking(const DurationalMarking& m) const {
  return add(m, DurationalMarking::singleton(Token{pacemaker, max_stamp(m)}));
}

DurationalMarking PatientLift::lift_marking(const PlaceMultiset& m) const {
  return lift_marking(stamp_all(m, 0));
}

PatientLift patient_lift(const std::vector<OrdinaryRule>& rules, const std::vector<Stamp>& durations,
                         std::string_view pacemaker_name) {
  if (durations.size() != rules.size()) {
    throw ValidationError("patient lift: one duration per rule is required");
  }
  for (const auto& r : rules) {
    for (const auto* side : {&r.pre, &r.post}) {
      for (const auto& [p, c] : side->entries()) {
        if (p.name() == pacemaker_name) {
          throw NameCollisionError("pacemaker place '" + std::string(pacemaker_name) +
                                   "' already occurs in the net");
        }
      }
    }
  }
  Place h = Place::intern(pacemaker_name);
  auto tick = PlaceMultiset::singleton(h);
  std::vector<TransitionRule> lifted;
  lifted.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    lifted.push_back(TransitionRule{rules[i].label, add(rules[i].pre, tick),
                                    add(rules[i].post, tick), durations[i]});
  }
  return PatientLift{Net(std::move(lifted), {h}), h};
}

CanonicalPair canonicalize_pair(const DurationalMarking& left, const DurationalMarking& right) {
  Stamp delta;
  if (left.empty() && right.empty()) {
    delta = 0;
  } else if (left.empty()) {
    delta = min_stamp(right);
  } else if (right.empty()) {
    delta = min_stamp(left);
  } else {
    delta = std::min(min_stamp(left), min_stamp(right));
  }
  if (delta == 0) return {left, right, 0};
  auto d = -static_cast<std::int64_t>(delta);
  return {shift(left, d), shift(right, d), delta};
}

StampSplit split_by_stamp(const DurationalMarking& m, Stamp t) {
  std::vector<DurationalMarking::Entry> lo, hi;
  for (const auto& e : m.entries()) (e.first.stamp <= t ? lo : hi).push_back(e);
  return {DurationalMarking(std::move(lo)), DurationalMarking(std::move(hi))};
}

}  // namespace durnet
