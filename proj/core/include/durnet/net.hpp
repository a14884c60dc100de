#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "durnet/multiset.hpp"

namespace durnet {

using RuleIndex = std::size_t;

// X ~a~> Y with a positive duration. The rule's identifier is its index in the
// owning Net.
struct TransitionRule {
  Label label;
  PlaceMultiset pre;
  PlaceMultiset post;  // may be empty
  Stamp duration = 1;

  friend bool operator==(const TransitionRule&, const TransitionRule&) = default;
};

class Net {
 public:
  Net() = default;
  // Throws ValidationError on a zero duration or an empty pre-set. Places and
  // labels mentioned by rules are declared implicitly; extra_places declares
  // places that no rule touches.
  explicit Net(std::vector<TransitionRule> rules, std::vector<Place> extra_places = {});

  const std::vector<TransitionRule>& rules() const noexcept { return rules_; }
  const TransitionRule& rule(RuleIndex i) const { return rules_.at(i); }
  const std::set<Place>& places() const noexcept { return places_; }
  const std::set<Label>& labels() const noexcept { return labels_; }
  bool has_place(std::string_view name) const;

  friend bool operator==(const Net& a, const Net& b) { return a.rules_ == b.rules_; }

 private:
  std::vector<TransitionRule> rules_;
  std::set<Place> places_;
  std::set<Label> labels_;
};

enum class Patience { kPatient, kImpatient };
enum class Clock { kGlobalTime, kLocalTime };

struct Semantics {
  Patience patience = Patience::kImpatient;
  Clock clock = Clock::kGlobalTime;

  friend bool operator==(Semantics, Semantics) = default;

  static Semantics global_patient() { return {Patience::kPatient, Clock::kGlobalTime}; }
  static Semantics global_impatient() { return {Patience::kImpatient, Clock::kGlobalTime}; }
  static Semantics local_patient() { return {Patience::kPatient, Clock::kLocalTime}; }
  static Semantics local_impatient() { return {Patience::kImpatient, Clock::kLocalTime}; }

  bool is_global_impatient() const {
    return patience == Patience::kImpatient && clock == Clock::kGlobalTime;
  }
};

// "gp", "gi", "lp" or "li".
std::optional<Semantics> parse_semantics(std::string_view code);
std::string semantics_code(Semantics sem);

// A rule fireable at a given time due to a given submarking, together with
// the marking it leads to.
struct FireableInstance {
  RuleIndex rule = 0;
  DurationalMarking submarking;
  Stamp time_label = 0;
  DurationalMarking successor;

  friend bool operator==(const FireableInstance&, const FireableInstance&) = default;
};

// Instances satisfying only the patience condition. Ordered by rule index,
// then by time label, then by submarking.
std::vector<FireableInstance> locally_enabled(const Net& net, Patience patience,
                                              const DurationalMarking& m);

// Under global-time semantics only the instances with the jointly minimal time
// label survive; under local-time this equals locally_enabled.
std::vector<FireableInstance> enabled(const Net& net, Semantics sem,
                                      const DurationalMarking& m);

// Minimal enabled time label, if any instance is enabled.
std::optional<Stamp> min_time_label(const Net& net, Semantics sem, const DurationalMarking& m);

// M - X + {(t + dur) @ p : p in post}. Throws StaleInstanceError if the
// instance's submarking is not contained in m.
DurationalMarking fire(const Net& net, const DurationalMarking& m, const FireableInstance& inst);

// Tokens that can never take part in a firing again (global-time impatient
// only): stamps strictly below the minimal enabled time label, or the whole
// marking when nothing is enabled.
DurationalMarking dead_tokens(const Net& net, Semantics sem, const DurationalMarking& m);
DurationalMarking live_tokens(const Net& net, Semantics sem, const DurationalMarking& m);

// Every token that is not dead carries stamp t.
bool is_equimarking(const Net& net, Semantics sem, const DurationalMarking& m, Stamp t);

// Rule in an ordinary (untimed) labelled net.
struct OrdinaryRule {
  Label label;
  PlaceMultiset pre;
  PlaceMultiset post;
};

// Embedding of an ordinary net into patient durational semantics: a fresh
// pacemaker place is added to the pre- and post-set of every rule.
struct PatientLift {
  Net net;
  Place pacemaker;

  // Adds one pacemaker token stamped with the marking's maximal stamp.
  DurationalMarking lift_marking(const DurationalMarking& m) const;
  DurationalMarking lift_marking(const PlaceMultiset& m) const;
};

// Throws NameCollisionError if the pacemaker name is already used by a rule.
PatientLift patient_lift(const std::vector<OrdinaryRule>& rules,
                         const std::vector<Stamp>& durations,
                         std::string_view pacemaker_name = "pace");

struct CanonicalPair {
  DurationalMarking left;
  DurationalMarking right;
  Stamp delta = 0;
};

// Shifts both markings down by their joint minimal stamp.
CanonicalPair canonicalize_pair(const DurationalMarking& left, const DurationalMarking& right);

struct StampSplit {
  DurationalMarking at_or_below;
  DurationalMarking above;
};

StampSplit split_by_stamp(const DurationalMarking& m, Stamp t);

}  // namespace durnet
