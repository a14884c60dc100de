// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "durnet/compiler.hpp"
#include "durnet/reachability.hpp"
#include "durnet/solver.hpp"
#include "durnet/strategies.hpp"
#include "durnet/textio.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "textgen.hpp"

using namespace durnet;

namespace {

// Pinned limits.
constexpr double kHaltingSecondsPerMachine = 60.0;
constexpr double kEquimarkingSecondsTotal = 30.0;
constexpr unsigned kNonHaltingDepth = 12;
constexpr unsigned kPlayoutMoves = 1000;
constexpr unsigned kPlayoutsPerMachine = 10;
constexpr unsigned kLiftMaxDepth = 6;
constexpr unsigned kPruneDepth = 6;
constexpr std::size_t kOracleLimit = 300'000;

const Semantics kGI = Semantics::global_impatient();
const Semantics kAll[] = {Semantics::global_patient(), Semantics::global_impatient(),
                          Semantics::local_patient(), Semantics::local_impatient()};

using SteadyClock = std::chrono::steady_clock;

double seconds_since(SteadyClock::time_point start) {
  return std::chrono::duration<double>(SteadyClock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (pass) detail << "first failure: " << why << "; ";
    pass = false;
  }
};

std::string one_line(std::string s) {
  while (!s.empty() && s.back() == '\n') s.pop_back();
  std::string out;
  for (char c : s) out += c == '\n' ? std::string(" / ") : std::string(1, c);
  return out;
}

std::optional<unsigned> wins(const Verdict& v) {
  if (const auto* w = std::get_if<SpoilerWins>(&v)) return w->rounds;
  return std::nullopt;
}

std::shared_ptr<const CompiledNet> compiled(std::string_view text) {
  return std::make_shared<const CompiledNet>(compile(parse_machine(text)));
}

// The stamp t if every live token carries t; `any` for a marking without live
// tokens, which is an equimarking for every stamp.
struct Equi {
  bool any = false;
  std::optional<Stamp> t;
};

Equi equi(const Net& net, const DurationalMarking& m) {
  auto live = live_tokens(net, kGI, m);
  if (live.empty()) return {true, std::nullopt};
  auto s = stamps(live);
  if (s.size() != 1) return {};
  return {false, *s.begin()};
}

// Both sides are t-equimarkings for one t: a large step has just completed.
std::optional<Stamp> checkpoint(const Net& net, const GamePosition& pos) {
  auto l = equi(net, pos.left), r = equi(net, pos.right);
  if (l.t && r.t) return *l.t == *r.t ? l.t : std::nullopt;
  if (l.t && r.any) return l.t;
  if (r.t && l.any) return r.t;
  return std::nullopt;
}

bool invariant_holds(const Net& net, const GamePosition& pos) {
  auto l = live_tokens(net, kGI, pos.left), r = live_tokens(net, kGI, pos.right);
  return l == r || is_conforming(l, r) == Conformance::kConforming;
}

// ---------------------------------------------------------------------------

void halting_reduction(Outcome& out) {
  std::size_t machines = 0;
  double slowest = 0;
  for (const auto& nm : gen::halting_corpus()) {
    auto start = SteadyClock::now();
    auto c = compiled(nm.text);
    auto run = run_machine(c->machine, 1000, true);
    if (!run.halted) {
      out.fail(nm.name + " does not halt");
      continue;
    }
    std::uint64_t top = std::max(run.config.c0, run.config.c1);
    for (const auto& cfg : run.trace) top = std::max({top, cfg.c0, cfg.c1});
    if (run.steps > 50 || top > 10) out.fail(nm.name + " exceeds the corpus limits");

    const auto bound = oracle::correct_simulation_rounds(c->machine, 1000);
    GamePosition pos{c->left_init, c->right_init};
    auto v = solve_bounded(c->net, kGI, pos, static_cast<unsigned>(bound));
    auto r = wins(v);
    if (!r || *r > bound) {
      out.fail(nm.name + ": no Spoiler win within " + std::to_string(bound) + " rounds");
    }

    // Spoiler's strategy against every Duplicator answer.
    Game g(c->net, kGI);
    SpoilerStrategy sp(c);
    std::size_t branches = 0;
    bool ok = true;
    std::function<void(const GamePosition&, std::uint64_t)> dfs = [&](const GamePosition& p, std::uint64_t depth) {
      if (!ok) return;
      if (depth > bound) {
        ok = false;
        out.fail(nm.name + ": a branch outlasts the bound");
        return;
      }
      GameMove mv;
      try {
        mv = sp.next_move(p);
      } catch (const OffScriptError& e) {
        ok = false;
        out.fail(nm.name + ": Spoiler strategy off script: " + e.what());
        return;
      }
      auto rs = g.duplicator_responses(p, mv);
      if (rs.empty()) {
        ++branches;
        return;
      }
      for (const auto& resp : rs) dfs(resp.position, depth + 1);
    };
    dfs(pos, 1);

    double secs = seconds_since(start);
    slowest = std::max(slowest, secs);
    if (secs > kHaltingSecondsPerMachine) out.fail(nm.name + " took too long");
    out.detail << nm.name << " rounds=" << (r ? std::to_string(*r) : "-") << "/" << bound
               << " stuck_branches=" << branches << "; ";
    ++machines;
  }
  if (machines < 5) out.fail("fewer than 5 machines");
  out.detail << "slowest " << slowest << "s";
}

// ---------------------------------------------------------------------------

struct Survival {
  std::size_t checkpoints = 0;
  std::size_t violations = 0;
  std::size_t failures = 0;
  std::string first;
};

// Duplicator answers `mv` with the proof strategy; returns false if it cannot.
bool duplicator_answers(const std::shared_ptr<const CompiledNet>& c, const GamePosition& pos, const GameMove& mv,
                        GamePosition& next, Survival& s) {
  DuplicatorStrategy dup(c);
  try {
    next = dup.respond(pos, mv).response.position;
    return true;
  } catch (const Error& e) {
    if (s.first.empty()) s.first = render_marking(pos.left) + " | " + render_marking(pos.right) + ": " + e.what();
    ++s.failures;
    return false;
  }
}

void exhaustive_play(const std::shared_ptr<const CompiledNet>& c, Survival& s) {
  Game g(c->net, kGI);
  std::vector<GamePosition> frontier{{c->left_init, c->right_init}};
  std::set<GamePosition> seen(frontier.begin(), frontier.end());
  for (unsigned round = 0; round < kNonHaltingDepth && !frontier.empty(); ++round) {
    std::vector<GamePosition> next;
    for (const auto& pos : frontier) {
      for (const auto& mv : g.spoiler_moves(pos)) {
        GamePosition after;
        if (!duplicator_answers(c, pos, mv, after, s)) continue;
        if (checkpoint(c->net, after)) {
          ++s.checkpoints;
          if (!invariant_holds(c->net, after)) ++s.violations;
        }
        auto key = canonicalize_pair(after.left, after.right);
        if (seen.insert(GamePosition{key.left, key.right}).second) next.push_back(after);
      }
    }
    frontier = std::move(next);
  }
}

void random_playout(const std::shared_ptr<const CompiledNet>& c, gen::Rng& rng, Survival& s) {
  Game g(c->net, kGI);
  GamePosition pos{c->left_init, c->right_init};
  std::optional<Stamp> last = 0;
  for (unsigned k = 0; k < kPlayoutMoves; ++k) {
    auto moves = g.spoiler_moves(pos);
    if (moves.empty()) return;
    const auto& mv = moves[gen::uniform(rng, 0, moves.size() - 1)];
    GamePosition after;
    if (!duplicator_answers(c, pos, mv, after, s)) return;
    pos = std::move(after);
    auto t = checkpoint(c->net, pos);
    if (t && t != last) {
      ++s.checkpoints;
      if (!invariant_holds(c->net, pos)) ++s.violations;
      last = t;
    }
  }
}

void nonhalting_reduction(Outcome& out) {
  gen::Rng rng(2024);
  std::size_t machines = 0;
  for (const auto& nm : gen::nonhalting_corpus()) {
    auto c = compiled(nm.text);
    if (run_machine(c->machine, 10'000).halted) out.fail(nm.name + " halts");
    auto v = solve_bounded(c->net, kGI, {c->left_init, c->right_init}, kNonHaltingDepth);
    if (wins(v)) out.fail(nm.name + ": Spoiler wins at depth " + std::to_string(kNonHaltingDepth));
    const char* verdict = std::holds_alternative<Unknown>(v) ? "unknown" : "bisimilar";

    Survival exhaustive, playouts;
    exhaustive_play(c, exhaustive);
    for (unsigned i = 0; i < kPlayoutsPerMachine; ++i) random_playout(c, rng, playouts);
    for (const auto* s : {&exhaustive, &playouts}) {
      if (s->failures) out.fail(nm.name + ": Duplicator strategy failed at " + s->first);
      if (s->violations) out.fail(nm.name + ": invariant violated " + std::to_string(s->violations) + " times");
    }
    out.detail << nm.name << " " << verdict << " checkpoints=" << exhaustive.checkpoints << "+"
               << playouts.checkpoints << " violations=" << exhaustive.violations + playouts.violations
               << " failures=" << exhaustive.failures + playouts.failures << "; ";
    ++machines;
  }
  if (machines < 5) out.fail("fewer than 5 machines");
}

// ---------------------------------------------------------------------------

void equimarking_coverage(Outcome& out) {
  auto start = SteadyClock::now();
  gen::Rng rng(7);
  std::size_t labels = 0, violations = 0, steps = 0;
  for (int n = 0; n < 100; ++n) {
    auto machine = gen::random_machine(rng, gen::uniform(rng, 2, 6));
    auto c = compile(machine);
    std::vector<DurationalMarking> seq{parse_marking("0@p1")};
    std::set<Stamp> times;
    const std::size_t length = gen::uniform(rng, 1, 100);
    for (std::size_t k = 0; k < length; ++k) {
      auto e = enabled(c.net, kGI, seq.back());
      if (e.empty()) break;
      const auto& inst = e[gen::uniform(rng, 0, e.size() - 1)];
      times.insert(inst.time_label);
      seq.push_back(inst.successor);
    }
    steps += seq.size() - 1;
    for (Stamp t : times) {
      ++labels;
      bool found = std::any_of(seq.begin(), seq.end(),
                               [&](const DurationalMarking& m) { return is_equimarking(c.net, kGI, m, t); });
      if (!found) {
        if (violations == 0) {
          out.fail("no " + std::to_string(t) + "-equimarking for " + one_line(render_machine(machine)));
        }
        ++violations;
      }
    }
  }
  double secs = seconds_since(start);
  if (secs > kEquimarkingSecondsTotal) out.fail("took too long");
  out.detail << "executions=100 steps=" << steps << " time_labels=" << labels << " violations=" << violations
             << " in " << secs << "s";
}

// ---------------------------------------------------------------------------

void patient_lift_oracle(Outcome& out) {
  gen::Rng rng(11);
  const std::vector<std::string> names = {"a", "b"};
  std::size_t comparisons = 0, disagreements = 0, distinguished = 0;
  for (int n = 0; n < 100; ++n) {
    const std::size_t places = gen::uniform(rng, 1, 4);
    std::map<std::string, Stamp> duration;
    for (const auto& l : names) duration[l] = gen::uniform(rng, 1, 3);

    oracle::OrdinaryNet on;
    std::vector<OrdinaryRule> rules;
    std::vector<Stamp> durations;
    for (std::size_t r = gen::uniform(rng, 1, 5); r > 0; --r) {
      oracle::OrdinaryNet::Rule rule;
      rule.label = names[gen::uniform(rng, 0, 1)];
      for (std::size_t k = gen::uniform(rng, 1, 2); k > 0; --k) ++rule.pre[gen::place_name(gen::uniform(rng, 0, places - 1))];
      for (std::size_t k = gen::uniform(rng, 0, 2); k > 0; --k) ++rule.post[gen::place_name(gen::uniform(rng, 0, places - 1))];
      on.rules.push_back(rule);
      auto bag = [](const oracle::Bag& b) {
        std::vector<PlaceMultiset::Entry> e;
        for (const auto& [p, k] : b) e.push_back({Place::intern(p), k});
        return PlaceMultiset(std::move(e));
      };
      rules.push_back(OrdinaryRule{Label::intern(rule.label), bag(rule.pre), bag(rule.post)});
      durations.push_back(duration[rule.label]);
    }
    auto random_bag = [&] {
      oracle::Bag b;
      for (std::size_t k = gen::uniform(rng, 0, 5); k > 0; --k) ++b[gen::place_name(gen::uniform(rng, 0, places - 1))];
      return b;
    };
    oracle::Bag a = random_bag(), b = gen::uniform(rng, 0, 2) == 0 ? a : random_bag();
    auto to_multiset = [](const oracle::Bag& bag) {
      std::vector<PlaceMultiset::Entry> e;
      for (const auto& [p, k] : bag) e.push_back({Place::intern(p), k});
      return PlaceMultiset(std::move(e));
    };

    auto lift = patient_lift(rules, durations);
    GamePosition pos{lift.lift_marking(to_multiset(a)), lift.lift_marking(to_multiset(b))};
    for (auto sem : {Semantics::global_patient(), Semantics::local_patient()}) {
      auto v = solve_bounded(lift.net, sem, pos, kLiftMaxDepth, {.certify = false});
      for (unsigned k = 0; k <= kLiftMaxDepth; ++k) {
        const bool expect = oracle::k_bisimilar(on, a, b, k);
        const bool got = !(wins(v) && *wins(v) <= k);
        ++comparisons;
        if (!expect) ++distinguished;
        if (expect != got) {
          if (disagreements == 0) out.fail("net " + std::to_string(n) + " k=" + std::to_string(k));
          ++disagreements;
        }
      }
    }
  }
  out.detail << "nets=100 comparisons=" << comparisons << " not_bisimilar=" << distinguished
             << " disagreements=" << disagreements;
}

// ---------------------------------------------------------------------------

using Key = std::tuple<RuleIndex, Stamp, DurationalMarking>;

std::set<Key> keys(const std::vector<FireableInstance>& v) {
  std::set<Key> out;
  for (const auto& i : v) out.insert({i.rule, i.time_label, i.submarking});
  return out;
}

bool subset(const std::set<Key>& a, const std::set<Key>& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

void semantics_cross_checks(Outcome& out) {
  gen::Rng rng(13);
  gen::NetShape shape;
  std::size_t local_sub = 0, global_sub = 0, filter = 0, shift_enabled = 0, shift_verdict = 0;
  std::string first_global;
  for (int n = 0; n < 200; ++n) {
    auto net = gen::random_net(rng, shape);
    auto m = gen::random_marking(rng, shape.places, 5, 4);

    std::map<std::string, std::vector<FireableInstance>> e;
    for (auto sem : kAll) e[semantics_code(sem)] = enabled(net, sem, m);
    if (!subset(keys(e["li"]), keys(e["lp"]))) ++local_sub;
    if (!subset(keys(e["gi"]), keys(e["gp"]))) {
      if (global_sub == 0) {
        first_global = one_line(render_net(net)) + " marking " + render_marking(m);
      }
      ++global_sub;
    }

    for (auto [local, global] : {std::pair{"lp", "gp"}, std::pair{"li", "gi"}}) {
      const auto& all = e[local];
      std::vector<FireableInstance> filtered;
      if (!all.empty()) {
        Stamp lo = std::min_element(all.begin(), all.end(), [](const auto& x, const auto& y) {
                     return x.time_label < y.time_label;
                   })->time_label;
        for (const auto& i : all) {
          if (i.time_label == lo) filtered.push_back(i);
        }
      }
      if (keys(filtered) != keys(e[global])) ++filter;
    }

    const auto d = static_cast<std::int64_t>(gen::uniform(rng, 1, 6));
    for (auto sem : kAll) {
      std::set<Key> moved;
      for (const auto& i : e[semantics_code(sem)]) moved.insert({i.rule, i.time_label + d, shift(i.submarking, d)});
      if (moved != keys(enabled(net, sem, shift(m, d)))) ++shift_enabled;
    }
    auto other = gen::uniform(rng, 0, 1) ? m : gen::random_marking(rng, shape.places, 5, 4);
    auto sem = kAll[gen::uniform(rng, 0, 3)];
    auto v = solve_bounded(net, sem, {m, other}, 3, {.certify = false});
    auto vs = solve_bounded(net, sem, {shift(m, d), shift(other, d)}, 3, {.certify = false});
    if (v != vs) ++shift_verdict;
  }

  std::size_t prune = 0, with_dead = 0;
  // Positions met in random play on compiled nets, cheats included, biased
  // towards ones holding dead tokens.
  {
    gen::Rng r2(17);
    auto pool = gen::nonhalting_corpus();
    for (const auto& nm : gen::halting_corpus()) pool.push_back(nm);
    std::size_t sampled = 0;
    while (sampled < 50) {
      auto c = compiled(pool[gen::uniform(r2, 0, pool.size() - 1)].text);
      Game g(c->net, kGI);
      GamePosition pos{c->left_init, c->right_init};
      for (std::size_t k = gen::uniform(r2, 1, 30); k > 0; --k) {
        auto options = g.expand(pos);
        if (options.empty()) break;
        const auto& rs = options[gen::uniform(r2, 0, options.size() - 1)].responses;
        if (rs.empty()) break;
        pos = rs[gen::uniform(r2, 0, rs.size() - 1)].position;
      }
      const bool dead = !dead_tokens(c->net, kGI, pos.left).empty() || !dead_tokens(c->net, kGI, pos.right).empty();
      if (!dead && gen::uniform(r2, 0, 9) != 0) continue;
      ++sampled;
      if (dead) ++with_dead;
      // Exact rounds up to the depth, so all smaller depths agree as well.
      auto plain = solve_bounded(c->net, kGI, pos, kPruneDepth, {.certify = false});
      auto pruned = solve_bounded(c->net, kGI, pos, kPruneDepth, {.certify = false, .prune_dead_tokens = true});
      if (wins(plain) != wins(pruned)) ++prune;
    }
  }

  if (local_sub) out.fail("li not within lp in " + std::to_string(local_sub) + " samples");
  if (global_sub) out.fail("gi not within gp in " + std::to_string(global_sub) + " samples, e.g. " + first_global);
  if (filter) out.fail("global differs from filtered local in " + std::to_string(filter) + " cases");
  if (shift_enabled) out.fail("enabled not shift-equivariant in " + std::to_string(shift_enabled) + " cases");
  if (shift_verdict) out.fail("verdict changed under shift in " + std::to_string(shift_verdict) + " cases");
  if (prune) out.fail("dead-token pruning changed " + std::to_string(prune) + " verdicts");
  out.detail << "samples=200 li<=lp violations=" << local_sub << " gi<=gp violations=" << global_sub
             << " filter=" << filter << " shift=" << shift_enabled << "+" << shift_verdict
             << " prune=" << prune << "/50 (" << with_dead << " holding dead tokens)";
}

// ---------------------------------------------------------------------------

void reachability(Outcome& out) {
  gen::Rng rng(19);
  gen::NetShape shape;
  shape.places = 6;
  shape.max_duration = 3;
  std::size_t nets = 0, redrawn = 0, found = 0, disagreements = 0, bad_witness = 0;
  while (nets < 100) {
    auto net = gen::random_net(rng, shape);
    auto sem = kAll[gen::uniform(rng, 0, 3)];
    auto source = gen::random_marking(rng, shape.places, 3, 1, 1);
    DurationalMarking target = source;
    if (gen::uniform(rng, 0, 3) == 0) {
      target = gen::random_marking(rng, shape.places, 4, 4);
    } else {
      for (std::size_t k = gen::uniform(rng, 0, 5); k > 0; --k) {
        auto e = enabled(net, sem, target);
        if (e.empty()) break;
        target = e[gen::uniform(rng, 0, e.size() - 1)].successor;
      }
    }
    auto expect = oracle::reachable_within_horizon(net, sem, oracle::from(source), oracle::from(target),
                                                   max_stamp(target), kOracleLimit);
    if (!expect) {
      ++redrawn;
      continue;
    }
    ++nets;
    auto got = reach_durational(net, sem, source, target);
    const bool is_found = std::holds_alternative<ReachFound>(got);
    if (is_found != *expect) {
      if (disagreements == 0) out.fail("disagreement on " + one_line(render_net(net)));
      ++disagreements;
    }
    if (is_found) {
      ++found;
      if (replay(net, source, std::get<ReachFound>(got).path) != target) {
        if (bad_witness == 0) out.fail("witness does not replay on " + one_line(render_net(net)));
        ++bad_witness;
      }
    }
  }
  out.detail << "nets=100 found=" << found << " not_reachable=" << 100 - found << " disagreements=" << disagreements
             << " bad_witnesses=" << bad_witness << " redrawn_over_limit=" << redrawn;
}

// ---------------------------------------------------------------------------

void round_trip(Outcome& out) {
  gen::Rng rng(23);
  std::size_t bad[3] = {0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    auto m = textgen::marking(rng);
    if (render_marking(parse_marking(m.canonical)) != m.canonical ||
        render_marking(parse_marking(m.messy)) != m.canonical) {
      ++bad[0];
    }
    auto n = textgen::net(rng);
    if (render_net(parse_net(n.canonical)) != n.canonical || render_net(parse_net(n.messy)) != n.canonical) ++bad[1];
    auto k = textgen::machine(rng);
    if (render_machine(parse_machine(k.canonical)) != k.canonical ||
        render_machine(parse_machine(k.messy)) != k.canonical) {
      ++bad[2];
    }
  }
  if (bad[0] + bad[1] + bad[2]) out.fail("mismatches");
  out.detail << "1000 each: marking=" << bad[0] << " net=" << bad[1] << " machine=" << bad[2] << " mismatches";
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)(Outcome&)> criteria[] = {
      {"reduction-halting", halting_reduction},
      {"reduction-nonhalting", nonhalting_reduction},
      {"equimarking-coverage", equimarking_coverage},
      {"patient-lift-oracle", patient_lift_oracle},
      {"semantics-cross-checks", semantics_cross_checks},
      {"reachability", reachability},
      {"round-trip", round_trip},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    auto start = SteadyClock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name, seconds_since(start), o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
