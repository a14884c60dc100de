#include <doctest.h>

#include <algorithm>
#include <set>

#include "durnet/compiler.hpp"
#include "durnet/solver.hpp"
#include "durnet/textio.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace durnet;

namespace {

DurationalMarking M(std::string_view s) { return parse_marking(s); }

const Semantics kAll[] = {Semantics::global_patient(), Semantics::global_impatient(),
                          Semantics::local_patient(), Semantics::local_impatient()};

std::optional<unsigned> wins(const Verdict& v) {
  if (const auto* w = std::get_if<SpoilerWins>(&v)) return w->rounds;
  return std::nullopt;
}

// Checks a certificate against the definition using only enabled(): every
// pair is closed under moves on both sides up to stamp shift. Identical
// pairs are accepted without a listing.
bool closed(const Net& net, Semantics sem, const std::vector<GamePosition>& rel) {
  std::set<std::pair<oracle::Marking, oracle::Marking>> members;
  auto norm = [](const DurationalMarking& a, const DurationalMarking& b) {
    auto c = canonicalize_pair(a, b);
    return std::pair{oracle::from(c.left), oracle::from(c.right)};
  };
  for (const auto& p : rel) members.insert(norm(p.left, p.right));
  auto in = [&](const DurationalMarking& a, const DurationalMarking& b) {
    return a == b || members.count(norm(a, b)) > 0;
  };
  for (const auto& p : rel) {
    for (int side = 0; side < 2; ++side) {
      const auto& mine = side == 0 ? p.left : p.right;
      const auto& theirs = side == 0 ? p.right : p.left;
      for (const auto& mv : enabled(net, sem, mine)) {
        bool answered = false;
        for (const auto& r : enabled(net, sem, theirs)) {
          if (net.rule(r.rule).label != net.rule(mv.rule).label || r.time_label != mv.time_label) continue;
          if (side == 0 ? in(mv.successor, r.successor) : in(r.successor, mv.successor)) {
            answered = true;
            break;
          }
        }
        if (!answered) return false;
      }
    }
  }
  return true;
}

bool has_pair(const std::vector<GamePosition>& rel, const GamePosition& p) {
  auto c = canonicalize_pair(p.left, p.right);
  return c.left == c.right || std::find(rel.begin(), rel.end(), GamePosition{c.left, c.right}) != rel.end();
}

}  // namespace

TEST_CASE("halting zero-test machine is won in three rounds") {
  auto c = compile(parse_machine("1: jzdec c0 zero 2 else 1\n2: halt\n"));
  GamePosition start{c.left_init, c.right_init};
  auto v = solve_bounded(c.net, Semantics::global_impatient(), start, 6);
  CHECK(wins(v) == 3u);
  CHECK(std::holds_alternative<Unknown>(solve_bounded(c.net, Semantics::global_impatient(), start, 2,
                                                      {.certify = false})));
}

TEST_CASE("increment loop is not won at depth 12") {
  auto c = compile(parse_machine("1: inc c0 goto 1\n2: halt\n"));
  auto v = solve_bounded(c.net, Semantics::global_impatient(), {c.left_init, c.right_init}, 12);
  REQUIRE(std::holds_alternative<Unknown>(v));
  CHECK(std::get<Unknown>(v).depth == 12);
}

TEST_CASE("one unanswerable move wins in one round") {
  auto net = parse_net("rule a dur=1 : p -> p\nrule b dur=1 : q -> q\n");
  auto v = solve_bounded(net, Semantics::global_impatient(), {M("0@p"), M("0@q")}, 3);
  CHECK(wins(v) == 1u);
  // Same action, different time.
  auto v2 = solve_bounded(parse_net("rule a dur=1 : p -> p\n"), Semantics::global_impatient(),
                          {M("0@p"), M("1@p")}, 3);
  CHECK(wins(v2) == 1u);
}

TEST_CASE("identical positions certify") {
  auto net = parse_net("rule a dur=2 : p q -> r\nrule b dur=1 : r -> ~\n");
  auto v = solve_bounded(net, Semantics::local_patient(), {M("0@p 3@q"), M("0@p 3@q")}, 4);
  REQUIRE(std::holds_alternative<Bisimilar>(v));
  CHECK(std::get<Bisimilar>(v).relation.empty());
}

TEST_CASE("resource limits are errors, not verdicts") {
  auto c = compile(parse_machine("1: inc c0 goto 1\n2: halt\n"));
  CHECK_THROWS_AS(solve_bounded(c.net, Semantics::global_impatient(), {c.left_init, c.right_init}, 12,
                                {.max_positions = 5}),
                  ResourceLimitError);
}

TEST_CASE("verdict properties on random nets") {
  gen::Rng rng(31);
  gen::NetShape shape;
  shape.places = 3;
  shape.max_rules = 4;
  shape.max_duration = 2;
  shape.allow_empty_post = true;
  int certified = 0;
  for (int n = 0; n < 120; ++n) {
    auto net = gen::random_net(rng, shape);
    auto sem = kAll[gen::uniform(rng, 0, 3)];
    GamePosition pos{gen::random_marking(rng, 3, 3, 2), gen::random_marking(rng, 3, 3, 2)};
    if (gen::uniform(rng, 0, 2) == 0) pos.right = pos.left;
    CAPTURE(render_net(net));
    CAPTURE(render_marking(pos.left));
    CAPTURE(render_marking(pos.right));
    CAPTURE(semantics_code(sem));

    std::optional<unsigned> first;
    for (unsigned k = 0; k <= 6; ++k) {
      auto v = solve_bounded(net, sem, pos, k, {.certify = false});
      if (first) {
        CHECK(wins(v) == first);
      } else if (auto w = wins(v)) {
        CHECK(*w <= k);
        first = w;
      }
    }
    if (pos.left == pos.right) CHECK_FALSE(first);

    Stamp d = gen::uniform(rng, 1, 5);
    auto id = static_cast<std::int64_t>(d);
    auto shifted = solve_bounded(net, sem, {shift(pos.left, id), shift(pos.right, id)}, 6, {.certify = false});
    CHECK(wins(shifted) == first);

    auto sym = solve_bounded(net, sem, pos, 6, {.certify = false, .symmetric_memo = true});
    CHECK(wins(sym) == first);

    auto full = solve_bounded(net, sem, pos, 6, {.certificate_budget = 2000});
    CHECK(wins(full) == first);
    if (const auto* b = std::get_if<Bisimilar>(&full)) {
      ++certified;
      CHECK(has_pair(b->relation, pos));
      CHECK(closed(net, sem, b->relation));
      CHECK(is_bisimulation(Game(net, sem), b->relation, [](const GamePosition& p) {
        auto c = canonicalize_pair(p.left, p.right);
        return GamePosition{c.left, c.right};
      }));
    }
  }
  CHECK(certified > 10);
}

TEST_CASE("decomposition spot-check") {
  gen::Rng rng(41);
  gen::NetShape shape;
  shape.places = 3;
  shape.max_rules = 3;
  shape.max_duration = 2;
  const auto li = Semantics::local_impatient();
  int checked = 0;
  for (int n = 0; n < 300 && checked < 30; ++n) {
    auto net = gen::random_net(rng, shape);
    Stamp t = gen::uniform(rng, 0, 2);
    auto a = shift(gen::random_marking(rng, 3, 3, 0), static_cast<std::int64_t>(t));
    auto b = shift(gen::random_marking(rng, 3, 3, 0), static_cast<std::int64_t>(t));
    if (a == b) continue;
    auto v = solve_bounded(net, li, {a, b}, 6, {.certificate_budget = 2000});
    if (!std::holds_alternative<Bisimilar>(v)) continue;
    ++checked;
    std::set<Stamp> cuts = stamps(a);
    for (Stamp s : stamps(b)) cuts.insert(s);
    for (Stamp cut : cuts) {
      auto hi = solve_bounded(net, li, {split_by_stamp(a, cut).above, split_by_stamp(b, cut).above}, 6,
                              {.certificate_budget = 2000});
      CHECK(std::holds_alternative<Bisimilar>(hi));
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("search strategy") {
  SUBCASE("picks the unanswerable move") {
    auto net = parse_net("rule a dur=1 : p -> p\nrule a dur=1 : q -> q\nrule b dur=1 : p -> p\n");
    SearchStrategy s(Game(net, Semantics::global_impatient()), 3, 1);
    GamePosition pos{M("0@p"), M("0@q")};
    auto mv = s.choose_move(pos);
    CHECK(mv.action == Label::intern("b"));
  }
  SUBCASE("copies on identical markings") {
    auto net = parse_net("rule a dur=1 : p -> q\nrule a dur=1 : p -> r\n");
    SearchStrategy s(Game(net, Semantics::global_impatient()), 3, 1);
    GamePosition pos{M("0@p"), M("0@p")};
    for (const auto& mv : s.solver().game().spoiler_moves(pos)) {
      auto r = s.choose_response(pos, mv);
      CHECK(r.position.left == r.position.right);
    }
  }
  SUBCASE("stuck roles and bad depth") {
    auto net = parse_net("rule a dur=1 : p -> p\n");
    CHECK_THROWS_AS(SearchStrategy(Game(net, Semantics::global_impatient()), 0), DomainError);
    SearchStrategy s(Game(net, Semantics::global_impatient()), 2);
    CHECK_THROWS_AS(s.choose_move({M("~"), M("~")}), StuckError);
    auto mv = s.solver().game().spoiler_moves({M("0@p"), M("~")}).at(0);
    CHECK_THROWS_AS(s.choose_response({M("0@p"), M("~")}, mv), StuckError);
  }
  SUBCASE("wins a halting machine within the bound") {
    auto c = compile(parse_machine("1: inc c0 goto 2\n2: jzdec c0 zero 3 else 2\n3: halt\n"));
    const unsigned bound = static_cast<unsigned>(oracle::correct_simulation_rounds(c.machine, 100));
    CHECK(bound == 5);
    Game g(c.net, Semantics::global_impatient());
    SearchStrategy spoiler(g, bound, 2);
    SearchStrategy duplicator(g, bound, 3);
    GamePosition pos{c.left_init, c.right_init};
    unsigned rounds = 0;
    bool stuck = false;
    while (rounds < bound && !stuck) {
      auto mv = spoiler.choose_move(pos);
      ++rounds;
      try {
        pos = duplicator.choose_response(pos, mv).position;
      } catch (const StuckError&) {
        stuck = true;
      }
    }
    CHECK(stuck);
    CHECK(rounds <= bound);
  }
}
