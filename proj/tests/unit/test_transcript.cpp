#include <doctest.h>

#include <nlohmann/json.hpp>

#include "durnet/compiler.hpp"
#include "durnet/transcript.hpp"
#include "durnet/textio.hpp"
#include "generators.hpp"

using namespace durnet;
using nlohmann::json;

namespace {

DurationalMarking M(std::string_view s) { return parse_marking(s); }

}  // namespace

TEST_CASE("line layout") {
  TranscriptLine line{Side::kRight, Label::intern("t0"), 7, 3, M("8@c0a 8@c0b"), M("8@c0a")};
  auto text = render_line(line);
  CHECK(text ==
        R"({"side":"right","action":"t0","time":7,"rule":3,"successor_left":"8@c0a 8@c0b","successor_right":"8@c0a"})");
  CHECK(parse_line(text) == line);

  TranscriptLine single{Side::kLeft, Label::intern("a"), 0, 0, M("~"), std::nullopt};
  auto s = render_line(single);
  CHECK(json::parse(s)["successor_right"].is_null());
  CHECK(parse_line(s) == single);
}

TEST_CASE("malformed lines") {
  CHECK_THROWS_AS(parse_line("not json"), ParseError);
  CHECK_THROWS_AS(parse_line("[1,2]"), ParseError);
  CHECK_THROWS_AS(parse_line(R"({"side":"up","action":"a","time":0,"rule":0,"successor_left":"~"})"), ParseError);
  CHECK_THROWS_AS(parse_line(R"({"side":"left","action":"a","time":-1,"rule":0,"successor_left":"~"})"),
                  ParseError);
  CHECK_THROWS_AS(parse_line(R"({"side":"left","action":"a","time":0,"rule":0,"successor_left":"1@"})"),
                  ParseError);
  CHECK_THROWS_WITH_AS(parse_line(R"({"side":"left","time":0,"rule":0,"successor_left":"~"})"),
                       doctest::Contains("action"), ParseError);
  try {
    parse_transcript("\n" R"({"side":"left","action":"a","time":0,"rule":0,"successor_left":"~"})" "\n{\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.span().line == 3);
  }
}

TEST_CASE("game logs round trip") {
  auto c = compile(parse_machine("1: inc c0 goto 2\n2: jzdec c0 zero 3 else 2\n3: halt\n"));
  Game g(c.net, Semantics::global_impatient());
  GameSession s(g, {c.left_init, c.right_init});
  gen::Rng rng(5);
  for (int i = 0; i < 12; ++i) {
    auto moves = g.spoiler_moves(s.current());
    if (moves.empty()) break;
    auto mv = moves[gen::uniform(rng, 0, moves.size() - 1)];
    auto rs = g.duplicator_responses(s.current(), mv);
    if (rs.empty()) break;
    s.apply_move(mv, rs[gen::uniform(rng, 0, rs.size() - 1)]);
  }
  REQUIRE(s.log().size() >= 2);
  auto text = render_transcript(s.log());
  // CRLF line ends and blank lines are tolerated.
  std::string crlf;
  for (char ch : text) crlf += ch == '\n' ? std::string("\r\n\r\n") : std::string(1, ch);
  for (const auto& variant : {text, crlf}) {
    auto lines = parse_transcript(variant);
    REQUIRE(lines.size() == s.log().size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& h = s.log()[i];
      CHECK(lines[i] == to_line(h));
      CHECK(lines[i].successor_right == h.after.right);
      CHECK(c.net.rule(lines[i].rule).label == lines[i].action);
    }
  }
}

TEST_CASE("executions are single sided") {
  auto net = parse_net("rule a dur=1 : p -> q\nrule b dur=2 : q -> ~\n");
  auto m = M("0@p");
  std::vector<FireableInstance> path;
  for (int i = 0; i < 2; ++i) {
    auto e = enabled(net, Semantics::global_patient(), m);
    REQUIRE(e.size() == 1);
    path.push_back(e[0]);
    m = e[0].successor;
  }
  auto lines = parse_transcript(render_execution(net, path));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].action == Label::intern("a"));
  CHECK(lines[0].successor_left == M("1@q"));
  CHECK(lines[1].time == 1);
  CHECK(lines[1].successor_left.empty());
  CHECK_FALSE(lines[1].successor_right);
}

TEST_CASE("verdict objects") {
  CHECK(verdict_json(SpoilerWins{3}) == R"({"verdict":"spoiler","rounds":3})");
  CHECK(verdict_json(Unknown{12}) == R"({"verdict":"unknown","depth":12})");
  CHECK(verdict_json(Bisimilar{}) == R"({"verdict":"bisimilar"})");
}
