#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "durnet/game.hpp"
#include "durnet/solver.hpp"

// JSON-lines transcripts: one object per half-move,
//   {"side", "action", "time", "rule", "successor_left", "successor_right"}
// with markings in the textual notation. Single-sided executions (simulation
// runs, reachability witnesses) leave successor_right null.
namespace durnet {

struct TranscriptLine {
  Side side = Side::kLeft;
  Label action;
  Stamp time = 0;
  RuleIndex rule = 0;
  DurationalMarking successor_left;
  std::optional<DurationalMarking> successor_right;

  friend bool operator==(const TranscriptLine&, const TranscriptLine&) = default;
};

TranscriptLine to_line(const HalfMove& h);
std::string render_line(const TranscriptLine& line);
// Throws ParseError; `lineno` is only used for the error span.
TranscriptLine parse_line(std::string_view text, std::size_t lineno = 1);

std::string render_transcript(const std::vector<HalfMove>& log);
std::vector<TranscriptLine> parse_transcript(std::string_view text);

// Lines of a single-sided execution starting from `source`.
std::string render_execution(const Net& net, const std::vector<FireableInstance>& path);

// {"verdict": "spoiler"|"bisimilar"|"unknown", "rounds"?, "depth"?}
std::string verdict_json(const Verdict& v);

}  // namespace durnet
