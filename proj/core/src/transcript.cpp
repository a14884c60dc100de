#include "durnet/transcript.hpp"

#include <nlohmann/json.hpp>

#include "durnet/textio.hpp"

namespace durnet {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(std::size_t lineno, const std::string& msg) {
  throw ParseError(SourceSpan{"<transcript>", lineno, 1, 2}, msg);
}

}  // namespace

TranscriptLine to_line(const HalfMove& h) {
  return TranscriptLine{h.side, h.action, h.time_label, h.rule, h.after.left, h.after.right};
}

std::string render_line(const TranscriptLine& line) {
  ordered_json j;
  j["side"] = side_name(line.side);
  j["action"] = std::string(line.action.name());
  j["time"] = line.time;
  j["rule"] = line.rule;
  j["successor_left"] = render_marking(line.successor_left);
  j["successor_right"] =
      line.successor_right ? ordered_json(render_marking(*line.successor_right)) : ordered_json(nullptr);
  return j.dump();
}

TranscriptLine parse_line(std::string_view text, std::size_t lineno) {
  ordered_json j;
  try {
    j = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(SourceSpan{"<transcript>", lineno, e.byte, e.byte + 1}, "invalid JSON");
  }
  if (!j.is_object()) fail(lineno, "expected a JSON object");
  auto str = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_string()) fail(lineno, std::string("missing string field ") + key);
    return j[key].get<std::string>();
  };
  auto num = [&](const char* key) -> std::uint64_t {
    if (!j.contains(key) || !j[key].is_number_unsigned()) {
      fail(lineno, std::string("missing non-negative integer field ") + key);
    }
    return j[key].get<std::uint64_t>();
  };
  TranscriptLine line;
  const std::string side = str("side");
  if (side == "left") {
    line.side = Side::kLeft;
  } else if (side == "right") {
    line.side = Side::kRight;
  } else {
    fail(lineno, "side must be \"left\" or \"right\"");
  }
  line.action = Label::intern(str("action"));
  line.time = num("time");
  line.rule = num("rule");
  line.successor_left = parse_marking(str("successor_left"), "<transcript>");
  if (j.contains("successor_right") && !j["successor_right"].is_null()) {
    line.successor_right = parse_marking(str("successor_right"), "<transcript>");
  }
  return line;
}

std::string render_transcript(const std::vector<HalfMove>& log) {
  std::string out;
  for (const auto& h : log) out += render_line(to_line(h)) + "\n";
  return out;
}

std::vector<TranscriptLine> parse_transcript(std::string_view text) {
  std::vector<TranscriptLine> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    out.push_back(parse_line(line, lineno));
  }
  return out;
}

std::string render_execution(const Net& net, const std::vector<FireableInstance>& path) {
  std::string out;
  for (const auto& inst : path) {
    TranscriptLine line{Side::kLeft, net.rule(inst.rule).label, inst.time_label, inst.rule,
                        inst.successor, std::nullopt};
    out += render_line(line) + "\n";
  }
  return out;
}

std::string verdict_json(const Verdict& v) {
  ordered_json j;
  if (const auto* s = std::get_if<SpoilerWins>(&v)) {
    j["verdict"] = "spoiler";
    j["rounds"] = s->rounds;
  } else if (std::holds_alternative<Bisimilar>(v)) {
    j["verdict"] = "bisimilar";
  } else {
    j["verdict"] = "unknown";
    j["depth"] = std::get<Unknown>(v).depth;
  }
  return j.dump();
}

}  // namespace durnet
