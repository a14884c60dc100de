#include "durnet/textio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace durnet {

namespace {

enum class Kind { kWord, kAt, kStar, kColon, kArrow, kTilde, kEquals, kEnd };

struct Lexeme {
  Kind kind = Kind::kEnd;
  std::string_view text;
  std::size_t col = 0;  // 1-based
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
}

// Tokenizes one physical line (without its terminator).
class LineLexer {
 public:
  LineLexer(std::string_view line, std::string_view file, std::size_t lineno)
      : line_(line), file_(file), lineno_(lineno) {
    lex();
  }

  const Lexeme& peek() const { return lexemes_[pos_]; }
  Lexeme next() {
    Lexeme l = lexemes_[pos_];
    if (pos_ + 1 < lexemes_.size()) ++pos_;
    return l;
  }
  bool at_end() const { return peek().kind == Kind::kEnd; }
  bool blank() const { return lexemes_.size() == 1; }

  [[noreturn]] void fail(const Lexeme& at, const std::string& msg) const {
    std::size_t b = at.col == 0 ? line_.size() + 1 : at.col;
    std::size_t e = b + std::max<std::size_t>(at.text.size(), 1);
    throw ParseError(SourceSpan{std::string(file_), lineno_, b, e}, msg);
  }

  Lexeme expect(Kind k, const char* what) {
    if (peek().kind != k) fail(peek(), std::string("expected ") + what);
    return next();
  }

  Lexeme expect_word(std::string_view w) {
    if (peek().kind != Kind::kWord || peek().text != w) {
      fail(peek(), "expected '" + std::string(w) + "'");
    }
    return next();
  }

  std::uint64_t number(const Lexeme& l, const char* what) const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(l.text.data(), l.text.data() + l.text.size(), v);
    if (l.kind != Kind::kWord || ec != std::errc() || ptr != l.text.data() + l.text.size()) {
      if (ec == std::errc::result_out_of_range) fail(l, std::string(what) + " out of range");
      fail(l, std::string("expected ") + what);
    }
    return v;
  }

 private:
  void lex() {
    std::size_t i = 0;
    while (i < line_.size()) {
      char c = line_[i];
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (c == '#') break;
      std::size_t col = i + 1;
      if (c == '-' && i + 1 < line_.size() && line_[i + 1] == '>') {
        lexemes_.push_back({Kind::kArrow, line_.substr(i, 2), col});
        i += 2;
        continue;
      }
      if (c == '-') {
        Lexeme bad{Kind::kEnd, line_.substr(i, 1), col};
        fail(bad, "negative numbers are not allowed");
      }
      Kind k = Kind::kEnd;
      switch (c) {
        case '@': k = Kind::kAt; break;
        case '*': k = Kind::kStar; break;
        case ':': k = Kind::kColon; break;
        case '~': k = Kind::kTilde; break;
        case '=': k = Kind::kEquals; break;
        default: break;
      }
      if (k != Kind::kEnd) {
        lexemes_.push_back({k, line_.substr(i, 1), col});
        ++i;
        continue;
      }
      if (word_char(c)) {
        std::size_t j = i;
        while (j < line_.size() && word_char(line_[j])) ++j;
        lexemes_.push_back({Kind::kWord, line_.substr(i, j - i), col});
        i = j;
        continue;
      }
      Lexeme bad{Kind::kEnd, line_.substr(i, 1), col};
      fail(bad, std::string("unexpected character '") + c + "'");
    }
    lexemes_.push_back({Kind::kEnd, {}, 0});
  }

  std::string_view line_;
  std::string_view file_;
  std::size_t lineno_;
  std::vector<Lexeme> lexemes_;
  std::size_t pos_ = 0;
};

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t lineno = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(line, lineno);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
    ++lineno;
  }
}

Count parse_multiplicity(LineLexer& lx) {
  if (lx.peek().kind != Kind::kStar) return 1;
  lx.next();
  auto l = lx.next();
  Count k = lx.number(l, "count");
  if (k == 0) lx.fail(l, "count must be positive");
  return k;
}

// Parses items up to a terminator kind (kEnd or kArrow).
PlaceMultiset parse_items(LineLexer& lx, Kind stop) {
  if (lx.peek().kind == Kind::kTilde) {
    lx.next();
    return {};
  }
  std::vector<PlaceMultiset::Entry> items;
  while (lx.peek().kind != stop) {
    auto w = lx.expect(Kind::kWord, "place name");
    Count k = parse_multiplicity(lx);
    items.emplace_back(Place::intern(w.text), k);
  }
  return PlaceMultiset(std::move(items));
}

DurationalMarking parse_tokens(LineLexer& lx) {
  std::vector<DurationalMarking::Entry> toks;
  while (!lx.at_end()) {
    if (lx.peek().kind == Kind::kTilde) {
      lx.next();
      continue;
    }
    auto s = lx.next();
    Stamp stamp = lx.number(s, "time-stamp");
    lx.expect(Kind::kAt, "'@'");
    auto w = lx.expect(Kind::kWord, "place name");
    Count k = parse_multiplicity(lx);
    toks.emplace_back(Token{Place::intern(w.text), stamp}, k);
  }
  return DurationalMarking(std::move(toks));
}

std::string render_count(Count k) { return k == 1 ? std::string() : "*" + std::to_string(k); }

}  // namespace

DurationalMarking parse_marking(std::string_view text, std::string_view file) {
  std::vector<DurationalMarking::Entry> all;
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    LineLexer lx(line, file, lineno);
    auto part = parse_tokens(lx);
    all.insert(all.end(), part.entries().begin(), part.entries().end());
  });
  return DurationalMarking(std::move(all));
}

std::string render_marking(const DurationalMarking& m) {
  if (m.empty()) return "~";
  std::string out;
  for (const auto& [tok, c] : canonical_entries(m)) {
    if (!out.empty()) out += ' ';
    out += std::to_string(tok.stamp) + "@" + tok.place.name() + render_count(c);
  }
  return out;
}

PlaceMultiset parse_multiset(std::string_view text, std::string_view file) {
  std::vector<PlaceMultiset::Entry> all;
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    LineLexer lx(line, file, lineno);
    while (!lx.at_end()) {
      auto part = parse_items(lx, Kind::kEnd);
      all.insert(all.end(), part.entries().begin(), part.entries().end());
    }
  });
  return PlaceMultiset(std::move(all));
}

std::string render_multiset(const PlaceMultiset& m) {
  if (m.empty()) return "~";
  std::string out;
  for (const auto& [p, c] : canonical_entries(m)) {
    if (!out.empty()) out += ' ';
    out += p.name() + render_count(c);
  }
  return out;
}

Net parse_net(std::string_view text, std::string_view file) {
  std::vector<TransitionRule> rules;
  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    LineLexer lx(line, file, lineno);
    if (lx.blank()) return;
    lx.expect_word("rule");
    auto label = lx.expect(Kind::kWord, "label");
    lx.expect_word("dur");
    lx.expect(Kind::kEquals, "'='");
    auto dl = lx.next();
    Stamp dur = lx.number(dl, "duration");
    std::string rule_id = "rule " + std::to_string(rules.size()) + " (" + std::string(label.text) + ")";
    if (dur == 0) lx.fail(dl, rule_id + ": zero duration");
    lx.expect(Kind::kColon, "':'");
    auto pre_at = lx.peek();
    auto pre = parse_items(lx, Kind::kArrow);
    if (pre.empty()) lx.fail(pre_at, rule_id + ": empty pre-set");
    lx.expect(Kind::kArrow, "'->'");
    if (lx.at_end()) lx.fail(lx.peek(), rule_id + ": missing post-set (use '~' for empty)");
    auto post = parse_items(lx, Kind::kEnd);
    if (!lx.at_end()) lx.fail(lx.peek(), "trailing input");
    rules.push_back(TransitionRule{Label::intern(label.text), std::move(pre), std::move(post), dur});
  });
  return Net(std::move(rules));
}

std::string render_rule(const TransitionRule& r) {
  return "rule " + r.label.name() + " dur=" + std::to_string(r.duration) + " : " +
         render_multiset(r.pre) + " -> " + render_multiset(r.post);
}

std::string render_net(const Net& net) {
  std::string out;
  for (const auto& r : net.rules()) out += render_rule(r) + "\n";
  return out;
}

MinskyMachine parse_machine(std::string_view text, std::string_view file) {
  std::map<std::size_t, Instruction> by_index;
  std::map<std::size_t, Lexeme> where;
  std::map<std::size_t, std::size_t> line_of;

  auto parse_counter = [](LineLexer& lx) {
    auto l = lx.expect(Kind::kWord, "counter");
    if (l.text != "c0" && l.text != "c1") lx.fail(l, "counter must be c0 or c1");
    return l.text == "c0" ? 0 : 1;
  };

  struct Pending {
    std::size_t index;
    std::size_t lineno;
    std::vector<std::pair<std::size_t, Lexeme>> targets;
  };
  std::vector<Pending> pending;

  for_each_line(text, [&](std::string_view line, std::size_t lineno) {
    LineLexer lx(line, file, lineno);
    if (lx.blank()) return;
    auto il = lx.next();
    std::size_t index = lx.number(il, "instruction number");
    if (index == 0) lx.fail(il, "instruction numbers start at 1");
    if (by_index.count(index)) {
      lx.fail(il, "duplicate instruction number " + std::to_string(index) + " (first on line " +
                      std::to_string(line_of[index]) + ")");
    }
    lx.expect(Kind::kColon, "':'");
    auto op = lx.expect(Kind::kWord, "instruction");
    Pending p{index, lineno, {}};
    if (op.text == "inc") {
      int b = parse_counter(lx);
      lx.expect_word("goto");
      auto t = lx.next();
      auto j = lx.number(t, "target");
      p.targets.emplace_back(j, t);
      by_index.emplace(index, Inc{b, j});
    } else if (op.text == "jzdec") {
      int b = parse_counter(lx);
      lx.expect_word("zero");
      auto tk = lx.next();
      auto k = lx.number(tk, "target");
      lx.expect_word("else");
      auto tj = lx.next();
      auto j = lx.number(tj, "target");
      p.targets.emplace_back(k, tk);
      p.targets.emplace_back(j, tj);
      by_index.emplace(index, JzDec{b, k, j});
    } else if (op.text == "halt") {
      by_index.emplace(index, Halt{});
    } else {
      lx.fail(op, "unknown instruction '" + std::string(op.text) + "'");
    }
    if (!lx.at_end()) lx.fail(lx.peek(), "trailing input");
    line_of[index] = lineno;
    where.emplace(index, il);
    pending.push_back(std::move(p));
  });

  auto span_at = [&](std::size_t lineno, const Lexeme& l) {
    return SourceSpan{std::string(file), lineno, l.col, l.col + std::max<std::size_t>(l.text.size(), 1)};
  };
  if (by_index.empty()) {
    throw ParseError(SourceSpan{std::string(file), 1, 1, 2}, "machine has no instructions");
  }
  const std::size_t n = by_index.size();
  std::size_t expect = 1;
  for (const auto& [i, ins] : by_index) {
    if (i != expect) {
      throw ParseError(span_at(line_of[i], where.at(i)),
                       "missing instruction " + std::to_string(expect));
    }
    ++expect;
  }
  for (const auto& p : pending) {
    for (const auto& [target, lex] : p.targets) {
      if (target < 1 || target > n) {
        throw ParseError(span_at(p.lineno, lex), "target " + std::to_string(target) +
                                                     " out of range 1.." + std::to_string(n));
      }
    }
    const bool is_halt = std::holds_alternative<Halt>(by_index.at(p.index));
    if (is_halt && p.index != n) {
      throw ParseError(span_at(p.lineno, where.at(p.index)), "halt must be the last instruction");
    }
    if (!is_halt && p.index == n) {
      throw ParseError(span_at(p.lineno, where.at(p.index)), "last instruction must be halt");
    }
  }
  std::vector<Instruction> program;
  program.reserve(n);
  for (auto& [i, ins] : by_index) program.push_back(ins);
  return MinskyMachine(std::move(program));
}

std::string render_machine(const MinskyMachine& m) {
  std::ostringstream out;
  for (std::size_t i = 1; i <= m.size(); ++i) {
    out << i << ": ";
    const auto& ins = m.at(i);
    if (const auto* inc = std::get_if<Inc>(&ins)) {
      out << "inc c" << inc->counter << " goto " << inc->target;
    } else if (const auto* jz = std::get_if<JzDec>(&ins)) {
      out << "jzdec c" << jz->counter << " zero " << jz->zero_target << " else " << jz->dec_target;
    } else {
      out << "halt";
    }
    out << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace durnet
