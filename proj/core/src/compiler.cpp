#include "durnet/compiler.hpp"

#include <charconv>
#include <nlohmann/json.hpp>

#include "durnet/textio.hpp"

namespace durnet {

namespace {

using ordered_json = nlohmann::ordered_json;

Label label_for(RuleKind k, int counter) {
  switch (k) {
    case RuleKind::kI: return Label::intern("i");
    case RuleKind::kD: return Label::intern("d");
    case RuleKind::kZ: return Label::intern("z");
    case RuleKind::kZI:
    case RuleKind::kZII:
    case RuleKind::kZIII: return Label::intern("zb");
    case RuleKind::kO: return Label::intern("w");
    default: return Label::intern(counter == 0 ? "t0" : "t1");
  }
}

char other_side(char s) { return s == 'p' ? 'q' : 'p'; }

Place ctrl(char side, bool primed, std::size_t i) { return control_place({side, primed, i}); }

PlaceMultiset places(std::initializer_list<Place> ps) {
  std::vector<PlaceMultiset::Entry> e;
  for (Place p : ps) e.emplace_back(p, 1);
  return PlaceMultiset(std::move(e));
}

}  // namespace

const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::kI: return "I";
    case RuleKind::kD: return "D";
    case RuleKind::kZ: return "Z";
    case RuleKind::kZI: return "Z_I";
    case RuleKind::kZII: return "Z_II";
    case RuleKind::kZIII: return "Z_III";
    case RuleKind::kO: return "O";
    case RuleKind::kTI: return "T_I";
    case RuleKind::kTII: return "T_II";
    case RuleKind::kTIII: return "T_III";
  }
  return "?";
}

std::string RuleInfo::name() const {
  std::string s = rule_kind_name(kind);
  s += '@';
  if (instruction == 0) return s + std::to_string(counter);
  s += std::to_string(instruction);
  if (side) s += side;
  return s;
}

std::optional<RuleIndex> CompiledNet::find_rule(RuleKind kind, std::size_t instruction, char side,
                                                int counter) const {
  for (RuleIndex r = 0; r < rule_info.size(); ++r) {
    const auto& info = rule_info[r];
    if (info.kind != kind) continue;
    if (info.instruction == 0) {
      if (info.counter == counter) return r;
    } else if (info.instruction == instruction && (info.side == 0 || info.side == side)) {
      return r;
    }
  }
  return std::nullopt;
}

Place control_place(const ControlPlace& c) {
  std::string name(c.primed ? 2 : 1, c.side);
  return Place::intern(name + std::to_string(c.instruction));
}

Place counter_place(int counter, bool second) {
  return Place::intern("c" + std::to_string(counter) + (second ? "b" : "a"));
}

Place zero_place(int counter, bool second) {
  return Place::intern("z" + std::to_string(counter) + (second ? "b" : "a"));
}

std::optional<ControlPlace> parse_control(Place p) {
  std::string_view n = p.name();
  if (n.empty() || (n[0] != 'p' && n[0] != 'q')) return std::nullopt;
  ControlPlace c{n[0], false, 0};
  std::size_t k = 1;
  if (n.size() > 1 && n[1] == n[0]) {
    c.primed = true;
    k = 2;
  }
  if (k >= n.size() || n[k] == '0') return std::nullopt;
  auto [ptr, ec] = std::from_chars(n.data() + k, n.data() + n.size(), c.instruction);
  if (ec != std::errc() || ptr != n.data() + n.size()) return std::nullopt;
  return c;
}

CompiledNet compile(const MinskyMachine& m) {
  std::vector<TransitionRule> rules;
  std::vector<RuleInfo> info;
  auto emit = [&](RuleKind kind, std::size_t i, char side, int b, PlaceMultiset pre,
                  PlaceMultiset post) {
    rules.push_back(TransitionRule{label_for(kind, b), std::move(pre), std::move(post), 1});
    info.push_back(RuleInfo{kind, i, side, b});
  };

  for (std::size_t i = 1; i <= m.size(); ++i) {
    const auto& ins = m.at(i);
    if (const auto* inc = std::get_if<Inc>(&ins)) {
      const int b = inc->counter;
      for (char s : {'p', 'q'}) {
        emit(RuleKind::kI, i, s, b, places({ctrl(s, false, i)}),
             places({ctrl(s, false, inc->target), counter_place(b, false), counter_place(b, true)}));
      }
    } else if (const auto* jz = std::get_if<JzDec>(&ins)) {
      const int b = jz->counter;
      const Place b1 = counter_place(b, false), b2 = counter_place(b, true);
      const Place z1 = zero_place(b, false), z2 = zero_place(b, true);
      const std::size_t j = jz->dec_target, k = jz->zero_target;
      for (char s : {'p', 'q'}) {
        emit(RuleKind::kD, i, s, b, places({ctrl(s, false, i), b1, b2}), places({ctrl(s, false, j)}));
      }
      for (char s : {'p', 'q'}) {
        emit(RuleKind::kZ, i, s, b, places({ctrl(s, false, i)}), places({ctrl(s, true, i), z1, z2}));
      }
      for (char s : {'p', 'q'}) {
        emit(RuleKind::kZI, i, s, b, places({ctrl(s, true, i), z1, z2}), places({ctrl(s, false, k)}));
      }
      for (char s : {'p', 'q'}) {
        emit(RuleKind::kZII, i, s, b, places({ctrl(s, true, i), b2, z1}), places({ctrl(s, false, k)}));
      }
      for (char s : {'p', 'q'}) {
        emit(RuleKind::kZIII, i, s, b, places({ctrl(s, true, i), b2, z2}),
             places({ctrl(other_side(s), false, k)}));
      }
    } else {
      emit(RuleKind::kO, i, 'p', -1, places({ctrl('p', false, i)}), PlaceMultiset{});
    }
  }
  for (int b : {0, 1}) {
    const Place b1 = counter_place(b, false), b2 = counter_place(b, true);
    const Place z1 = zero_place(b, false), z2 = zero_place(b, true);
    emit(RuleKind::kTI, 0, 0, b, places({b1, b2}), places({b1, b2}));
    emit(RuleKind::kTII, 0, 0, b, places({b1, z2}), places({b1, b2}));
    emit(RuleKind::kTIII, 0, 0, b, places({b1, z1}), places({b1, b2}));
  }

  CompiledNet c{m, Net(std::move(rules)), DurationalMarking::singleton({ctrl('p', false, 1), 0}),
                DurationalMarking::singleton({ctrl('q', false, 1), 0}), std::move(info), {}};
  c.mirror.resize(c.rule_info.size(), kNoMirror);
  for (RuleIndex r = 0; r < c.rule_info.size(); ++r) {
    const auto& ri = c.rule_info[r];
    if (ri.instruction == 0) {
      c.mirror[r] = r;
    } else if (ri.kind != RuleKind::kO) {
      c.mirror[r] = *c.find_rule(ri.kind, ri.instruction, other_side(ri.side));
    }
  }
  return c;
}

std::string sidecar_json(const CompiledNet& c) {
  ordered_json places = ordered_json::object();
  for (std::size_t i = 1; i <= c.machine.size(); ++i) {
    places["p_" + std::to_string(i)] = control_place({'p', false, i}).name();
    places["q_" + std::to_string(i)] = control_place({'q', false, i}).name();
    if (std::holds_alternative<JzDec>(c.machine.at(i))) {
      places["p'_" + std::to_string(i)] = control_place({'p', true, i}).name();
      places["q'_" + std::to_string(i)] = control_place({'q', true, i}).name();
    }
  }
  for (int b : {0, 1}) {
    const std::string s = std::to_string(b);
    places[s + "'"] = counter_place(b, false).name();
    places[s + "''"] = counter_place(b, true).name();
    places["Z'_" + s] = zero_place(b, false).name();
    places["Z''_" + s] = zero_place(b, true).name();
  }
  ordered_json labels = {{"i", "i"}, {"d", "d"},   {"z", "z"}, {"z̄", "zb"},
                         {"τ" "0", "t0"}, {"τ" "1", "t1"}, {"ω", "w"}};
  ordered_json rules = ordered_json::array();
  for (RuleIndex r = 0; r < c.rule_info.size(); ++r) {
    const auto& ri = c.rule_info[r];
    ordered_json j;
    j["index"] = r;
    j["name"] = ri.name();
    j["kind"] = rule_kind_name(ri.kind);
    j["instruction"] = ri.instruction == 0 ? ordered_json(nullptr) : ordered_json(ri.instruction);
    j["side"] = ri.side ? ordered_json(std::string(1, ri.side)) : ordered_json(nullptr);
    j["counter"] = ri.counter < 0 ? ordered_json(nullptr) : ordered_json(ri.counter);
    rules.push_back(std::move(j));
  }
  ordered_json out;
  out["machine"] = render_machine(c.machine);
  out["left_init"] = render_marking(c.left_init);
  out["right_init"] = render_marking(c.right_init);
  out["places"] = std::move(places);
  out["labels"] = std::move(labels);
  out["rules"] = std::move(rules);
  return out.dump(2) + "\n";
}

CompiledNet load_compiled(const Net& net, std::string_view sidecar) {
  ordered_json j;
  try {
    j = ordered_json::parse(sidecar.begin(), sidecar.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(SourceSpan{"", 1, e.byte, e.byte + 1}, "sidecar is not valid JSON");
  }
  if (!j.is_object() || !j.contains("machine") || !j["machine"].is_string()) {
    throw ParseError(SourceSpan{"", 1, 1, 2}, "sidecar lacks a \"machine\" string");
  }
  CompiledNet c = compile(parse_machine(j["machine"].get<std::string>(), "<sidecar machine>"));
  if (!(c.net == net)) throw ValidationError("net does not match the machine in its sidecar");
  return c;
}

DurationalMarking swap_sides(const DurationalMarking& m) {
  std::vector<DurationalMarking::Entry> out;
  out.reserve(m.distinct());
  for (const auto& [tok, n] : m.entries()) {
    Token t = tok;
    if (auto c = parse_control(tok.place)) {
      c->side = other_side(c->side);
      t.place = control_place(*c);
    }
    out.emplace_back(t, n);
  }
  return DurationalMarking(std::move(out));
}

MachineView extract_state(const DurationalMarking& m) {
  MachineView v;
  Count controls = 0;
  for (const auto& [tok, n] : m.entries()) {
    if (auto c = parse_control(tok.place)) {
      controls += n;
      v.pc = c->instruction;
      v.primed = c->primed;
      v.side = c->side;
      v.stamp = tok.stamp;
    }
  }
  if (controls != 1) {
    throw ShapeError("expected exactly one control token, found " + std::to_string(controls));
  }
  std::vector<DurationalMarking::Entry> taken{{Token{control_place({v.side, v.primed, v.pc}), v.stamp}, 1}};
  for (int b : {0, 1}) {
    const Place first = counter_place(b, false), second = counter_place(b, true);
    Count na = 0, nb = 0;
    for (const auto& [tok, n] : m.entries()) {
      if (tok.place == first) na += n;
      if (tok.place == second) nb += n;
    }
    const Count x = std::min(na, nb);
    (b == 0 ? v.c0 : v.c1) = x;
    for (Place p : {first, second}) {
      Count need = x;
      const auto& es = m.entries();
      for (auto it = es.rbegin(); it != es.rend() && need > 0; ++it) {
        if (it->first.place != p) continue;
        Count k = std::min(need, it->second);
        taken.emplace_back(it->first, k);
        need -= k;
      }
    }
  }
  v.residue = subtract(m, DurationalMarking(std::move(taken)));
  return v;
}

Conformance is_conforming(const DurationalMarking& left, const DurationalMarking& right) {
  if (left == right) return Conformance::kEqual;
  Count controls = 0;
  for (const auto& [tok, n] : left.entries()) {
    if (parse_control(tok.place)) controls += n;
  }
  if (controls != 1) return Conformance::kNone;
  return swap_sides(left) == right ? Conformance::kConforming : Conformance::kNone;
}

}  // namespace durnet
