#include "durnet/strategies.hpp"

#include <algorithm>

namespace durnet {

namespace {

struct Control {
  ControlPlace place;
  Stamp stamp = 0;
};

// The unique control token of a marking, if there is exactly one.
std::optional<Control> control_of(const DurationalMarking& m) {
  std::optional<Control> found;
  for (const auto& [tok, n] : m.entries()) {
    if (auto c = parse_control(tok.place)) {
      if (found || n != 1) return std::nullopt;
      found = Control{*c, tok.stamp};
    }
  }
  return found;
}

// Tokens of counter b and its zero-test places carrying stamp s.
struct Counts {
  Count a = 0, b = 0, za = 0, zb = 0;
  friend bool operator==(const Counts&, const Counts&) = default;
};

Counts counts_at(const DurationalMarking& m, int b, Stamp s) {
  return Counts{m.count({counter_place(b, false), s}), m.count({counter_place(b, true), s}),
                m.count({zero_place(b, false), s}), m.count({zero_place(b, true), s})};
}

DurationalMarking without_counter_at(const DurationalMarking& m, int b, Stamp s) {
  std::vector<DurationalMarking::Entry> out;
  const Place fam[] = {counter_place(b, false), counter_place(b, true), zero_place(b, false),
                       zero_place(b, true)};
  for (const auto& e : m.entries()) {
    if (e.first.stamp == s && std::find(std::begin(fam), std::end(fam), e.first.place) != std::end(fam)) {
      continue;
    }
    out.push_back(e);
  }
  return DurationalMarking(std::move(out));
}

}  // namespace

const char* mode_name(DuplicatorMode m) {
  switch (m) {
    case DuplicatorMode::kCopy: return "copy";
    case DuplicatorMode::kMirror: return "mirror";
    case DuplicatorMode::kCheat: return "cheat";
    case DuplicatorMode::kFallback: return "fallback";
  }
  return "?";
}

SpoilerStrategy::SpoilerStrategy(std::shared_ptr<const CompiledNet> compiled)
    : compiled_(std::move(compiled)), game_(compiled_->net, Semantics::global_impatient()) {}

GameMove SpoilerStrategy::next_move(const GamePosition& pos) const {
  if (is_conforming(pos.left, pos.right) != Conformance::kConforming) {
    throw OffScriptError("position is not conforming");
  }
  const Net& net = compiled_->net;
  const auto moves = enabled(net, Semantics::global_impatient(), pos.left);
  auto ctrl = control_of(pos.left);
  if (moves.empty() || !ctrl) throw OffScriptError("no honest move at this position");
  const Stamp s = moves.front().time_label;

  auto pick = [&](std::optional<RuleIndex> r) -> std::optional<GameMove> {
    if (!r) return std::nullopt;
    for (const auto& inst : moves) {
      if (inst.rule == *r) return game_.make_move(Side::kLeft, inst);
    }
    return std::nullopt;
  };

  std::optional<GameMove> move;
  const auto& c = ctrl->place;
  if (ctrl->stamp != s) {
    move = pick(compiled_->find_rule(RuleKind::kTI, 0, 0, 0));
    if (!move) move = pick(compiled_->find_rule(RuleKind::kTI, 0, 0, 1));
  } else if (c.primed) {
    move = pick(compiled_->find_rule(RuleKind::kZI, c.instruction, c.side));
  } else {
    const auto& ins = compiled_->machine.at(c.instruction);
    if (std::holds_alternative<Inc>(ins)) {
      move = pick(compiled_->find_rule(RuleKind::kI, c.instruction, c.side));
    } else if (std::holds_alternative<JzDec>(ins)) {
      move = pick(compiled_->find_rule(RuleKind::kD, c.instruction, c.side));
      if (!move) move = pick(compiled_->find_rule(RuleKind::kZ, c.instruction, c.side));
    } else {
      move = pick(compiled_->find_rule(RuleKind::kO, c.instruction, c.side));
    }
  }
  if (!move) throw OffScriptError("the honest move is not enabled");
  return *move;
}

DuplicatorStrategy::DuplicatorStrategy(std::shared_ptr<const CompiledNet> compiled,
                                       std::optional<unsigned> fallback_depth)
    : compiled_(std::move(compiled)), game_(compiled_->net, Semantics::global_impatient()) {
  if (fallback_depth) fallback_.emplace(game_, *fallback_depth);
}

DuplicatorChoice DuplicatorStrategy::respond(const GamePosition& pos, const GameMove& move) {
  const auto responses = game_.duplicator_responses(pos, move);
  if (responses.empty()) throw StuckError("Duplicator has no response");

  const Net& net = compiled_->net;
  const Semantics gi = Semantics::global_impatient();
  const Side dup = opposite(move.side);
  const DurationalMarking& mover_m = pos.at(move.side);
  const DurationalMarking& dup_m = pos.at(dup);
  const RuleInfo& info = compiled_->rule_info[move.instance.rule];

  auto answer = [&](std::optional<RuleIndex> rule, DuplicatorMode mode) -> DuplicatorChoice {
    if (rule) {
      for (const auto& r : responses) {
        if (r.instance.rule == *rule) {
          last_mode_ = mode;
          return {r, mode};
        }
      }
    }
    throw ImpossibleResponseError(std::string(mode_name(mode)) + " mode: prescribed answer to " +
                                  info.name() + " is not enabled");
  };

  if (live_tokens(net, gi, mover_m) == live_tokens(net, gi, dup_m)) {
    return answer(move.instance.rule, DuplicatorMode::kCopy);
  }

  const Stamp s = move.time_label;
  const auto mc = control_of(mover_m);
  const auto dc = control_of(dup_m);
  const bool mover_primed_now = mc && mc->place.primed && mc->stamp == s;
  const bool dup_primed_now = dc && dc->place.primed && dc->stamp == s;

  auto rule_at_dup = [&](RuleKind k) {
    return compiled_->find_rule(k, dc->place.instruction, dc->place.side);
  };
  auto global = [&](RuleKind k, int b) { return compiled_->find_rule(k, 0, 0, b); };

  const Conformance conf = is_conforming(mover_m, dup_m);
  if (conf == Conformance::kConforming) {
    if (mover_primed_now) {
      const auto* jz = std::get_if<JzDec>(&compiled_->machine.at(mc->place.instruction));
      const int b = jz ? jz->counter : -1;
      const Counts k = b < 0 ? Counts{} : counts_at(mover_m, b, s);
      if (b >= 0 && k.za == 1 && k.zb == 1 && k.a == k.b && k.a >= 1) {
        // (dagger): a zero test fired although counter b holds k.a pairs.
        const bool own = info.counter == b;
        switch (info.kind) {
          case RuleKind::kZI:
          case RuleKind::kZII: return answer(rule_at_dup(RuleKind::kZIII), DuplicatorMode::kCheat);
          case RuleKind::kZIII: return answer(rule_at_dup(RuleKind::kZII), DuplicatorMode::kCheat);
          case RuleKind::kTI:
            if (own && k.a == 1) return answer(global(RuleKind::kTIII, b), DuplicatorMode::kCheat);
            return answer(move.instance.rule, DuplicatorMode::kCheat);
          case RuleKind::kTII:
            if (own) return answer(global(RuleKind::kTIII, b), DuplicatorMode::kCheat);
            break;
          case RuleKind::kTIII:
            if (own) return answer(global(RuleKind::kTII, b), DuplicatorMode::kCheat);
            break;
          default: break;
        }
      }
    }
    const RuleIndex m = compiled_->mirror[move.instance.rule];
    return answer(m == kNoMirror ? std::nullopt : std::optional<RuleIndex>(m), DuplicatorMode::kMirror);
  }

  if (mover_primed_now && dup_primed_now && mc->place.instruction == dc->place.instruction &&
      mc->place.side != dc->place.side) {
    const auto* jz = std::get_if<JzDec>(&compiled_->machine.at(mc->place.instruction));
    if (jz) {
      const int b = jz->counter;
      const Counts km = counts_at(mover_m, b, s);
      const Counts kd = counts_at(dup_m, b, s);
      const bool rest_conforms = is_conforming(without_counter_at(mover_m, b, s),
                                               without_counter_at(dup_m, b, s)) ==
                                 Conformance::kConforming;
      const bool own = info.counter == b;
      if (rest_conforms) {
        const Counts full{0, 0, 1, 1}, half{0, 1, 0, 1};
        if ((km == full && kd == half) || (km == half && kd == full)) {
          if (info.kind == RuleKind::kZI) return answer(rule_at_dup(RuleKind::kZIII), DuplicatorMode::kCheat);
          if (info.kind == RuleKind::kZIII) return answer(rule_at_dup(RuleKind::kZI), DuplicatorMode::kCheat);
          if (!own) return answer(move.instance.rule, DuplicatorMode::kCheat);
        }
        const bool mover_za = km.za >= 1 && km.zb == 0 && kd.za == 0 && kd.zb == km.za;
        const bool mover_zb = km.zb >= 1 && km.za == 0 && kd.zb == 0 && kd.za == km.zb;
        if ((mover_za || mover_zb) && km.a == kd.a && km.b == kd.b) {
          switch (info.kind) {
            case RuleKind::kZII: return answer(rule_at_dup(RuleKind::kZIII), DuplicatorMode::kCheat);
            case RuleKind::kZIII: return answer(rule_at_dup(RuleKind::kZII), DuplicatorMode::kCheat);
            case RuleKind::kTII:
              if (own) return answer(global(RuleKind::kTIII, b), DuplicatorMode::kCheat);
              break;
            case RuleKind::kTIII:
              if (own) return answer(global(RuleKind::kTII, b), DuplicatorMode::kCheat);
              break;
            case RuleKind::kTI: return answer(move.instance.rule, DuplicatorMode::kCheat);
            default: break;
          }
        }
      }
    }
  }

  if (!mover_primed_now && !dup_primed_now && mc && dc) {
    // Completing a large step after a cheat: every tau answer keeps the
    // stamp-s tokens in step, the identical rule is preferred.
    for (const auto& r : responses) {
      if (r.instance.rule == move.instance.rule) {
        last_mode_ = DuplicatorMode::kCheat;
        return {r, DuplicatorMode::kCheat};
      }
    }
    last_mode_ = DuplicatorMode::kCheat;
    return {responses.front(), DuplicatorMode::kCheat};
  }

  if (!fallback_) throw OffScriptError("position is outside the Duplicator strategy's domain");
  last_mode_ = DuplicatorMode::kFallback;
  return {fallback_->choose_response(pos, move), DuplicatorMode::kFallback};
}

}  // namespace durnet
