#include "session.hpp"

#include <algorithm>

#include "durnet/textio.hpp"
#include "durnet/transcript.hpp"

namespace durnet::play {

namespace {

Json marking_json(const DurationalMarking& m) { return render_marking(m); }

bool is_count(const Json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

Json position_json(const GamePosition& p) {
  return Json{{"left", marking_json(p.left)}, {"right", marking_json(p.right)}};
}

std::size_t request_index(const Json& req) {
  if (!req.contains("index") || !is_count(req["index"])) {
    throw ProtocolError("request needs a non-negative integer \"index\"");
  }
  return req["index"].get<std::size_t>();
}

}  // namespace

std::optional<Role> parse_role(std::string_view s) {
  if (s == "spoiler") return Role::kSpoiler;
  if (s == "duplicator") return Role::kDuplicator;
  return std::nullopt;
}

std::optional<Engine> parse_engine(std::string_view s) {
  if (s == "strategy") return Engine::kStrategy;
  if (s == "search") return Engine::kSearch;
  if (s == "manual") return Engine::kManual;
  return std::nullopt;
}

const char* role_name(Role r) { return r == Role::kSpoiler ? "spoiler" : "duplicator"; }

const char* engine_name(Engine e) {
  switch (e) {
    case Engine::kStrategy: return "strategy";
    case Engine::kSearch: return "search";
    case Engine::kManual: return "manual";
  }
  return "?";
}

Engine default_engine(const SessionConfig& config) {
  return config.compiled && config.sem.is_global_impatient() ? Engine::kStrategy : Engine::kSearch;
}

Json error_message(const std::string& message) {
  return Json{{"type", "error"}, {"message", message}};
}

Session::Session(std::string id, SessionConfig config)
    : id_(std::move(id)),
      config_(std::move(config)),
      game_(config_.net, config_.sem),
      session_(game_, config_.start) {
  if (config_.depth == 0) throw ProtocolError("depth must be at least 1");
  if (config_.engine == Engine::kStrategy) {
    if (!config_.compiled) throw ProtocolError("the strategy engine needs a compiled counter-machine net");
    if (!config_.sem.is_global_impatient()) {
      throw ProtocolError("the strategy engine plays global-time impatient semantics only");
    }
    spoiler_.emplace(config_.compiled);
    duplicator_.emplace(config_.compiled, config_.depth);
  }
  search_.emplace(game_, config_.depth, config_.seed);
}

bool Session::engine_plays(Role r) const {
  return config_.engine != Engine::kManual && r != config_.human;
}

std::vector<Json> Session::open() {
  std::vector<Json> out;
  run_engine(out);
  out.push_back(state());
  return out;
}

void Session::finish(Outcome o, const std::string& reason, std::vector<Json>& out) {
  outcome_ = o;
  outcome_reason_ = reason;
  out.push_back(Json{{"type", "result"},
                     {"result", o == Outcome::kSpoilerWins ? "spoiler_wins" : "duplicator_wins"},
                     {"reason", reason},
                     {"rounds", session_.rounds()}});
}

GameMove Session::choose_move(bool& fallback) {
  fallback = false;
  if (spoiler_) {
    try {
      return spoiler_->next_move(session_.current());
    } catch (const OffScriptError&) {
      fallback = true;
    }
  }
  return search_->choose_move(session_.current());
}

Response Session::choose_response(const GameMove& move, std::string& mode) {
  if (duplicator_) {
    try {
      auto choice = duplicator_->respond(session_.current(), move);
      mode = mode_name(choice.mode);
      return choice.response;
    } catch (const ImpossibleResponseError&) {
      // fall through to search
    } catch (const OffScriptError&) {
    }
    mode = mode_name(DuplicatorMode::kFallback);
  } else {
    mode = "search";
  }
  return search_->choose_response(session_.current(), move);
}

void Session::run_engine(std::vector<Json>& out) {
  while (outcome_ == Outcome::kNone) {
    const GamePosition& pos = session_.current();
    if (!pending_) {
      auto moves = game_.spoiler_moves(pos);
      if (moves.empty()) {
        finish(Outcome::kDuplicatorWins, "spoiler_stuck", out);
        return;
      }
      if (!engine_plays(Role::kSpoiler)) return;
      bool fallback = false;
      GameMove m = choose_move(fallback);
      auto idx = static_cast<std::size_t>(std::find(moves.begin(), moves.end(), m) - moves.begin());
      out.push_back(Json{{"type", "move"}, {"move", move_json(m, idx)}, {"fallback", fallback}});
      pending_ = std::move(m);
    } else {
      auto responses = game_.duplicator_responses(pos, *pending_);
      if (responses.empty()) {
        finish(Outcome::kSpoilerWins, "duplicator_stuck", out);
        return;
      }
      if (!engine_plays(Role::kDuplicator)) return;
      std::string mode;
      Response r = choose_response(*pending_, mode);
      auto idx = static_cast<std::size_t>(std::find(responses.begin(), responses.end(), r) -
                                          responses.begin());
      out.push_back(Json{{"type", "response"}, {"response", response_json(r, idx)}, {"mode", mode}});
      session_.apply_move(*pending_, r);
      round_moves_.push_back(*pending_);
      pending_.reset();
    }
  }
}

Json Session::move_json(const GameMove& m, std::size_t index) const {
  Json j{{"index", index},
         {"side", side_name(m.side)},
         {"action", std::string(m.action.name())},
         {"time", m.time_label},
         {"rule", m.instance.rule}};
  if (config_.compiled) j["rule_name"] = config_.compiled->rule_info[m.instance.rule].name();
  j["submarking"] = marking_json(m.instance.submarking);
  j["successor"] = marking_json(m.instance.successor);
  return j;
}

Json Session::response_json(const Response& r, std::size_t index) const {
  const auto& rule = config_.net->rule(r.instance.rule);
  Json j{{"index", index},
         {"action", std::string(rule.label.name())},
         {"time", r.instance.time_label},
         {"rule", r.instance.rule}};
  if (config_.compiled) j["rule_name"] = config_.compiled->rule_info[r.instance.rule].name();
  j["submarking"] = marking_json(r.instance.submarking);
  j["successor"] = marking_json(r.instance.successor);
  j["position"] = position_json(r.position);
  return j;
}

Json Session::annotations() const {
  const Net& net = *config_.net;
  const Semantics sem = config_.sem;
  const GamePosition& pos = session_.current();
  auto side = [&](const DurationalMarking& m) {
    Json j;
    auto t = min_time_label(net, sem, m);
    j["min_time"] = t ? Json(*t) : Json(nullptr);
    j["equimarking"] = t && is_equimarking(net, sem, m, *t) ? Json(*t) : Json(nullptr);
    j["dead"] = marking_json(dead_tokens(net, sem, m));
    if (config_.compiled) {
      try {
        auto v = extract_state(m);
        j["view"] = Json{{"pc", v.pc},         {"primed", v.primed}, {"side", std::string(1, v.side)},
                         {"stamp", v.stamp},   {"c0", v.c0},         {"c1", v.c1},
                         {"residue", marking_json(v.residue)}};
      } catch (const ShapeError&) {
        j["view"] = nullptr;
      }
    }
    return j;
  };
  std::string pair = "distinct";
  if (pos.left == pos.right) {
    pair = "equal";
  } else if (live_tokens(net, sem, pos.left) == live_tokens(net, sem, pos.right)) {
    pair = "equal_mod_dead";
  } else if (config_.compiled && is_conforming(pos.left, pos.right) == Conformance::kConforming) {
    pair = "conforming";
  }
  return Json{{"pair", pair}, {"left", side(pos.left)}, {"right", side(pos.right)}};
}

Json Session::state() const {
  const GamePosition& pos = session_.current();
  Json j{{"type", "state"},
         {"session", id_},
         {"round", session_.rounds()},
         {"semantics", semantics_code(config_.sem)},
         {"human", role_name(config_.human)},
         {"engine", engine_name(config_.engine)},
         {"position", position_json(pos)}};
  const bool over = outcome_ != Outcome::kNone;
  j["to_move"] = over ? Json(nullptr) : Json(pending_ ? "duplicator" : "spoiler");
  j["pending"] = pending_ ? move_json(*pending_, 0) : Json(nullptr);
  Json moves = Json::array();
  Json responses = Json::array();
  if (!over && !pending_) {
    auto ms = game_.spoiler_moves(pos);
    for (std::size_t i = 0; i < ms.size(); ++i) moves.push_back(move_json(ms[i], i));
  }
  if (!over && pending_) {
    auto mv = game_.spoiler_moves(pos);
    auto idx = std::find(mv.begin(), mv.end(), *pending_) - mv.begin();
    j["pending"]["index"] = idx;
    auto rs = game_.duplicator_responses(pos, *pending_);
    for (std::size_t i = 0; i < rs.size(); ++i) responses.push_back(response_json(rs[i], i));
  }
  j["moves"] = std::move(moves);
  j["responses"] = std::move(responses);
  if (config_.sem.is_global_impatient()) j["annotations"] = annotations();
  if (over) {
    j["result"] = outcome_ == Outcome::kSpoilerWins ? "spoiler_wins" : "duplicator_wins";
    j["reason"] = outcome_reason_;
  } else {
    j["result"] = nullptr;
  }
  return j;
}

std::vector<Json> Session::on_move(const Json& req) {
  if (outcome_ != Outcome::kNone) throw ProtocolError("the game is over");
  if (pending_) throw ProtocolError("waiting for Duplicator's response");
  if (engine_plays(Role::kSpoiler)) throw ProtocolError("the engine plays Spoiler");
  auto moves = game_.spoiler_moves(session_.current());
  const std::size_t i = request_index(req);
  if (i >= moves.size()) throw ProtocolError("move index " + std::to_string(i) + " is not listed");
  pending_ = moves[i];
  std::vector<Json> out;
  run_engine(out);
  out.push_back(state());
  return out;
}

std::vector<Json> Session::on_response(const Json& req) {
  if (outcome_ != Outcome::kNone) throw ProtocolError("the game is over");
  if (!pending_) throw ProtocolError("no Spoiler move to respond to");
  if (engine_plays(Role::kDuplicator)) throw ProtocolError("the engine plays Duplicator");
  auto responses = game_.duplicator_responses(session_.current(), *pending_);
  const std::size_t i = request_index(req);
  if (i >= responses.size()) throw ProtocolError("response index " + std::to_string(i) + " is not listed");
  session_.apply_move(*pending_, responses[i]);
  round_moves_.push_back(*pending_);
  pending_.reset();
  std::vector<Json> out;
  run_engine(out);
  out.push_back(state());
  return out;
}

std::vector<Json> Session::on_undo() {
  const bool engine_spoiler = engine_plays(Role::kSpoiler);
  if (pending_ && !engine_spoiler) {
    pending_.reset();
  } else {
    if (round_moves_.empty()) throw ProtocolError("nothing to undo");
    session_.undo();
    // Back to the moment the undone round's Spoiler move awaited an answer,
    // unless the human made that move and wants to choose again.
    if (engine_spoiler || config_.engine == Engine::kManual) {
      pending_ = round_moves_.back();
    } else {
      pending_.reset();
    }
    round_moves_.pop_back();
  }
  outcome_ = Outcome::kNone;
  outcome_reason_.clear();
  return {state()};
}

std::vector<Json> Session::on_hint() {
  if (outcome_ != Outcome::kNone) throw ProtocolError("the game is over");
  const auto& pos = session_.current();
  if (pending_) {
    auto responses = game_.duplicator_responses(pos, *pending_);
    if (responses.empty()) throw ProtocolError("Duplicator has no response");
    std::string mode;
    Response r = choose_response(*pending_, mode);
    auto idx = std::find(responses.begin(), responses.end(), r) - responses.begin();
    return {Json{{"type", "hint"}, {"response", response_json(r, idx)}, {"mode", mode}}};
  }
  auto moves = game_.spoiler_moves(pos);
  if (moves.empty()) throw ProtocolError("Spoiler has no move");
  bool fallback = false;
  GameMove m = choose_move(fallback);
  auto idx = std::find(moves.begin(), moves.end(), m) - moves.begin();
  return {Json{{"type", "hint"}, {"move", move_json(m, idx)}, {"fallback", fallback}}};
}

std::vector<Json> Session::on_resign() {
  if (outcome_ != Outcome::kNone) throw ProtocolError("the game is over");
  Role resigning = config_.human;
  if (config_.engine == Engine::kManual) resigning = pending_ ? Role::kDuplicator : Role::kSpoiler;
  std::vector<Json> out;
  finish(resigning == Role::kSpoiler ? Outcome::kDuplicatorWins : Outcome::kSpoilerWins,
         std::string(role_name(resigning)) + "_resigned", out);
  out.push_back(state());
  return out;
}

std::vector<Json> Session::on_transcript() const {
  Json lines = Json::array();
  for (const auto& h : session_.log()) lines.push_back(Json::parse(render_line(to_line(h))));
  return {Json{{"type", "transcript"}, {"session", id_}, {"lines", std::move(lines)}}};
}

std::vector<Json> Session::handle(const Json& request) {
  try {
    if (!request.is_object() || !request.contains("type") || !request["type"].is_string()) {
      throw ProtocolError("request must be an object with a string \"type\"");
    }
    const std::string type = request["type"].get<std::string>();
    if (type == "state") return {state()};
    if (type == "move") return on_move(request);
    if (type == "response") return on_response(request);
    if (type == "undo") return on_undo();
    if (type == "hint") return on_hint();
    if (type == "resign") return on_resign();
    if (type == "transcript") return on_transcript();
    throw ProtocolError("unknown request type \"" + type + "\"");
  } catch (const ResourceLimitError& e) {
    return {error_message(std::string("resource limit: ") + e.what())};
  } catch (const Error& e) {
    return {error_message(e.what())};
  }
}

SessionConfig config_from_request(const Json& request, const RegisteredNet& net,
                                  const SessionConfig& defaults) {
  SessionConfig cfg = defaults;
  cfg.net = net.net;
  cfg.compiled = net.compiled;
  auto str = [&](const char* key) -> std::optional<std::string> {
    if (!request.contains(key)) return std::nullopt;
    if (!request[key].is_string()) throw ProtocolError(std::string("\"") + key + "\" must be a string");
    return request[key].get<std::string>();
  };
  auto num = [&](const char* key) -> std::optional<std::uint64_t> {
    if (!request.contains(key)) return std::nullopt;
    if (!is_count(request[key])) {
      throw ProtocolError(std::string("\"") + key + "\" must be a non-negative integer");
    }
    return request[key].get<std::uint64_t>();
  };
  if (auto s = str("sem")) {
    auto sem = parse_semantics(*s);
    if (!sem) throw ProtocolError("unknown semantics \"" + *s + "\"");
    cfg.sem = *sem;
  }
  if (net.compiled) cfg.start = GamePosition{net.compiled->left_init, net.compiled->right_init};
  if (auto s = str("left")) cfg.start.left = parse_marking(*s, "<left>");
  if (auto s = str("right")) cfg.start.right = parse_marking(*s, "<right>");
  if (auto s = str("as")) {
    auto r = parse_role(*s);
    if (!r) throw ProtocolError("\"as\" must be spoiler or duplicator");
    cfg.human = *r;
  }
  if (auto s = str("engine")) {
    auto e = parse_engine(*s);
    if (!e) throw ProtocolError("\"engine\" must be strategy, search or manual");
    cfg.engine = *e;
  } else if (cfg.engine == Engine::kStrategy) {
    cfg.engine = default_engine(cfg);
  }
  if (auto d = num("depth")) cfg.depth = static_cast<unsigned>(*d);
  if (auto s = num("seed")) cfg.seed = *s;
  return cfg;
}

Service::Service(std::map<std::string, RegisteredNet> registry, Json base_request)
    : registry_(std::move(registry)), base_request_(std::move(base_request)) {}

std::vector<Json> Service::create(const Json& overrides) {
  try {
    if (!overrides.is_object()) throw ProtocolError("request must be a JSON object");
    Json request = base_request_;
    for (const auto& [key, value] : overrides.items()) request[key] = value;
    const std::string name = request.contains("net") && request["net"].is_string()
                                 ? request["net"].get<std::string>()
                                 : std::string("default");
    auto it = registry_.find(name);
    if (it == registry_.end()) throw ProtocolError("no net named \"" + name + "\"");
    SessionConfig defaults;
    defaults.engine = Engine::kStrategy;  // resolved by default_engine below
    SessionConfig cfg = config_from_request(request, it->second, defaults);
    std::string id;
    {
      std::lock_guard lock(mutex_);
      id = "s" + std::to_string(next_id_++);
    }
    auto slot = std::make_shared<Slot>();
    slot->session = std::make_unique<Session>(id, std::move(cfg));
    std::vector<Json> out;
    {
      std::lock_guard lock(slot->mutex);
      out = slot->session->open();
    }
    std::lock_guard lock(mutex_);
    sessions_.emplace(id, std::move(slot));
    return out;
  } catch (const Error& e) {
    return {error_message(e.what())};
  }
}

std::vector<Json> Service::handle(const std::string& session_id, const Json& request) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return {error_message("no session \"" + session_id + "\"")};
    slot = it->second;
  }
  std::lock_guard lock(slot->mutex);
  return slot->session->handle(request);
}

std::optional<Json> Service::state(const std::string& session_id) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(session_id);
    if (it == sessions_.end()) return std::nullopt;
    slot = it->second;
  }
  std::lock_guard lock(slot->mutex);
  return slot->session->state();
}

}  // namespace durnet::play
