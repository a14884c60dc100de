#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "durnet/compiler.hpp"
#include "durnet/game.hpp"
#include "durnet/solver.hpp"
#include "durnet/strategies.hpp"

// Interactive bisimulation-game sessions. Requests and replies are JSON
// objects; every request yields a list of messages. The protocol is described
// in docs/protocol.md.
namespace durnet::play {

using Json = nlohmann::ordered_json;

enum class Role { kSpoiler, kDuplicator };
enum class Engine { kStrategy, kSearch, kManual };

std::optional<Role> parse_role(std::string_view s);
std::optional<Engine> parse_engine(std::string_view s);
const char* role_name(Role r);
const char* engine_name(Engine e);

struct SessionConfig {
  std::shared_ptr<const Net> net;
  std::shared_ptr<const CompiledNet> compiled;  // null for arbitrary nets
  Semantics sem = Semantics::global_impatient();
  GamePosition start;
  Role human = Role::kSpoiler;
  Engine engine = Engine::kSearch;
  unsigned depth = 8;
  std::uint64_t seed = 0;
};

// Thrown for malformed requests; reported to the client as an error message.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class Session {
 public:
  // Throws ProtocolError if the engine cannot serve this configuration.
  Session(std::string id, SessionConfig config);

  const std::string& id() const noexcept { return id_; }

  // Messages produced when the session opens (the engine may move first).
  std::vector<Json> open();
  // Handles one request. Errors are returned as messages; the session stays usable.
  std::vector<Json> handle(const Json& request);

  Json state() const;

 private:
  enum class Outcome { kNone, kSpoilerWins, kDuplicatorWins };

  bool engine_plays(Role r) const;

  void run_engine(std::vector<Json>& out);
  void finish(Outcome o, const std::string& reason, std::vector<Json>& out);

  GameMove choose_move(bool& fallback);
  Response choose_response(const GameMove& move, std::string& mode);

  Json move_json(const GameMove& m, std::size_t index) const;
  Json response_json(const Response& r, std::size_t index) const;
  Json annotations() const;

  std::vector<Json> on_move(const Json& req);
  std::vector<Json> on_response(const Json& req);
  std::vector<Json> on_undo();
  std::vector<Json> on_hint();
  std::vector<Json> on_resign();
  std::vector<Json> on_transcript() const;

  std::string id_;
  SessionConfig config_;
  Game game_;
  GameSession session_;
  std::vector<GameMove> round_moves_;
  std::optional<GameMove> pending_;
  Outcome outcome_ = Outcome::kNone;
  std::string outcome_reason_;
  std::optional<SearchStrategy> search_;
  std::optional<SpoilerStrategy> spoiler_;
  std::optional<DuplicatorStrategy> duplicator_;
};

Json error_message(const std::string& message);

struct RegisteredNet {
  std::shared_ptr<const Net> net;
  std::shared_ptr<const CompiledNet> compiled;
};

// Several sessions over a read-only registry of nets. Thread-safe; each
// session handles one request at a time. Fields missing from a "new" request
// are taken from `base_request`.
class Service {
 public:
  explicit Service(std::map<std::string, RegisteredNet> registry, Json base_request = Json::object());

  // {"type": "new", "net": <registry name>, ...}; replies end with the state.
  std::vector<Json> create(const Json& request);
  std::vector<Json> handle(const std::string& session_id, const Json& request);
  std::optional<Json> state(const std::string& session_id);

 private:
  struct Slot {
    std::mutex mutex;
    std::unique_ptr<Session> session;
  };

  std::map<std::string, RegisteredNet> registry_;
  Json base_request_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t next_id_ = 1;
};

// Fills a config from a "new" request, falling back to `defaults`.
SessionConfig config_from_request(const Json& request, const RegisteredNet& net,
                                  const SessionConfig& defaults);

// Proof strategy for compiled nets under global-time impatient semantics,
// search otherwise.
Engine default_engine(const SessionConfig& config);

}  // namespace durnet::play
