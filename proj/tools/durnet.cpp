#include <CLI11.hpp>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "durnet/compiler.hpp"
#include "durnet/reachability.hpp"
#include "durnet/solver.hpp"
#include "durnet/textio.hpp"
#include "durnet/transcript.hpp"
#include "play/session.hpp"

namespace {

using namespace durnet;
using play::Json;

constexpr int kUsage = 1;
constexpr int kParse = 2;
constexpr int kResource = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

Semantics semantics_flag(const std::string& code) {
  auto s = parse_semantics(code);
  if (!s) throw UsageError("--sem must be one of gp, gi, lp, li");
  return *s;
}

Net load_net(const std::string& path) { return parse_net(read_file(path), path); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

Json instance_json(const Net& net, const FireableInstance& inst) {
  return Json{{"rule", inst.rule},
              {"action", std::string(net.rule(inst.rule).label.name())},
              {"time", inst.time_label},
              {"submarking", render_marking(inst.submarking)},
              {"successor", render_marking(inst.successor)}};
}

struct Options {
  std::string sem = "gi";
  std::string net;
  std::string marking;
  std::string left;
  std::string right;
  std::string replay;
  std::string source;
  std::string target;
  std::string untimed_target;
  std::string machine;
  std::string output;
  std::string sidecar;
  std::string serve;
  std::string role = "spoiler";
  std::string engine;
  unsigned depth = 8;
  std::uint64_t seed = 0;
  std::uint64_t steps = 20;
  std::uint64_t fuel = 1'000'000;
  std::size_t budget = 1'000'000;
  std::size_t max_positions = 1'000'000;
  std::size_t certificate_budget = 100'000;
  bool symmetric = false;
  bool prune_dead = false;
};

int cmd_enabled(const Options& o) {
  Net net = load_net(o.net);
  auto m = parse_marking(o.marking, "--marking");
  Json out = Json::array();
  for (const auto& inst : enabled(net, semantics_flag(o.sem), m)) out.push_back(instance_json(net, inst));
  std::cout << out.dump() << "\n";
  return 0;
}

// Replays a game transcript (two lines per round) from the given start.
GamePosition replay_game(const Net& net, Semantics sem, GamePosition start,
                         const std::vector<TranscriptLine>& lines) {
  GameSession session(Game(net, sem), std::move(start));
  if (lines.size() % 2 != 0) throw ValidationError("game transcript has an unfinished round");
  for (std::size_t i = 0; i < lines.size(); i += 2) {
    const auto& a = lines[i];
    const auto& b = lines[i + 1];
    const auto& game = session.game();
    std::optional<GameMove> move;
    for (auto& m : game.spoiler_moves(session.current())) {
      auto mid = game.after_move(session.current(), m);
      if (m.side == a.side && m.instance.rule == a.rule && m.time_label == a.time &&
          mid.left == a.successor_left && a.successor_right && mid.right == *a.successor_right) {
        move = m;
        break;
      }
    }
    if (!move) throw ValidationError("transcript line " + std::to_string(i + 1) + " is not a legal move");
    std::optional<Response> response;
    for (auto& r : game.duplicator_responses(session.current(), *move)) {
      if (b.side == opposite(a.side) && r.instance.rule == b.rule && r.instance.time_label == b.time &&
          r.position.left == b.successor_left && b.successor_right && r.position.right == *b.successor_right) {
        response = r;
        break;
      }
    }
    if (!response) {
      throw ValidationError("transcript line " + std::to_string(i + 2) + " is not a legal response");
    }
    session.apply_move(*move, *response);
  }
  return session.current();
}

int cmd_simulate(const Options& o) {
  Net net = load_net(o.net);
  const Semantics sem = semantics_flag(o.sem);
  if (!o.replay.empty()) {
    auto lines = parse_transcript(read_file(o.replay));
    const bool two_sided = !lines.empty() && lines.front().successor_right.has_value();
    if (two_sided) {
      GamePosition start{parse_marking(o.left, "--left"), parse_marking(o.right, "--right")};
      auto end = replay_game(net, sem, std::move(start), lines);
      std::cout << Json{{"final", {{"left", render_marking(end.left)}, {"right", render_marking(end.right)}}},
                        {"rounds", lines.size() / 2}}
                       .dump()
                << "\n";
      return 0;
    }
    DurationalMarking m = parse_marking(o.marking, "--marking");
    for (std::size_t i = 0; i < lines.size(); ++i) {
      const auto& l = lines[i];
      auto options = enabled(net, sem, m);
      auto it = std::find_if(options.begin(), options.end(), [&](const FireableInstance& inst) {
        return inst.rule == l.rule && inst.time_label == l.time && inst.successor == l.successor_left;
      });
      if (it == options.end()) {
        throw ValidationError("transcript line " + std::to_string(i + 1) + " is not enabled");
      }
      m = it->successor;
    }
    std::cout << Json{{"final", render_marking(m)}, {"steps", lines.size()}}.dump() << "\n";
    return 0;
  }
  DurationalMarking m = parse_marking(o.marking, "--marking");
  std::mt19937_64 rng(o.seed);
  std::vector<FireableInstance> path;
  for (std::uint64_t k = 0; k < o.steps; ++k) {
    auto options = enabled(net, sem, m);
    if (options.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    path.push_back(options[pick(rng)]);
    m = path.back().successor;
  }
  std::cout << render_execution(net, path);
  return 0;
}

int cmd_check(const Options& o) {
  Net net = load_net(o.net);
  GamePosition pos{parse_marking(o.left, "--left"), parse_marking(o.right, "--right")};
  SolverOptions so;
  so.max_positions = o.max_positions;
  so.certificate_budget = o.certificate_budget;
  so.symmetric_memo = o.symmetric;
  so.prune_dead_tokens = o.prune_dead;
  std::cout << verdict_json(solve_bounded(net, semantics_flag(o.sem), pos, o.depth, so)) << "\n";
  return 0;
}

int cmd_compile(const Options& o) {
  CompiledNet c = compile(parse_machine(read_file(o.machine), o.machine));
  const std::string net_text = render_net(c.net);
  if (o.output.empty() || o.output == "-") {
    std::cout << net_text;
  } else {
    write_file(o.output, net_text);
  }
  std::string sidecar = o.sidecar;
  if (sidecar.empty() && !o.output.empty() && o.output != "-") {
    sidecar = std::filesystem::path(o.output).replace_extension(".json").string();
  }
  if (!sidecar.empty()) write_file(sidecar, sidecar_json(c));
  return 0;
}

int cmd_run_machine(const Options& o) {
  auto m = parse_machine(read_file(o.machine), o.machine);
  auto r = run_machine(m, o.fuel);
  std::cout << Json{{"halted", r.halted},
                    {"steps", r.steps},
                    {"pc", r.config.pc},
                    {"c0", r.config.c0},
                    {"c1", r.config.c1}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_reach(const Options& o) {
  Net net = load_net(o.net);
  const Semantics sem = semantics_flag(o.sem);
  auto source = parse_marking(o.source, "--source");
  if (o.target.empty() == o.untimed_target.empty()) {
    throw UsageError("give exactly one of --target and --untimed-target");
  }
  auto report_found = [&](const ReachFound& f) {
    std::cout << Json{{"result", "found"}, {"length", f.path.size()}}.dump() << "\n"
              << render_execution(net, f.path);
  };
  if (!o.target.empty()) {
    ReachOptions ro;
    ro.max_markings = o.budget;
    auto r = reach_durational(net, sem, source, parse_marking(o.target, "--target"), ro);
    if (auto* f = std::get_if<ReachFound>(&r)) {
      report_found(*f);
    } else {
      std::cout << Json{{"result", "not_reachable"}, {"definitive", std::get<NotReachable>(r).definitive}}.dump()
                << "\n";
    }
    return 0;
  }
  auto r = reach_untimed_bounded(net, sem, source, parse_multiset(o.untimed_target, "--untimed-target"),
                                 o.budget);
  if (auto* f = std::get_if<ReachFound>(&r)) {
    report_found(*f);
  } else {
    std::cout << Json{{"result", "not_within_budget"}, {"explored", std::get<NotWithinBudget>(r).explored}}.dump()
              << "\n";
  }
  return 0;
}

play::RegisteredNet registered_net(const Options& o) {
  play::RegisteredNet reg;
  if (!o.machine.empty()) {
    auto c = std::make_shared<CompiledNet>(compile(parse_machine(read_file(o.machine), o.machine)));
    reg.net = std::make_shared<const Net>(c->net);
    reg.compiled = std::move(c);
    return reg;
  }
  if (o.net.empty()) throw UsageError("play needs --net or --machine");
  auto net = std::make_shared<const Net>(load_net(o.net));
  std::string sidecar = o.sidecar;
  if (sidecar.empty()) {
    auto guess = std::filesystem::path(o.net).replace_extension(".json");
    if (std::filesystem::exists(guess)) sidecar = guess.string();
  }
  if (!sidecar.empty()) {
    reg.compiled = std::make_shared<const CompiledNet>(load_compiled(*net, read_file(sidecar)));
  }
  reg.net = std::move(net);
  return reg;
}

Json base_request(const Options& o) {
  Json r{{"type", "new"}, {"net", "default"}, {"sem", o.sem}, {"as", o.role}, {"depth", o.depth}, {"seed", o.seed}};
  if (!o.engine.empty()) r["engine"] = o.engine;
  if (!o.left.empty()) r["left"] = o.left;
  if (!o.right.empty()) r["right"] = o.right;
  return r;
}

int serve(play::Service& service, const std::string& where) {
  auto colon = where.rfind(':');
  if (colon == std::string::npos) throw UsageError("--serve expects HOST:PORT");
  const std::string host = where.substr(0, colon);
  const int port = std::stoi(where.substr(colon + 1));

  httplib::Server server;
  auto reply = [](httplib::Response& res, const Json& body) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(body.dump(), "application/json");
  };
  auto parse_body = [](const httplib::Request& req) -> std::optional<Json> {
    auto j = Json::parse(req.body, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
  };
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  });
  server.Post("/sessions", [&](const httplib::Request& req, httplib::Response& res) {
    auto body = req.body.empty() ? std::optional<Json>(Json::object()) : parse_body(req);
    if (!body) {
      res.status = 400;
      return reply(res, Json::array({play::error_message("body is not valid JSON")}));
    }
    reply(res, Json(service.create(*body)));
  });
  server.Post(R"(/sessions/([A-Za-z0-9]+))", [&](const httplib::Request& req, httplib::Response& res) {
    auto body = parse_body(req);
    if (!body) {
      res.status = 400;
      return reply(res, Json::array({play::error_message("body is not valid JSON")}));
    }
    reply(res, Json(service.handle(req.matches[1], *body)));
  });
  server.Get(R"(/sessions/([A-Za-z0-9]+))", [&](const httplib::Request& req, httplib::Response& res) {
    auto s = service.state(req.matches[1]);
    if (!s) {
      res.status = 404;
      return reply(res, play::error_message("no such session"));
    }
    reply(res, *s);
  });
  std::cerr << "serving on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) throw Error("cannot listen on " + where);
  return 0;
}

int cmd_play(const Options& o) {
  std::map<std::string, play::RegisteredNet> registry{{"default", registered_net(o)}};
  play::Service service(std::move(registry), base_request(o));
  if (!o.serve.empty()) return serve(service, o.serve);

  auto emit = [](const std::vector<Json>& messages) {
    for (const auto& m : messages) std::cout << m.dump() << "\n";
    std::cout.flush();
  };
  auto opened = service.create(Json::object());
  emit(opened);
  if (opened.empty() || opened.back().value("type", "") != "state") return kUsage;
  const std::string id = opened.back()["session"].get<std::string>();
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto req = Json::parse(line, nullptr, false);
    if (req.is_discarded()) {
      emit({play::error_message("request is not valid JSON")});
      continue;
    }
    emit(service.handle(id, req));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Durational Petri nets: simulation, bisimulation games, counter-machine reductions"};
  app.require_subcommand(1);
  Options o;
  int (*action)(const Options&) = nullptr;

  auto sem = [&](CLI::App* c) {
    c->add_option("--sem", o.sem, "Semantics: gp, gi, lp or li")->check(CLI::IsMember({"gp", "gi", "lp", "li"}));
  };

  auto* enabled_cmd = app.add_subcommand("enabled", "List fireable instances of a marking");
  sem(enabled_cmd);
  enabled_cmd->add_option("--net", o.net, "Net file")->required();
  enabled_cmd->add_option("--marking", o.marking, "Marking, e.g. \"0@p 1@q*2\"")->required();
  enabled_cmd->callback([&] { action = cmd_enabled; });

  auto* simulate_cmd = app.add_subcommand("simulate", "Random execution, or replay of a transcript");
  sem(simulate_cmd);
  simulate_cmd->add_option("--net", o.net, "Net file")->required();
  simulate_cmd->add_option("--marking", o.marking, "Initial marking");
  simulate_cmd->add_option("--steps", o.steps, "Maximum number of firings");
  simulate_cmd->add_option("--seed", o.seed, "Random seed");
  simulate_cmd->add_option("--replay", o.replay, "Transcript (JSON lines) to replay");
  simulate_cmd->add_option("--left", o.left, "Left marking for a game transcript");
  simulate_cmd->add_option("--right", o.right, "Right marking for a game transcript");
  simulate_cmd->callback([&] { action = cmd_simulate; });

  auto* check_cmd = app.add_subcommand("check", "Bounded bisimulation game");
  sem(check_cmd);
  check_cmd->add_option("--net", o.net, "Net file")->required();
  check_cmd->add_option("--left", o.left, "Left marking")->required();
  check_cmd->add_option("--right", o.right, "Right marking")->required();
  check_cmd->add_option("--depth", o.depth, "Rounds to search");
  check_cmd->add_option("--max-positions", o.max_positions, "Memo limit (exit 3 when exceeded)");
  check_cmd->add_option("--certificate-budget", o.certificate_budget, "Positions explored for a certificate");
  check_cmd->add_flag("--symmetric", o.symmetric, "Memoize (l, r) and (r, l) together");
  check_cmd->add_flag("--prune-dead", o.prune_dead, "Strip dead tokens (gi only)");
  check_cmd->callback([&] { action = cmd_check; });

  auto* compile_cmd = app.add_subcommand("compile-minsky", "Compile a counter machine into a net");
  compile_cmd->add_option("machine", o.machine, "Machine file")->required();
  compile_cmd->add_option("-o,--output", o.output, "Net output file (stdout if omitted)");
  compile_cmd->add_option("--sidecar", o.sidecar, "Sidecar JSON path (default: output with .json)");
  compile_cmd->callback([&] { action = cmd_compile; });

  auto* run_cmd = app.add_subcommand("run-machine", "Run a counter machine");
  run_cmd->add_option("machine", o.machine, "Machine file")->required();
  run_cmd->add_option("--fuel", o.fuel, "Maximum number of steps");
  run_cmd->callback([&] { action = cmd_run_machine; });

  auto* reach_cmd = app.add_subcommand("reach", "Reachability of a durational or untimed target");
  sem(reach_cmd);
  reach_cmd->add_option("--net", o.net, "Net file")->required();
  reach_cmd->add_option("--source", o.source, "Source marking")->required();
  reach_cmd->add_option("--target", o.target, "Durational target marking");
  reach_cmd->add_option("--untimed-target", o.untimed_target, "Untimed target, e.g. \"p q*2\"");
  reach_cmd->add_option("--budget", o.budget, "Maximum distinct markings to explore");
  reach_cmd->callback([&] { action = cmd_reach; });

  auto* play_cmd = app.add_subcommand("play", "Interactive game over JSON lines or HTTP");
  sem(play_cmd);
  play_cmd->add_option("--net", o.net, "Net file (a sidecar next to it is picked up)");
  play_cmd->add_option("--sidecar", o.sidecar, "Compiler sidecar for --net");
  play_cmd->add_option("--machine", o.machine, "Counter machine to compile and play on");
  play_cmd->add_option("--left", o.left, "Left marking");
  play_cmd->add_option("--right", o.right, "Right marking");
  play_cmd->add_option("--as", o.role, "Human role")->check(CLI::IsMember({"spoiler", "duplicator"}));
  play_cmd->add_option("--engine", o.engine, "Opponent")->check(CLI::IsMember({"strategy", "search", "manual"}));
  play_cmd->add_option("--depth", o.depth, "Search depth");
  play_cmd->add_option("--seed", o.seed, "Random seed");
  play_cmd->add_option("--serve", o.serve, "Serve HTTP on HOST:PORT instead of stdio");
  play_cmd->callback([&] { action = cmd_play; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  try {
    return action(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  } catch (const ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
