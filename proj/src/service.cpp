#include "bisimgame/service.hpp"

#include <deque>
#include <random>
#include <sstream>

#include <httplib.h>

#include "bisimgame/json_io.hpp"
#include "bisimgame/query.hpp"

namespace bisimgame {

namespace {

ServiceResponse error(int status, const std::string& message) { return {status, {{"error", message}}}; }

StateId resolve_state(const Lts& lts, std::size_t offset, bool two_files, const nlohmann::json& v, bool second) {
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw std::out_of_range("state index out of range");
    auto idx = v.get<std::uint64_t>() + (two_files && second ? offset : 0);
    if (idx >= lts.num_states()) throw std::out_of_range("state index out of range");
    return static_cast<StateId>(idx);
  }
  if (!v.is_string()) throw std::invalid_argument("states must be indices or names");
  auto text = v.get<std::string>();
  if (two_files && !text.starts_with("file2:") && second) text = "file2:" + text;
  if (auto s = lts.find_state(text)) return *s;
  throw std::out_of_range("unknown state " + text);
}

Side parse_side(const std::string& s) {
  if (s == "spoiler") return Side::Spoiler;
  if (s == "duplicator") return Side::Duplicator;
  if (s == "none") return Side::None;
  throw std::invalid_argument("human_side must be spoiler, duplicator or none");
}

const char* side_text(Side s) {
  switch (s) {
    case Side::Spoiler: return "spoiler";
    case Side::Duplicator: return "duplicator";
    default: return "none";
  }
}

}  // namespace

nlohmann::json session_view(const GameSession& session) {
  const auto& game = session.game();
  const auto& a = game.arena;
  const auto cur = session.current();
  const Player viewer = session.human_side() == Side::Spoiler ? Player::Spoiler : Player::Duplicator;
  nlohmann::json j;
  j["config"] = config_to_json(*a.lts, a.configs[cur]);
  j["config"]["id"] = cur;
  j["config"]["text"] = describe(a.configs[cur], *a.lts, a.variant);
  j["variant"] = a.variant.name();
  j["human_side"] = side_text(session.human_side());
  j["human_turn"] = session.human_turn();
  j["check_count"] = session.check_count();
  j["history_length"] = session.history().size();
  auto outcome = session.outcome();
  j["terminal"] = outcome.has_value();
  j["winner"] = outcome ? nlohmann::json(to_string(outcome->winner)) : nlohmann::json(nullptr);
  j["moves"] = nlohmann::json::array();
  if (!outcome) {
    auto edges = a.edges(cur);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      auto target = config_to_json(*a.lts, a.configs[edges[k].to]);
      target["id"] = edges[k].to;
      target["text"] = describe(a.configs[edges[k].to], *a.lts, a.variant);
      j["moves"].push_back({{"index", k},
                            {"rule", to_string(edges[k].rule)},
                            {"text", describe_move(a, cur, edges[k], viewer)},
                            {"target", std::move(target)},
                            {"winning_for", to_string(game.solution.regions.winner[edges[k].to])}});
    }
  }
  std::istringstream lines(transcript(session));
  j["transcript"] = nlohmann::json::array();
  for (std::string line; std::getline(lines, line);) j["transcript"].push_back(line);
  return j;
}

std::string SessionService::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream o;
  o << std::hex << ++counter_ << "-" << rng();
  return o.str();
}

std::shared_ptr<SessionService::Record> SessionService::find(const std::string& id) {
  std::shared_lock lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

ServiceResponse SessionService::create(const nlohmann::json& body) {
  expire_idle();
  if (!body.is_object()) return error(400, "request body must be a JSON object");
  std::shared_ptr<const SolvedGame> game;
  StateId s, t;
  std::size_t offset = 0;
  Side side;
  try {
    const std::string tau = body.value("tau", std::string("tau"));
    if (!body.contains("lts") || !body["lts"].is_string()) return error(400, "missing lts text");
    auto lts = parse_aut(body["lts"].get<std::string>(), tau);
    const bool two = body.contains("lts2") && !body["lts2"].is_null();
    if (two) {
      auto u = disjoint_union_named(lts, parse_aut(body["lts2"].get<std::string>(), tau));
      offset = u.offset;
      lts = std::move(u.lts);
    }
    if (!body.contains("s") || !body.contains("t")) return error(400, "missing s or t");
    s = resolve_state(lts, offset, two, body["s"], false);
    t = resolve_state(lts, offset, two, body["t"], true);
    auto spec = parse_variant(body.value("variant", std::string("branching")));
    side = parse_side(body.value("human_side", std::string("duplicator")));
    auto arena = build_arena(spec.game(body.value("eager", false)), std::make_shared<const Lts>(std::move(lts)),
                             {{s, t}}, ArenaOptions{opt_.max_arena});
    game = solve_game(std::move(arena));
  } catch (const ArenaLimitError& e) {
    return error(413, e.what());
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
  auto now = std::chrono::steady_clock::now();
  auto rec = std::shared_ptr<Record>(new Record{{}, new_session(game, s, t, side), offset, now, now});
  std::string id;
  {
    std::unique_lock lock(mutex_);
    id = fresh_id();
    sessions_.emplace(id, rec);
  }
  std::lock_guard lock(rec->mutex);
  return {201, {{"id", id}, {"state", session_view(rec->session)}}};
}

ServiceResponse SessionService::get(const std::string& id) {
  auto rec = find(id);
  if (!rec) return error(404, "unknown session");
  std::lock_guard lock(rec->mutex);
  rec->last_used = std::chrono::steady_clock::now();
  return {200, session_view(rec->session)};
}

ServiceResponse SessionService::move(const std::string& id, const nlohmann::json& body) {
  auto rec = find(id);
  if (!rec) return error(404, "unknown session");
  std::lock_guard lock(rec->mutex);
  rec->last_used = std::chrono::steady_clock::now();
  auto& session = rec->session;
  if (!body.is_object()) return error(400, "request body must be a JSON object");
  if (session.finished()) return error(409, "the game is over");
  const bool has_index = body.contains("move_index");
  const bool is_auto = body.value("auto", false);
  if (has_index == is_auto) return error(400, "give exactly one of move_index or auto");
  try {
    if (is_auto) {
      if (session.human_turn()) return error(409, "it is the human player's turn");
      session.step();
    } else {
      if (!body["move_index"].is_number_integer()) return error(400, "move_index must be an integer");
      auto k = body["move_index"].get<std::int64_t>();
      if (!session.human_turn()) return error(409, "it is not the human player's turn");
      if (k < 0 || static_cast<std::size_t>(k) >= session.game().arena.edges(session.current()).size())
        return error(409, "illegal move index");
      session.step(static_cast<std::size_t>(k));
    }
  } catch (const SessionError& e) {
    return error(409, e.what());
  }
  return {200, session_view(session)};
}

ServiceResponse SessionService::lts(const std::string& id) {
  auto rec = find(id);
  if (!rec) return error(404, "unknown session");
  std::lock_guard lock(rec->mutex);
  rec->last_used = std::chrono::steady_clock::now();
  auto j = lts_to_json(*rec->session.game().arena.lts);
  j["offset"] = rec->offset ? nlohmann::json(rec->offset) : nlohmann::json(nullptr);
  const auto& c = rec->session.game().arena.configs[rec->session.current()];
  j["position"] = {c.s, c.t};
  return {200, j};
}

ServiceResponse SessionService::arena(const std::string& id, int radius) {
  auto rec = find(id);
  if (!rec) return error(404, "unknown session");
  if (radius < 0 || radius > 3) return error(400, "radius must lie in 0..3");
  std::lock_guard lock(rec->mutex);
  rec->last_used = std::chrono::steady_clock::now();
  const auto& game = rec->session.game();
  const auto& a = game.arena;
  ArenaView view;
  std::unordered_map<std::uint32_t, int> dist{{rec->session.current(), 0}};
  std::deque<std::uint32_t> queue{rec->session.current()};
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    view.nodes.push_back(c);
    if (dist[c] == radius) continue;
    for (const auto& e : a.edges(c)) {
      view.edges.emplace_back(c, e.rule, e.to);
      if (dist.emplace(e.to, dist[c] + 1).second) queue.push_back(e.to);
    }
  }
  view.initials = {rec->session.start()};
  auto j = arena_to_json(a, view);
  for (auto& cj : j["configs"]) cj["winner"] = to_string(game.solution.regions.winner[cj["id"].get<std::uint32_t>()]);
  j["current"] = rec->session.current();
  return {200, j};
}

ServiceResponse SessionService::remove(const std::string& id) {
  std::unique_lock lock(mutex_);
  if (sessions_.erase(id) == 0) return error(404, "unknown session");
  return {200, {{"deleted", id}}};
}

std::size_t SessionService::expire_idle() {
  const auto now = std::chrono::steady_clock::now();
  std::unique_lock lock(mutex_);
  return std::erase_if(sessions_, [&](const auto& kv) {
    std::unique_lock rec_lock(kv.second->mutex, std::try_to_lock);
    return rec_lock.owns_lock() && now - kv.second->last_used > opt_.idle_timeout;
  });
}

std::size_t SessionService::size() const {
  std::shared_lock lock(mutex_);
  return sessions_.size();
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(SessionService& service) : impl_(std::make_unique<Impl>()) {
  auto& srv = impl_->server;
  auto reply = [](httplib::Response& res, const ServiceResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto parse = [](const httplib::Request& req) {
    return nlohmann::json::parse(req.body, nullptr, false);
  };
  srv.Post("/api/session", [&, reply, parse](const httplib::Request& req, httplib::Response& res) {
    auto body = parse(req);
    reply(res, body.is_discarded() ? error(400, "malformed JSON") : service.create(body));
  });
  srv.Get(R"(/api/session/([^/]+))", [&, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.get(req.matches[1]));
  });
  srv.Delete(R"(/api/session/([^/]+))", [&, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.remove(req.matches[1]));
  });
  srv.Post(R"(/api/session/([^/]+)/move)", [&, reply, parse](const httplib::Request& req, httplib::Response& res) {
    auto body = parse(req);
    reply(res, body.is_discarded() ? error(400, "malformed JSON") : service.move(req.matches[1], body));
  });
  srv.Get(R"(/api/session/([^/]+)/lts)", [&, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.lts(req.matches[1]));
  });
  srv.Get(R"(/api/session/([^/]+)/arena)", [&, reply](const httplib::Request& req, httplib::Response& res) {
    int radius = 1;
    if (req.has_param("radius")) {
      try {
        radius = std::stoi(req.get_param_value("radius"));
      } catch (const std::exception&) {
        return reply(res, error(400, "radius must be an integer"));
      }
    }
    reply(res, service.arena(req.matches[1], radius));
  });
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }
int HttpServer::bind_any(const std::string& host) { return impl_->server.bind_to_any_port(host); }
bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace bisimgame
