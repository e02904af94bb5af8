#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "bisimgame/diagnostics.hpp"
#include "bisimgame/json_io.hpp"
#include "bisimgame/query.hpp"
#include "bisimgame/service.hpp"

namespace bisimgame::cli {

namespace {

enum Exit { kRelated = 0, kUnrelated = 1, kError = 2, kDisagree = 3 };

struct Globals {
  std::string tau = "tau";
  std::string variant = "branching";
  std::string method = "game";
  std::string format = "text";
  std::size_t max_arena = default_arena_cap();
  bool eager = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Lts load(const std::string& path, const Globals& g) {
  try {
    return parse_aut(read_file(path), g.tau);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

// One or two LTS files joined into a single system.
struct Input {
  std::shared_ptr<const Lts> lts;
  bool two = false;
  std::size_t offset = 0;

  // In two-file mode s defaults to the first file and t to the second;
  // "file1:" / "file2:" prefixes pick explicitly.
  StateId resolve(std::string text, bool second_default) const {
    bool second = two && second_default;
    if (two && text.starts_with("file1:")) text = text.substr(6), second = false;
    else if (two && text.starts_with("file2:")) text = text.substr(6), second = true;
    if (second) {
      auto s = lts->find_state("file2:" + text);
      if (!s) throw UsageError("no state " + text + " in the second file");
      return *s;
    }
    auto s = lts->find_state(text);
    if (!s || (two && *s >= offset)) throw UsageError("no state " + text + (two ? " in the first file" : ""));
    return *s;
  }
};

Input load_input(const std::vector<std::string>& files, const Globals& g) {
  Input in;
  if (files.size() == 1) {
    in.lts = std::make_shared<const Lts>(load(files[0], g));
    return in;
  }
  auto u = disjoint_union_named(load(files[0], g), load(files[1], g));
  in.lts = std::make_shared<const Lts>(std::move(u.lts));
  in.two = true;
  in.offset = u.offset;
  return in;
}

// "<file> [<file2>] <s> <t>"
struct PairArgs {
  Input input;
  StateId s, t;
};

PairArgs load_pair(const std::vector<std::string>& args, const Globals& g) {
  if (args.size() != 3 && args.size() != 4) throw UsageError("expected <file> [<file2>] <s> <t>");
  std::vector<std::string> files(args.begin(), args.end() - 2);
  PairArgs p{load_input(files, g), 0, 0};
  p.s = p.input.resolve(args[args.size() - 2], false);
  p.t = p.input.resolve(args[args.size() - 1], true);
  return p;
}

std::shared_ptr<const SolvedGame> solve_pair(const PairArgs& p, const VariantSpec& spec, const Globals& g) {
  return solve_game(build_arena(spec.game(g.eager), p.input.lts, {{p.s, p.t}}, ArenaOptions{g.max_arena}));
}

bool game_related(const SolvedGame& game, StateId s, StateId t) {
  return game.solution.regions.duplicator_wins(*game.arena.find_initial(s, t));
}

int cmd_compare(const std::vector<std::string>& args, const Globals& g, std::ostream& out) {
  auto p = load_pair(args, g);
  auto spec = parse_variant(g.variant);
  std::optional<bool> by_game, by_oracle;
  if (g.method == "game" || g.method == "both") by_game = game_related(*solve_pair(p, spec, g), p.s, p.t);
  if (g.method == "oracle" || g.method == "both") by_oracle = oracle_relation(*p.input.lts, spec).contains(p.s, p.t);
  const bool related = by_game ? *by_game : *by_oracle;
  const bool disagree = by_game && by_oracle && *by_game != *by_oracle;
  const auto& lts = *p.input.lts;
  if (g.format == "json") {
    nlohmann::json j{{"s", lts.state_name(p.s)}, {"t", lts.state_name(p.t)}, {"variant", spec.text},
                     {"method", g.method}, {"related", related}};
    if (by_game && by_oracle) j["agreement"] = !disagree, j["game"] = *by_game, j["oracle"] = *by_oracle;
    out << j.dump() << "\n";
  } else {
    auto word = [](bool r) { return r ? "related" : "not related"; };
    if (by_game && by_oracle) {
      out << "game: " << word(*by_game) << "\noracle: " << word(*by_oracle) << "\n";
      out << (disagree ? "DISAGREEMENT between game and oracle\n" : "agreement: yes\n");
    } else {
      out << lts.state_name(p.s) << " and " << lts.state_name(p.t) << " are " << word(related) << " (" << spec.text
          << ")\n";
    }
  }
  if (disagree) return kDisagree;
  return related ? kRelated : kUnrelated;
}

PairRelation game_relation(const Input& in, const VariantSpec& spec, const Globals& g) {
  auto game = solve_game(build_arena(spec.game(g.eager), in.lts, AllPairs{}, ArenaOptions{g.max_arena}));
  const auto n = static_cast<StateId>(in.lts->num_states());
  PairRelation r(n, false);
  for (StateId s = 0; s < n; ++s)
    for (StateId t = 0; t < n; ++t)
      if (game_related(*game, s, t)) r.insert(s, t);
  return r;
}

std::vector<std::vector<StateId>> classes_of(const PairRelation& r) {
  auto block = equivalence_classes(r);
  std::vector<std::vector<StateId>> classes;
  for (StateId s = 0; s < block.size(); ++s) {
    if (block[s] >= classes.size()) classes.resize(block[s] + 1);
    classes[block[s]].push_back(s);
  }
  return classes;
}

int cmd_partition(const std::string& file, const Globals& g, std::ostream& out) {
  auto spec = parse_variant(g.variant);
  if (!spec.equivalence() || spec.kind == VariantSpec::Kind::SimEq)
    throw UsageError("partition needs an equivalence variant, not " + spec.text);
  auto in = load_input({file}, g);
  std::optional<std::vector<std::vector<StateId>>> by_game, by_oracle;
  if (g.method == "game" || g.method == "both") by_game = classes_of(game_relation(in, spec, g));
  if (g.method == "oracle" || g.method == "both") by_oracle = classes_of(oracle_relation(*in.lts, spec));
  const auto& classes = by_game ? *by_game : *by_oracle;
  if (g.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : classes) {
      nlohmann::json names = nlohmann::json::array();
      for (auto s : c) names.push_back(in.lts->state_name(s));
      j.push_back(names);
    }
    out << nlohmann::json{{"variant", spec.text}, {"classes", j}}.dump() << "\n";
  } else {
    for (const auto& c : classes) {
      out << "{";
      for (std::size_t i = 0; i < c.size(); ++i) out << (i ? ", " : "") << in.lts->state_name(c[i]);
      out << "}\n";
    }
  }
  if (by_game && by_oracle && *by_game != *by_oracle) {
    out << "DISAGREEMENT between game and oracle partitions\n";
    return kDisagree;
  }
  return kRelated;
}

int cmd_explain(const std::vector<std::string>& args, const Globals& g, std::ostream& out) {
  auto p = load_pair(args, g);
  auto spec = parse_variant(g.variant);
  auto game = solve_pair(p, spec, g);
  auto graph = explain(*game, p.s, p.t);
  if (g.format == "dot") {
    out << to_dot(game->arena, graph.view);
  } else if (g.format == "json") {
    auto j = arena_to_json(game->arena, graph.view);
    j["winner"] = to_string(graph.winner);
    out << j.dump() << "\n";
  } else if (graph.winner == Player::Spoiler) {
    // Transcript from the losing side, both players on auto.
    auto session = new_session(game, p.s, p.t, Side::Duplicator);
    session.play_out();
    out << transcript(session);
  } else {
    out << "states are related; Duplicator solitaire emitted\n";
    const auto& a = game->arena;
    for (auto [from, rule, to] : graph.view.edges)
      out << describe(a.configs[from], *a.lts, a.variant) << " --" << to_string(rule) << "--> "
          << describe(a.configs[to], *a.lts, a.variant) << "\n";
  }
  return kRelated;
}

int cmd_arena(const std::vector<std::string>& files, const std::vector<std::string>& pair, const Globals& g,
              std::ostream& out) {
  if (files.empty() || files.size() > 2) throw UsageError("expected <file> [<file2>]");
  auto in = load_input(files, g);
  auto spec = parse_variant(g.variant);
  Arena a = pair.empty()
                ? build_arena(spec.game(g.eager), in.lts, AllPairs{}, ArenaOptions{g.max_arena})
                : build_arena(spec.game(g.eager), in.lts, {{in.resolve(pair[0], false), in.resolve(pair[1], true)}},
                              ArenaOptions{g.max_arena});
  if (g.format == "dot") {
    out << to_dot(a, full_view(a));
  } else if (g.format == "json") {
    auto sol = solve(a);
    auto j = arena_to_json(a, full_view(a));
    j["solution"] = nlohmann::json::parse(solution_to_json(sol));
    out << j.dump() << "\n";
  } else {
    out << a.variant.name() << ": " << a.size() << " configurations, " << a.num_edges() << " moves\n";
  }
  return kRelated;
}

int cmd_play(const std::vector<std::string>& args, const std::string& side_text, const Globals& g, std::istream& in,
             std::ostream& out) {
  auto p = load_pair(args, g);
  auto spec = parse_variant(g.variant);
  auto game = solve_pair(p, spec, g);
  Side side = side_text == "spoiler" ? Side::Spoiler : side_text == "none" ? Side::None : Side::Duplicator;
  auto session = new_session(game, p.s, p.t, side);
  const auto& a = game->arena;
  const Player viewer = side == Side::Spoiler ? Player::Spoiler : Player::Duplicator;
  std::size_t printed = 0;
  auto flush = [&] {
    std::istringstream lines(transcript(session));
    std::string line;
    for (std::size_t i = 0; std::getline(lines, line); ++i)
      if (i >= printed) out << line << "\n", printed = i + 1;
  };
  while (!session.finished()) {
    if (!session.human_turn()) {
      session.step();
      flush();
      continue;
    }
    out << "Current: " << describe(a.configs[session.current()], *a.lts, a.variant) << "\n";
    auto edges = a.edges(session.current());
    for (std::size_t k = 0; k < edges.size(); ++k)
      out << "  [" << k << "] " << to_string(edges[k].rule) << ": " << describe_move(a, session.current(), edges[k], viewer)
          << "  (won by " << to_string(game->solution.regions.winner[edges[k].to]) << ")\n";
    out << "move (index, a = auto, q = quit)> " << std::flush;
    std::string line;
    if (!std::getline(in, line) || line == "q") return kRelated;
    try {
      if (line == "a") session.step(session.auto_choice());
      else session.step(std::stoul(line));
    } catch (const std::exception& e) {
      out << "invalid choice: " << e.what() << "\n";
      continue;
    }
    flush();
  }
  flush();
  return kRelated;
}

int cmd_gen(std::uint64_t seed, std::size_t states, std::size_t labels, double density, double tau_fraction,
            const std::string& output, std::ostream& out) {
  auto lts = random_lts(seed, states, labels, density, tau_fraction);
  if (output.empty()) {
    out << serialize_aut(lts);
  } else {
    std::ofstream f(output);
    if (!f) throw UsageError("cannot write " + output);
    f << serialize_aut(lts);
  }
  return kRelated;
}

int cmd_serve(const std::string& host, int port, int idle, const Globals& g, std::ostream& out) {
  SessionService service(ServiceOptions{g.max_arena, std::chrono::seconds(idle)});
  HttpServer server(service);
  out << "listening on http://" << host << ":" << port << "\n" << std::flush;
  if (!server.listen(host, port)) throw UsageError("cannot listen on " + host + ":" + std::to_string(port));
  return kRelated;
}

}  // namespace

int run(int argc, char** argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide behavioural equivalences of labelled transition systems with bisimulation games"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tau", g.tau, "Label text of the internal action")->capture_default_str();
  app.add_option("--variant", g.variant,
                 "strong | lbb | bb | branching | eta | delay | weak, optionally with -ed; sim:<xy> | simeq:<xy> | "
                 "dual:<xy> | raw:E=<faces>,div=<bool>")
      ->capture_default_str();
  app.add_option("--method", g.method, "How to decide")->check(CLI::IsMember({"game", "oracle", "both"}))->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "dot", "json"}))->capture_default_str();
  app.add_option("--max-arena", g.max_arena, "Cap on the number of game configurations")->check(CLI::PositiveNumber);
  app.add_flag("--eager", g.eager, "Drop the match-and-move rule D2a");

  std::vector<std::string> pair_args;
  auto* compare = app.add_subcommand("compare", "Decide whether two states are related");
  compare->add_option("args", pair_args, "<file> [<file2>] <s> <t>")->required()->expected(3, 4);

  std::string part_file;
  auto* partition = app.add_subcommand("partition", "Print the equivalence classes");
  partition->add_option("file", part_file)->required();

  std::vector<std::string> explain_args;
  auto* explain_cmd = app.add_subcommand("explain", "Explain a verdict by a transcript or strategy graph");
  explain_cmd->add_option("args", explain_args, "<file> [<file2>] <s> <t>")->required()->expected(3, 4);

  std::vector<std::string> arena_files, arena_pair;
  auto* arena_cmd = app.add_subcommand("arena", "Export the game arena");
  arena_cmd->add_option("files", arena_files, "<file> [<file2>]")->required()->expected(1, 2);
  arena_cmd->add_option("--pair", arena_pair, "Start pair instead of all pairs")->expected(2);

  std::vector<std::string> play_args;
  std::string side = "duplicator";
  auto* play = app.add_subcommand("play", "Play the game in the terminal");
  play->add_option("args", play_args, "<file> [<file2>] <s> <t>")->required()->expected(3, 4);
  play->add_option("--side", side, "Side played by you")->check(CLI::IsMember({"spoiler", "duplicator", "none"}));

  std::uint64_t seed = 0;
  std::size_t states = 6, labels = 2;
  double density = 0.25, tau_fraction = 0.3;
  std::string output;
  auto* gen = app.add_subcommand("gen", "Generate a random LTS");
  gen->add_option("--seed", seed)->required();
  gen->add_option("--states", states)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--labels", labels)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--density", density)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen->add_option("--tau-fraction", tau_fraction)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  gen->add_option("-o,--output", output);

  std::string host = "127.0.0.1";
  int port = 8080, idle = 1800;
  auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--idle-timeout", idle, "Seconds before idle sessions expire")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*compare) return cmd_compare(pair_args, g, out);
    if (*partition) return cmd_partition(part_file, g, out);
    if (*explain_cmd) return cmd_explain(explain_args, g, out);
    if (*arena_cmd) return cmd_arena(arena_files, arena_pair, g, out);
    if (*play) return cmd_play(play_args, side, g, in, out);
    if (*gen) return cmd_gen(seed, states, labels, density, tau_fraction, output, out);
    if (*serve) return cmd_serve(host, port, idle, g, out);
  } catch (const ArenaLimitError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace bisimgame::cli
