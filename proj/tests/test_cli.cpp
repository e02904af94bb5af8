#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <sys/wait.h>

#include "../tools/commands.hpp"
#include "support/fixtures.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "bisimgame");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = bisimgame::cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return fixtures::path(name); }

int exit_code_of(const std::string& args) {
  const std::string cmd = std::string(BISIMGAME_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("compare verdicts and exit codes") {
  auto weak = run({"--variant", "weak", "compare", fx("fig2"), "0", "5"});
  CHECK(weak.code == 0);
  CHECK(weak.out == "0 and 5 are related (weak)\n");
  auto branching = run({"--variant", "branching", "compare", fx("fig2"), "0", "5"});
  CHECK(branching.code == 1);
  CHECK(branching.out == "0 and 5 are not related (branching)\n");
  auto both = run({"--variant", "delay", "--method", "both", "compare", fx("fig2"), "0", "5"});
  CHECK(both.code == 0);
  CHECK(both.out == "game: related\noracle: related\nagreement: yes\n");
  auto json = run({"--format", "json", "--method", "oracle", "compare", fx("fig5"), "A", "C"});
  CHECK(json.code == 1);
  auto j = nlohmann::json::parse(json.out);
  CHECK(j["related"] == false);
  CHECK(j["s"] == "A");
}

TEST_CASE("two-file compare of buffer and ABP") {
  auto related = run({"--method", "both", "compare", fx("buffer"), fx("abp"), "A", "0"});
  CHECK(related.code == 0);
  CHECK(related.out.find("agreement: yes") != std::string::npos);
  auto ed = run({"--variant", "branching-ed", "compare", fx("buffer"), fx("abp"), "A", "0"});
  CHECK(ed.code == 1);
  CHECK(ed.out == "A and file2:0 are not related (branching-ed)\n");
  auto prefixed = run({"compare", fx("buffer"), fx("abp"), "file1:A", "file2:0"});
  CHECK(prefixed.code == 0);
  auto within_first = run({"compare", fx("buffer"), fx("abp"), "A", "file1:B"});
  CHECK(within_first.code == 1);
  CHECK(within_first.out == "A and B are not related (branching)\n");
  CHECK(run({"compare", fx("buffer"), fx("abp"), "A", "file2:A"}).code == 2);
}

TEST_CASE("errors exit with 2") {
  CHECK(run({"compare", fx("fig2"), "0", "42"}).code == 2);
  CHECK(run({"compare", "/nonexistent.aut", "0", "1"}).code == 2);
  CHECK(run({"--variant", "bogus", "compare", fx("fig2"), "0", "5"}).code == 2);
  CHECK(run({"--method", "guess", "compare", fx("fig2"), "0", "5"}).code == 2);
  CHECK(run({}).code == 2);
  auto capped = run({"--max-arena", "3", "compare", fx("fig2"), "0", "5"});
  CHECK(capped.code == 2);
  CHECK(capped.err.find("cap of 3") != std::string::npos);
  CHECK(run({"gen"}).code == 2);
  CHECK(run({"--variant", "sim:bb", "partition", fx("fig2")}).code == 2);
}

TEST_CASE("parse errors name the line") {
  auto dir = std::filesystem::temp_directory_path() / "bisimgame_cli_test";
  std::filesystem::create_directories(dir);
  auto bad = (dir / "bad.aut").string();
  {
    std::ofstream f(bad);
    f << "des (0,2,2)\n(0,a,1)\n(1,b,9)\n";
  }
  auto r = run({"compare", bad, "0", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("partition") {
  auto right = run({"partition", fx("fig3_right")});
  CHECK(right.code == 0);
  CHECK(right.out == "{v0, v1, v2}\n{u}\n");
  auto distinct = run({"--method", "both", "partition", fx("strong_example")});
  CHECK(distinct.code == 0);
  auto strong = run({"--variant", "strong", "--method", "both", "partition", fx("fig2")});
  CHECK(strong.code == 0);
  auto json = run({"--format", "json", "--variant", "weak", "partition", fx("fig2")});
  auto j = nlohmann::json::parse(json.out);
  CHECK(j["variant"] == "weak");
  CHECK(j["classes"][0][0] == "0");
}

TEST_CASE("explain") {
  auto golden = fixtures::read_text(std::string(BISIMGAME_GOLDEN) + "/abp_explain.txt");
  auto abp = run({"--variant", "branching-ed", "explain", fx("buffer"), fx("abp"), "A", "0"});
  CHECK(abp.code == 0);
  CHECK(abp.out == golden);
  CHECK(abp.out.rfind("Spoiler moves A --r(d1)--> B\n", 0) == 0);
  auto related = run({"--variant", "weak", "explain", fx("fig5"), "A", "C"});
  CHECK(related.out.rfind("states are related; Duplicator solitaire emitted\n", 0) == 0);
  auto dot = run({"--format", "dot", "explain", fx("fig5"), "A", "C"});
  CHECK(dot.out.rfind("digraph arena {", 0) == 0);
  std::size_t nodes = 0;
  for (std::size_t pos = 0; (pos = dot.out.find("[label=\"⟨", pos)) != std::string::npos; ++pos) ++nodes;
  CHECK(nodes == 4);
  auto json = run({"--format", "json", "explain", fx("fig5"), "A", "C"});
  CHECK(nlohmann::json::parse(json.out)["winner"] == "spoiler");
}

TEST_CASE("arena export") {
  auto text = run({"arena", fx("remark")});
  CHECK(text.code == 0);
  CHECK(text.out.rfind("Gb{}: ", 0) == 0);
  auto json = run({"--format", "json", "arena", fx("fig5"), "--pair", "A", "C"});
  auto j = nlohmann::json::parse(json.out);
  CHECK(j["initials"].size() == 1);
  CHECK(j["solution"].contains("duplicator"));
  auto dot = run({"--variant", "bb-ed", "--format", "dot", "arena", fx("remark")});
  CHECK(dot.out.find("label=\"Bbed\"") != std::string::npos);
}

TEST_CASE("play in the terminal") {
  auto auto_play = run({"play", fx("fig5"), "A", "C"}, "a\na\na\na\na\n");
  CHECK(auto_play.code == 0);
  CHECK(auto_play.out.find("Spoiler moves") != std::string::npos);
  CHECK(auto_play.out.find("You explored all options. You lose.") != std::string::npos);
  auto quit = run({"play", "--side", "spoiler", fx("fig5"), "A", "C"}, "q\n");
  CHECK(quit.out.find("[0]") != std::string::npos);
  auto bad = run({"play", fx("fig5"), "A", "C"}, "99\nq\n");
  CHECK(bad.out.find("invalid choice") != std::string::npos);
}

TEST_CASE("gen is reproducible") {
  auto one = run({"gen", "--seed", "11", "--states", "5"});
  auto two = run({"gen", "--seed", "11", "--states", "5"});
  CHECK(one.code == 0);
  CHECK(one.out == two.out);
  CHECK(one.out.rfind("des (0,", 0) == 0);
  CHECK(run({"gen", "--seed", "12", "--states", "5"}).out != one.out);
  CHECK(bisimgame::parse_aut(one.out).num_states() == 5);
}

TEST_CASE("the installed binary returns the documented exit codes") {
  CHECK(exit_code_of("--variant weak compare " + fx("fig2") + " 0 5") == 0);
  CHECK(exit_code_of("compare " + fx("fig2") + " 0 5") == 1);
  CHECK(exit_code_of("compare " + fx("fig2") + " 0 99") == 2);
  CHECK(exit_code_of("--tau i compare " + fx("fig2") + " 0 5") == 1);
}

TEST_CASE("method both agrees on random instances") {
  auto dir = std::filesystem::temp_directory_path() / "bisimgame_cli_test";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto file = (dir / ("r" + std::to_string(seed) + ".aut")).string();
    {
      std::ofstream f(file);
      f << bisimgame::serialize_aut(fixtures::random_instance(seed));
    }
    for (const char* v : {"branching", "weak-ed", "dual:ob", "sim:bo", "simeq:oo", "eta", "delay-ed"})
      CHECK(run({"--variant", v, "--method", "both", "compare", file, "0", "1"}).code != 3);
  }
}

}
