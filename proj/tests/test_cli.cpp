#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "shoga/cli.hpp"
#include "shoga/game_io.hpp"
#include "shoga/game_maps.hpp"
#include "test_util.hpp"

using namespace shoga;
using namespace shoga::testutil;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "shoga_test_tmp_" + std::to_string(counter++) + ".json";
    std::ofstream f(path);
    f << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("game json parsing") {
  SUBCASE("the glove game from its sparse encoding") {
    const TuGame u =
        parse_game_json(R"({"players":3,"worth":{"1,2":1,"1,3":1,"1,2,3":1}})");
    CHECK(u == glove_game());
  }
  SUBCASE("missing coalitions default to zero") {
    const TuGame u = parse_game_json(R"({"players":2,"worth":{}})");
    CHECK(u == TuGame(2));
    CHECK(parse_game_json(R"({"players":2})") == TuGame(2));
  }
  SUBCASE("nonzero empty-coalition worth is rejected") {
    CHECK_THROWS_AS(parse_game_json(R"({"players":2,"worth":{"":5}})"), std::invalid_argument);
  }
  SUBCASE("zero empty-coalition worth is accepted") {
    CHECK(parse_game_json(R"({"players":2,"worth":{"":0}})") == TuGame(2));
  }
  SUBCASE("duplicate keys are rejected") {
    CHECK_THROWS_WITH_AS(parse_game_json(R"({"players":2,"worth":{"1":1,"1":2}})"),
                         doctest::Contains("duplicate"), std::invalid_argument);
  }
  SUBCASE("malformed coalition keys are rejected") {
    CHECK_THROWS_AS(parse_game_json(R"({"players":2,"worth":{"2,1":1}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_game_json(R"({"players":2,"worth":{"3":1}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_game_json(R"({"players":2,"worth":{"1, 2":1}})"), std::invalid_argument);
  }
  SUBCASE("unknown fields and bad player counts are rejected") {
    CHECK_THROWS_AS(parse_game_json(R"({"players":2,"value":{}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_game_json(R"({"players":0})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_game_json(R"({"players":21})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_game_json(R"({"worth":{}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_game_json(R"([1,2])"), std::invalid_argument);
  }
  SUBCASE("non-numeric worths are rejected") {
    CHECK_THROWS_AS(parse_game_json(R"({"players":2,"worth":{"1":"x"}})"), std::invalid_argument);
  }
}

TEST_CASE("game json writing") {
  SUBCASE("all entries in ascending mask order") {
    const std::string text = write_game_json(glove_game());
    const std::size_t p1 = text.find("\"1\"");
    const std::size_t p2 = text.find("\"2\"");
    const std::size_t p12 = text.find("\"1,2\"");
    const std::size_t p3 = text.find("\"3\"");
    REQUIRE(p1 != std::string::npos);
    CHECK(p1 < p2);
    CHECK(p2 < p12);
    CHECK(p12 < p3);
  }
  SUBCASE("round trip is bit-exact on random games") {
    for (int n = 2; n <= 6; ++n) {
      const TuGame u = random_game(n, 4000 + n);
      CHECK(parse_game_json(write_game_json(u)) == u);
    }
  }
}

TEST_CASE("builtin game specs") {
  CHECK(builtin_game("glove") == glove_game());
  CHECK(builtin_game("bankruptcy?E=200&c=100,200,300") == bankruptcy_example());
  CHECK(builtin_game("airport?costs=12,28,28,30") == airport_example());
  CHECK(builtin_game("unanimity?n=3&S=1,2") == unanimity_game(3, Coalition::of({1, 2})));
  CHECK(builtin_game("majority?n=5&q=3") == majority_game(5, 3));
  CHECK(builtin_game("random?n=4&seed=9") == random_game(4, 9));
  CHECK(builtin_game("random?n=4&seed=9&dist=uniform") == random_game(4, 9));
  SUBCASE("errors name the offending field") {
    CHECK_THROWS_WITH_AS(builtin_game("bankruptcy?E=200"), doctest::Contains("'c'"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(builtin_game("bankruptcy?E=x&c=1"), doctest::Contains("'E'"),
                         std::invalid_argument);
    CHECK_THROWS_AS(builtin_game("majority?n=3&q=7"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_game("random?n=4&dist=normal"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_game("glove?x=1"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_game("nosuch"), std::invalid_argument);
  }
  SUBCASE("load_game dispatches on the builtin prefix") {
    CHECK(load_game("builtin:glove") == glove_game());
    CHECK_THROWS_AS(load_game("no_such_file.json"), std::invalid_argument);
  }
}

TEST_CASE("cli map subcommand") {
  const RunResult r = run_cli({"map", "--name", "shoga", "--game", "builtin:glove"});
  CHECK(r.code == 0);
  CHECK(r.out.find("# shoga") != std::string::npos);
  CHECK(r.out.find("# seed: 0") != std::string::npos);
  CHECK(r.out.find("{1}") != std::string::npos);
  CHECK(r.out.find("0.5") != std::string::npos);
  SUBCASE("csv format quotes coalition keys") {
    const RunResult csv =
        run_cli({"map", "--name", "shoga", "--game", "builtin:glove", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.find("\"1,2\",1") != std::string::npos);
  }
  SUBCASE("json output round-trips through the game reader") {
    const RunResult js =
        run_cli({"map", "--name", "shoga", "--game", "builtin:glove", "--format", "json"});
    CHECK(js.code == 0);
    const std::size_t brace = js.out.find('{');
    REQUIRE(brace != std::string::npos);
    const TuGame parsed = parse_game_json(js.out.substr(brace));
    CHECK(parsed == shoga_game(glove_game()));
  }
}

TEST_CASE("cli determinism") {
  const std::vector<std::string> args{"axioms", "--map", "shoga", "--n", "3",
                                      "--count", "20", "--seed", "5"};
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.out == b.out);
  CHECK(a.code == b.code);
}

TEST_CASE("cli value subcommand") {
  const RunResult r = run_cli({"value", "--name", "shapley", "--game", "builtin:glove"});
  CHECK(r.code == 0);
  CHECK(r.out.find("player,value") != std::string::npos);
  CHECK(r.out.find("1,0.666666666667") != std::string::npos);
  const RunResult g =
      run_cli({"value", "--name", "generalized:shoga", "--game", "builtin:glove"});
  CHECK(g.code == 0);
  CHECK(g.out.find("coalition,value") != std::string::npos);
  const RunResult bad = run_cli({"value", "--name", "nope", "--game", "builtin:glove"});
  CHECK(bad.code == 2);
}

TEST_CASE("cli axioms subcommand") {
  SUBCASE("the associated-game map passes everything but plain efficiency") {
    const RunResult r = run_cli({"axioms", "--map", "shoga", "--n", "4", "--count", "50",
                                 "--seed", "3", "--axiom", "CS"});
    CHECK(r.code == 0);
    CHECK(r.out.find("CS,shoga,PASS") != std::string::npos);
  }
  SUBCASE("dual on the glove game fails constant sum with an inline witness") {
    const RunResult r = run_cli(
        {"axioms", "--map", "dual", "--axiom", "CS", "--game", "builtin:glove"});
    CHECK(r.code == 1);
    CHECK(r.out.find("CS,dual,FAIL") != std::string::npos);
    CHECK(r.out.find("\"\"players\"\"") != std::string::npos);  // csv-escaped game json
    CHECK(r.out.find("# pass=0 fail=1") != std::string::npos);
  }
}

TEST_CASE("cli hodge subcommands") {
  SUBCASE("solve reports the pinned solution at N") {
    const RunResult r = run_cli({"hodge", "solve", "--game", "builtin:unanimity?n=2&S=1,2",
                                 "--S", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("x_N,0.25") != std::string::npos);
    CHECK(r.out.find("residual_norm,") != std::string::npos);
    CHECK(r.out.find("iterations,") != std::string::npos);
  }
  SUBCASE("dense method matches") {
    const RunResult r = run_cli({"hodge", "solve", "--game", "builtin:glove", "--S", "1",
                                 "--method", "dense"});
    CHECK(r.code == 0);
    CHECK(r.out.find("x_N,0.125") != std::string::npos);
  }
  SUBCASE("decompose-all emits one row per coalition and a checksum") {
    const RunResult r = run_cli({"hodge", "decompose-all", "--game", "builtin:glove",
                                 "--k", "3"});
    CHECK(r.code == 0);
    CHECK(r.out.find("coalition,component_at_N") != std::string::npos);
    CHECK(r.out.find("\"1,2,3\",") != std::string::npos);
    CHECK(r.out.find("check,") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
  }
  SUBCASE("oversized steps are rejected as input errors") {
    const RunResult r = run_cli({"hodge", "solve", "--game", "builtin:glove", "--S", "1,2",
                                 "--k", "1"});
    CHECK(r.code == 2);
    CHECK(!r.err.empty());
  }
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"map", "--name", "shoga"}).code == 2);  // missing --game
  CHECK(run_cli({"map", "--name", "nosuchmap", "--game", "builtin:glove"}).code == 2);
  CHECK(run_cli({"map", "--name", "shoga", "--game", "missing.json"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
  SUBCASE("malformed game files carry diagnostics") {
    const TempFile bad(R"({"players":2,"worth":{"":7}})");
    const RunResult r = run_cli({"map", "--name", "shoga", "--game", bad.path});
    CHECK(r.code == 2);
    CHECK(r.err.find("empty coalition") != std::string::npos);
  }
  SUBCASE("a small verify battery passes") {
    const RunResult r = run_cli({"verify-paper", "--max-n", "3", "--seed", "7"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
  }
}

TEST_CASE("cli reads game files from disk") {
  const TempFile file(write_game_json(bankruptcy_example()));
  const RunResult r = run_cli({"map", "--name", "shoga", "--game", file.path, "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\"2,3\",150") != std::string::npos);
}
