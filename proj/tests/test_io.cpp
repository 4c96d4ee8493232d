#include "helpers.hpp"

#include "galois/cache.hpp"
#include "galois/cli.hpp"
#include "galois/io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace galois;
using namespace testing;

namespace fs = std::filesystem;

namespace {

const std::string sample = GALOIS_TEST_DATA "/boolean.json";

std::string read_file(const fs::path& p)
{
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string parse_error(const std::string& text)
{
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

struct TempDir
{
  fs::path path;
  explicit TempDir(const std::string& tag)
  {
    path = fs::temp_directory_path() / ("galois-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("parse the sample instance")
{
  const auto doc = parse_instance(read_file(sample));
  CHECK(doc.a.size == 2);
  CHECK(doc.b.size == 2);
  CHECK(doc.functions.at("and") == AND());
  CHECK(doc.functions.at("or") == OR());
  CHECK(doc.relation("leq", false) == leq());
  CHECK(doc.relation("eq", true) == eq2());
  CHECK(doc.constraint("mono") == Constraint(leq(), leq()));
  CHECK(doc.function_class("lattice").size() == 4);
  CHECK(doc.constraint_set("T2") == cset({{leq(), leq()}}));
  CHECK(doc.scheme("swap").family[0][0] == SchemeEntry::coord(2));
  CHECK_THROWS_AS(doc.function_class("nope"), ParseError);
}

TEST_CASE("semantic errors name the binding")
{
  CHECK(parse_error("{}").find("'A'") != std::string::npos);
  CHECK(parse_error(R"({"domains": {"A": {"size": 2}}, "functions": {"f": {"arity": 2, "table": [0, 1, 1]}}})") ==
        "function 'f': expected 4 entries, got 3");
  CHECK(parse_error(R"({"domains": {"A": {"size": 2}}, "functions": {"f": [0, 2]}})").find("'f'") != std::string::npos);
  CHECK(parse_error(R"({"domains": {"A": {"size": 2}}, "relations": {"r": [[0, 0], [0]]}})").find("'r'") != std::string::npos);
  CHECK(parse_error(R"({"domains": {"A": {"size": 2}}, "constraints": {"c": ["x", "y"]}})").find("'c'") != std::string::npos);
  CHECK(parse_error(R"({"bogus": {}})").find("bogus") != std::string::npos);
  CHECK(parse_error(R"({"domains": {"A": {"size": 2}}, "relations": {"r": [["z"]]}})").find("'r'") != std::string::npos);
  CHECK_FALSE(parse_error(R"({"domains": {"A": {"size": 2}}, "functions": {"f": [0, 1, 1]}})").empty());
}

TEST_CASE("syntax errors carry a line and column")
{
  try {
    parse_instance("{\n  \"functions\": {\n    \"f\": [0, 1,,]\n  }\n}\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() > 0);
    CHECK(std::string(e.what()).rfind("line 3, column ", 0) == 0);
  }
}

TEST_CASE("serialization is canonical and round-trips")
{
  const auto doc = parse_instance(read_file(sample));
  const auto text = serialize_instance(doc);
  CHECK(text.back() == '\n');
  const auto again = parse_instance(text);
  CHECK(again == doc);
  CHECK(serialize_instance(again) == text);
  CHECK(text.find("\"B\"") != std::string::npos);
}

TEST_CASE("scheme literals")
{
  const auto s = parse_scheme("target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
  CHECK(s.target == 2);
  CHECK(s.indeterminates == 1);
  CHECK(s.family.size() == 2);
  CHECK(to_string(s) == "target=2; V=1; h1=[c1,v1]; h2=[v1,c2]");
  CHECK(parse_scheme("target=1; h1=[v2]").indeterminates == 2);
  CHECK_THROWS_AS(parse_scheme("target=2; h1=[c3]"), ParseError);
  CHECK_THROWS_AS(parse_scheme("target=2 h1=[c1]"), ParseError);
}

TEST_CASE("text records")
{
  const Element t[] = {0, 1};
  CHECK(format_tuple(t) == "(0,1)");
  CHECK(format_relation(eq2()) == "{(0,0),(1,1)}");
  CHECK(format_function(AND()) == "arity=2 [0,0,0,1]");
  CHECK(format_constraint({eq2(), eq2()}) == "arity=2 ({(0,0),(1,1)}, {(0,0),(1,1)})");
  std::ostringstream out;
  write_listing(out, cls({AND()}));
  CHECK(out.str() == "# functions 1\narity=2 [0,0,0,1]\n");
}

TEST_CASE("cache round trip, version mismatch and corrupt entries")
{
  TempDir dir("cache");
  const ResultCache cache(dir.path);
  const auto key = ResultCache::make_key("close", "input", "bounds");
  CHECK(key.size() == 64);
  CHECK(key != ResultCache::make_key("close", "inpu", "tbounds"));
  std::ostringstream warnings;
  CHECK_FALSE(cache.load(key, warnings));
  cache.store({key, "value\n", 1, tool_version});
  const auto hit = cache.load(key, warnings);
  REQUIRE(hit);
  CHECK(hit->value == "value\n");
  CHECK(hit->exit_code == 1);

  const ResultCache newer(dir.path, "galois 9.9.9");
  CHECK_FALSE(newer.load(key, warnings));
  CHECK(warnings.str().empty());

  std::ofstream(cache.path_for(key)) << "{ not json";
  CHECK_FALSE(cache.load(key, warnings));
  CHECK_FALSE(warnings.str().empty());
}

TEST_CASE("cache directory resolution")
{
  ::setenv(cache_dir_variable, "/tmp/from-env", 1);
  CHECK(resolve_cache_dir(std::nullopt) == fs::path("/tmp/from-env"));
  CHECK(resolve_cache_dir(std::string("/tmp/flag")) == fs::path("/tmp/flag"));
  ::unsetenv(cache_dir_variable);
  CHECK_FALSE(resolve_cache_dir(std::nullopt));
}

TEST_CASE("command exit codes")
{
  CHECK(run({"verify", "t15i", "--in", sample, "--class", "K2", "--n", "2", "--m", "1", "--no-cache"}).code ==
        exit_ok);
  CHECK(run({"frobnicate"}).code == exit_usage);
  CHECK(run({"close", "vs", "--in", "/nonexistent.json", "--class", "K2", "--no-cache"}).code == exit_usage);
  CHECK(run({"enumerate", "functions", "--arity", "9", "--no-cache"}).code == exit_budget);
  CHECK(run({"close", "cmm", "--in", sample, "--set", "T2", "--m", "2", "--max-constraints", "10", "--no-cache"})
          .code == exit_budget);
  const auto half = run({"verify", "thm5", "--in", sample, "--class", "K2", "--n", "2", "--no-cache"});
  CHECK(half.code == exit_ok);
  CHECK(half.out.find("verdict equal") != std::string::npos);
}

TEST_CASE("close and galois commands")
{
  const auto r = run({"close", "cmm", "--in", sample, "--set", "T2", "--m", "2", "--no-cache"});
  CHECK(r.code == exit_ok);
  CHECK(r.out.find("\n# constraints 48\n") != std::string::npos);
  CHECK(r.out.find(format_constraint({geq(), geq()})) != std::string::npos);

  const auto f = run({"galois", "fsc", "--in", sample, "--set", "T2", "--arity", "1", "--no-cache"});
  CHECK(f.out == "# galois fsc arity=1\n# functions 3\narity=1 [0,0]\narity=1 [0,1]\narity=1 [1,1]\n");

  const auto e = run({"enumerate", "functions", "--arity", "1", "--no-cache"});
  CHECK(e.out.find("# functions 4\n") != std::string::npos);
}

TEST_CASE("output is deterministic and cache hits replay the same bytes")
{
  TempDir dir("cli");
  const std::vector<std::string> args{"verify", "t15ii", "--in",        sample,
                                      "--set",  "T2",    "--n",         "2",
                                      "--m",    "2",     "--cache-dir", dir.path.string()};
  const auto first = run(args);
  const auto second = run(args);
  CHECK(first.code == exit_ok);
  CHECK(first.out == second.out);
  CHECK(second.err.find("hit") != std::string::npos);
  auto uncached = args;
  uncached.resize(args.size() - 2);
  uncached.push_back("--no-cache");
  CHECK(run(uncached).out == first.out);
}
