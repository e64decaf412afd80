#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sectional/runner.hpp"

using namespace sectional;
using nlohmann::json;

namespace {

  std::string fixture(std::string const& name) {
    return std::string(SECTIONAL_FIXTURES_DIR) + "/" + name;
  }

  std::string data(std::string const& name) {
    return std::string(SECTIONAL_TEST_DATA_DIR) + "/" + name;
  }

  RunOptions quiet() {
    RunOptions o;
    o.timestamp = false;
    return o;
  }

  std::vector<std::string> all_fixtures() {
    std::vector<std::string> out;
    for (auto const& e : std::filesystem::directory_iterator(SECTIONAL_FIXTURES_DIR)) {
      if (e.path().extension() == ".json") {
        out.push_back(e.path().string());
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

}  // namespace

TEST_CASE("parse_workspace: minimal file and errors") {
  auto f = parse_workspace(R"({"ring": {"kind": "q"},
                               "semigroupoids": [{"id": "T", "catalog": "trivial_monoid"}]})");
  CHECK(f.semigroupoids.size() == 1);
  CHECK(f.kind_of("T") == "semigroupoids");
  CHECK(f.tasks.empty());

  try {
    parse_workspace("{\"ring\": {\"kind\": \"q\"},\n  \"semigroupoids\": [,]}");
    FAIL("no error");
  } catch (ParseError const& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  std::ifstream in(data("dangling_bundle.json"));
  std::stringstream text;
  text << in.rdbuf();
  try {
    parse_workspace(text.str());
    FAIL("no error");
  } catch (ParseError const& e) {
    std::string const msg = e.what();
    CHECK(msg.find("dangling reference") != std::string::npos);
    CHECK(msg.find("'missing'") != std::string::npos);
  }

  CHECK_THROWS_AS(parse_workspace(R"({"ring": {"kind": "q"}, "monoids": []})"), ParseError);
  CHECK_THROWS_AS(parse_workspace(R"({"ring": {"kind": "q"}, "tasks": [{"kind": "dance"}]})"),
                  ParseError);
}

TEST_CASE("the germ fixture") {
  auto f = parse_workspace_file(fixture("germ.json"));
  CHECK(f.ring.is_object());
  CHECK(f.semigroupoids.size() == 2);
  CHECK(f.actions.size() == 1);
  CHECK(f.tasks.size() == 1);

  auto r = run_files({fixture("germ.json")}, quiet());
  CHECK(r.exit_code == 0);
  json const& ranks = r.report["inputs"][0]["tasks"][0]["ranks"];
  CHECK(ranks["crossed"] == 3);
  CHECK(ranks["ideal"] == 1);
  CHECK(ranks["quotient"] == 2);
  CHECK(ranks["germ_algebra"] == 2);
}

TEST_CASE("exit codes") {
  auto broken = run_files({data("broken_associativity.json")}, quiet());
  CHECK(broken.exit_code == 1);
  json const& t = broken.report["inputs"][0]["tasks"][0];
  CHECK(t["status"] == "fail");
  CHECK(t["failure"]["check"] == "associativity");
  CHECK(t["failure"]["witness"] == json::array({"a", "a", "a"}));

  CHECK(run_files({data("dangling_bundle.json")}, quiet()).exit_code == 2);

  RunOptions zmod = quiet();
  zmod.ring_override = "zmod:5";
  CHECK(run_files({fixture("quotient_q.json")}, zmod).exit_code == 0);
}

TEST_CASE("json and text reports carry the same data") {
  auto r = run_files(all_fixtures(), quiet());
  REQUIRE(r.exit_code == 0);
  CHECK(parse_text(render_text(r.report)) == flatten(r.report));
  auto broken = run_files({data("broken_associativity.json")}, quiet());
  CHECK(parse_text(render_text(broken.report)) == flatten(broken.report));
}

TEST_CASE("reports are deterministic for a fixed seed") {
  RunOptions o = quiet();
  o.seed       = 7;
  auto a       = run_files(all_fixtures(), o);
  auto b       = run_files(all_fixtures(), o);
  CHECK(a.report.dump(2) == b.report.dump(2));
  auto v = validate_files({fixture("convolution_z4.json")}, o);
  CHECK(v.report.dump() == validate_files({fixture("convolution_z4.json")}, o).report.dump());
  CHECK(v.exit_code == 0);
}

TEST_CASE("built structures survive re-serialization") {
  auto const dir = std::filesystem::temp_directory_path() / "sectional-roundtrip";
  std::filesystem::create_directories(dir);
  std::size_t builds = 0;
  for (auto const& path : all_fixtures()) {
    auto const file = parse_workspace_file(path);
    for (auto const& task : file.tasks) {
      if (task.kind != "build") {
        continue;
      }
      ++builds;
      auto r = build_structure(path, task.id, quiet());
      REQUIRE_MESSAGE(r.exit_code == 0, task.id);
      json const  out  = r.report["output"];
      auto const  copy = dir / (task.id + ".json");
      std::ofstream(copy) << out.dump(2);

      auto const again = parse_workspace_file(copy.string());
      Workspace  ws(again);
      for (char const* stanza : {"semigroupoids", "bundles", "algebras", "actions"}) {
        if (!out.contains(stanza)) {
          continue;
        }
        for (json const& decl : out[stanza]) {
          std::string const id = decl["id"];
          CHECK_MESSAGE(!ws.validate(id).has_value(), id);
          auto re = build_structure(copy.string(), id, quiet());
          REQUIRE_MESSAGE(re.exit_code == 0, id);
          CHECK_MESSAGE(re.report["output"][stanza][0] == decl, id);
        }
      }
    }
  }
  CHECK(builds >= 4);
  std::filesystem::remove_all(dir);
}
