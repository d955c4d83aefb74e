#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <utility>

#include "etale/io.hpp"
#include "testkit.hpp"

using namespace etale;

namespace {

const char* kP2 = R"j({
  "objects": ["1", "2"],
  "arrows": [
    {"id": "(1,1)", "src": "1", "dst": "1"},
    {"id": "(1,2)", "src": "2", "dst": "1"},
    {"id": "(2,1)", "src": "1", "dst": "2"},
    {"id": "(2,2)", "src": "2", "dst": "2"}
  ],
  "compose": [
    ["(1,1)", "(1,1)", "(1,1)"], ["(1,1)", "(1,2)", "(1,2)"],
    ["(1,2)", "(2,1)", "(1,1)"], ["(1,2)", "(2,2)", "(1,2)"],
    ["(2,1)", "(1,1)", "(2,1)"], ["(2,1)", "(1,2)", "(2,2)"],
    ["(2,2)", "(2,1)", "(2,1)"], ["(2,2)", "(2,2)", "(2,2)"]
  ],
  "inv": {"(1,1)": "(1,1)", "(1,2)": "(2,1)", "(2,1)": "(1,2)", "(2,2)": "(2,2)"},
  "units": {"1": "(1,1)", "2": "(2,2)"}
}
)j";

// 1-based line and column of the first occurrence of `needle`.
std::pair<std::size_t, std::size_t> position_of(const std::string& text, const std::string& needle) {
  std::size_t at = text.find(needle);
  REQUIRE(at != std::string::npos);
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < at; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ParseError parse_error_of(const std::string& text) {
  try {
    parse_groupoid(text, "doc.json");
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  throw;
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("etale-io-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
  }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("minimal document") {
  FiniteGroupoid g = parse_groupoid(R"j({"objects": ["x"], "arrows": [{"id": "e", "src": "x", "dst": "x"}],
    "compose": [["e", "e", "e"]], "inv": {"e": "e"}, "units": {"x": "e"}})j");
  CHECK(g.num_objects() == 1);
  CHECK(g.num_arrows() == 1);
  CHECK(validate_groupoid(g));
}

TEST_CASE("P2 document matches the builder") {
  FiniteGroupoid g = parse_groupoid(kP2);
  CHECK(g == pair_groupoid(2));
  CHECK(parse_groupoid(to_json(g)) == g);
}

TEST_CASE("round trips through JSON") {
  Ring f5 = Ring::modular(5);
  Ring q = Ring::rational();
  for (const auto& [name, g] : testkit::equivalence_groupoids()) {
    CAPTURE(name);
    CHECK(parse_groupoid(to_json(*g)) == *g);
    GModule m = random_module(g, q, 2, 3);
    CHECK(parse_module(to_json(m), g) == m);
    GSheaf e = random_sheaf(g, f5, 3, 4);
    CHECK(parse_sheaf(to_json(e), g) == e);
  }
  GraphSpec spec{{"v", "w", "u"}, {{"e", "v", "w"}, {"f", "u", "w"}}};
  GraphSpec back = parse_graph(to_json(spec));
  CHECK(back.vertices == spec.vertices);
  REQUIRE(back.edges.size() == 2);
  CHECK(back.edges[1].name == "f");
  CHECK(back.edges[1].src == "u");
  CHECK(parse_graph(R"j({"vertices": ["v", "w"], "edges": [["v", "w"]]})j").edges[0].dst == "w");
}

TEST_CASE("rational entries keep their exact value") {
  auto g = testkit::trivial();
  Ring q = Ring::rational();
  GModule m = parse_module(R"j({"ring": "Q", "rank": 2, "action": {"(1,1)": [[1, 0], [0, 1]]}})j", g);
  CHECK(validate_module(m));
  // parsing does not check axioms, so a non-identity unit still loads
  GSheaf e = parse_sheaf(R"j({"ring": "Q", "stalks": {"1": 1}, "transport": {"(1,1)": [["-3/6"]]}})j", g);
  Matrix half(q, 1, 1);
  half.set(0, 0, Scalar(-1, 2));
  CHECK(e.transport(arrow_at(0)) == half);
  CHECK_FALSE(validate_sheaf(e));
}

TEST_CASE("unknown arrow in compose is located") {
  std::string text = replaced(kP2, R"j(["(2,1)", "(1,2)", "(2,2)"])j", R"j(["(2,1)", "(1,3)", "(2,2)"])j");
  ParseError e = parse_error_of(text);
  CHECK(e.message() == "unknown arrow '(1,3)'");
  auto [line, col] = position_of(text, "\"(1,3)\"");
  CHECK(e.line() == line);
  CHECK(e.column() == col);
  CHECK(e.line() == 12);
  CHECK(e.origin() == "doc.json");
  CHECK_FALSE(e.hint().empty());
  std::string what = e.what();
  CHECK(what.rfind("doc.json:12:" + std::to_string(col) + ": unknown arrow '(1,3)'", 0) == 0);
  CHECK(what.find("hint: ") != std::string::npos);
}

TEST_CASE("syntax errors") {
  std::string text = replaced(kP2, R"j("objects": ["1", "2"],)j", R"j("objects": ["1" "2"],)j");
  ParseError e = parse_error_of(text);
  CHECK(e.message().rfind("syntax error", 0) == 0);
  CHECK(e.line() == 2);
  CHECK_FALSE(e.hint().empty());
  CHECK_THROWS_AS(parse_groupoid(""), ParseError);
  CHECK_THROWS_AS(parse_groupoid("{"), ParseError);
}

TEST_CASE("schema errors") {
  SUBCASE("float entry") {
    std::string text = R"j({"ring": "Q", "rank": 1,
  "action": {"(1,1)": [[0.5]]}})j";
    try {
      parse_module(text, testkit::trivial(), "m.json");
      FAIL("accepted a float");
    } catch (const ParseError& e) {
      CHECK(e.hint() == "write fractions as strings, e.g. \"1/2\"");
      CHECK(e.line() == 2);
      CHECK(e.column() == position_of(text, "0.5").second);
    }
  }
  SUBCASE("unknown key") {
    std::string text = replaced(kP2, R"j("units":)j", R"j("unit": 1, "units":)j");
    ParseError e = parse_error_of(text);
    CHECK(e.message().find("unexpected field \"unit\"") != std::string::npos);
    CHECK(e.column() == position_of(text, "\"unit\"").second);
  }
  SUBCASE("missing inverse") {
    std::string text = replaced(kP2, R"j("(2,1)": "(1,2)", )j", "");
    ParseError e = parse_error_of(text);
    CHECK(e.message().find("'(2,1)'") != std::string::npos);
    CHECK(e.line() == 15);
  }
  SUBCASE("missing field") {
    std::string text = replaced(kP2, R"j(,
  "units": {"1": "(1,1)", "2": "(2,2)"})j", "");
    CHECK(parse_error_of(text).message() == "missing field \"units\"");
  }
  SUBCASE("unknown object") {
    std::string text = replaced(kP2, R"j({"id": "(2,2)", "src": "2", "dst": "2"})j",
                                R"j({"id": "(2,2)", "src": "3", "dst": "2"})j");
    ParseError e = parse_error_of(text);
    CHECK(e.message() == "unknown object '3'");
    CHECK(e.line() == 7);
  }
  SUBCASE("duplicate id") {
    std::string text = replaced(kP2, R"j("objects": ["1", "2"])j", R"j("objects": ["1", "1"])j");
    CHECK(parse_error_of(text).message() == "duplicate object id '1'");
  }
  SUBCASE("matrix shape") {
    std::string text = R"j({"ring": "Q", "rank": 2, "action": {"(1,1)": [[1, 0]]}})j";
    CHECK_THROWS_AS(parse_module(text, testkit::trivial()), ParseError);
    text = R"j({"ring": "Q", "rank": 2, "action": {"(1,1)": [[1, 0], [0]]}})j";
    CHECK_THROWS_AS(parse_module(text, testkit::trivial()), ParseError);
  }
  SUBCASE("entry outside the ring") {
    std::string text = R"j({"ring": "Z", "rank": 1, "action": {"(1,1)": [["1/2"]]}})j";
    CHECK_THROWS_AS(parse_module(text, testkit::trivial()), ParseError);
  }
  SUBCASE("bad ring") {
    std::string text = R"j({"ring": "R", "rank": 1, "action": {"(1,1)": [[1]]}})j";
    ParseError e = [&] {
      try {
        parse_module(text, testkit::trivial());
      } catch (const ParseError& err) {
        return err;
      }
      FAIL("accepted ring R");
      throw;
    }();
    CHECK(e.column() == position_of(text, "\"R\"").second);
  }
  SUBCASE("missing action entry") {
    std::string text = R"j({"ring": "Q", "rank": 1, "action": {"(1,1)": [[1]]}})j";
    CHECK_THROWS_AS(parse_module(text, testkit::p2()), ParseError);
  }
}

TEST_CASE("every error has a position and a hint") {
  std::vector<std::string> broken = {
      "",
      "[]",
      R"j({"objects": "1"})j",
      replaced(kP2, R"j("(1,1)": "(1,1)",)j", R"j("(1,1)": 7,)j"),
      replaced(kP2, R"j(["(1,1)", "(1,1)", "(1,1)"],)j", R"j(["(1,1)", "(1,1)"],)j"),
      replaced(kP2, R"j("units": {)j", R"j("units": {"9": "(1,1)", )j"),
      replaced(kP2, R"j({"id": "(1,1)", )j", R"j({"id": 3, )j"),
  };
  for (const auto& text : broken) {
    CAPTURE(text);
    ParseError e = parse_error_of(text);
    CHECK(e.line() >= 1);
    CHECK(e.column() >= 1);
    CHECK_FALSE(e.hint().empty());
  }
}

TEST_CASE("document kinds") {
  CHECK(detect_kind(kP2) == FileKind::groupoid);
  CHECK(detect_kind(R"j({"ring": "Q", "rank": 1, "action": {}})j") == FileKind::module);
  CHECK(detect_kind(R"j({"ring": "Q", "stalks": {}, "transport": {}})j") == FileKind::sheaf);
  CHECK(detect_kind(R"j({"objects": {}, "arrows": {}})j") == FileKind::functor);
  CHECK(detect_kind(R"j({"apex": "a", "left": "l", "right": "r"})j") == FileKind::span);
  CHECK(detect_kind(R"j({"vertices": [], "edges": []})j") == FileKind::graph);
  CHECK_THROWS_AS(detect_kind(R"j({"x": 1})j"), ParseError);
  CHECK(parse_file_kind("sheaf") == FileKind::sheaf);
  CHECK_FALSE(parse_file_kind("bundle").has_value());
  for (FileKind k : {FileKind::groupoid, FileKind::module, FileKind::sheaf, FileKind::functor,
                     FileKind::span, FileKind::graph}) {
    CHECK(parse_file_kind(to_string(k)) == k);
  }
}

TEST_CASE("files and references") {
  TempDir dir;
  auto p2 = testkit::p2();
  Ring q = Ring::rational();
  std::filesystem::create_directories(dir.path / "g");
  dir.write("g/p2.json", to_json(*p2));
  dir.write("point.json", to_json(*testkit::trivial()));
  GModule m = regular_module(p2, q);
  dir.write("m.json", to_json(m, "g/p2.json"));
  GSheaf e = random_sheaf(p2, q, 2, 5);
  dir.write("e.json", to_json(e, "g/p2.json"));

  GroupoidFunctor c{p2, testkit::trivial(), {object_at(0), object_at(0)},
                    std::vector<Arrow>(4, arrow_at(0))};
  dir.write("c.functor.json", to_json(c, "g/p2.json", "point.json"));
  dir.write("id.functor.json", to_json(identity_functor(p2), "g/p2.json", "g/p2.json"));
  dir.write("span.json", span_json("g/p2.json", "id.functor.json", "c.functor.json"));

  CHECK(*load_groupoid(dir.path / "g/p2.json") == *p2);
  CHECK(load_module(dir.path / "m.json") == m);
  CHECK(load_sheaf(dir.path / "e.json") == e);
  GroupoidFunctor back = load_functor(dir.path / "c.functor.json");
  CHECK(back.obj_map == c.obj_map);
  CHECK(back.arr_map == c.arr_map);
  MoritaSpan span = load_span(dir.path / "span.json");
  CHECK(validate_span(span));
  CHECK(*span.to() == *testkit::trivial());

  dir.write("orphan.json", to_json(m));
  CHECK_THROWS_AS(load_module(dir.path / "orphan.json"), ParseError);
  CHECK(load_module(dir.path / "orphan.json", p2) == m);
  CHECK_THROWS_AS(load_groupoid(dir.path / "missing.json"), Error);
}

TEST_CASE("serialisation is deterministic and declaration ordered") {
  auto p2 = testkit::p2();
  std::string text = to_json(*p2);
  CHECK(text == to_json(*p2));
  CHECK(text.find("\"objects\"") < text.find("\"arrows\""));
  CHECK(text.find("\"arrows\"") < text.find("\"compose\""));
  CHECK(text.find(R"j({"id": "(1,2)", "src": "2", "dst": "1"})j") != std::string::npos);
  CHECK(text.back() == '\n');
  GModule m = parse_module(R"j({"ring": "Q", "rank": 1, "action": {"(1,1)": [["2/4"]]}})j",
                           testkit::trivial());
  CHECK(to_json(m).find("\"1/2\"") != std::string::npos);
}

}
