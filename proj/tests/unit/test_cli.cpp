#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "etale/cli.hpp"
#include "etale/io.hpp"

using namespace etale;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(ETALE_FIXTURE_DIR) + "/" + name; }
std::string data(const std::string& name) { return std::string(ETALE_TEST_DATA_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t count_prefix(const std::string& text, const std::string& prefix, const std::string& suffix) {
  std::size_t n = 0;
  for (const auto& l : lines(text)) {
    if (l.rfind(prefix, 0) == 0 && l.find(suffix) != std::string::npos) ++n;
  }
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate reports") {
  Run r = run({"validate", fixture("p2.json")});
  CHECK(r.code == 0);
  CHECK(r.out == "groupoid: PASS (4 arrows, 2 objects)\n");

  CHECK(run({"validate", fixture("trivial.json")}).out == "groupoid: PASS (1 arrow, 1 object)\n");
  CHECK(run({"validate", fixture("p2-regular.module.json")}).out == "module: PASS (rank 4 over Q)\n");
  CHECK(run({"validate", fixture("p2-random.sheaf.json")}).code == 0);
  CHECK(run({"validate", fixture("p2-point.functor.json")}).out == "functor: PASS (essential equivalence)\n");
  Run d = run({"validate", fixture("discrete2-point.functor.json")});
  CHECK(d.code == 0);
  CHECK(d.out.find("not an essential equivalence: FAIL full faithfulness") != std::string::npos);
  CHECK(run({"validate", fixture("p2-point.json")}).out == "span: PASS\n");
  CHECK(run({"validate", fixture("single-edge.graph.json")}).out ==
        "graph: PASS (2 boundary paths, 4 arrows)\n");
  CHECK(run({"validate", "--kind", "groupoid", fixture("z3.json")}).code == 0);
}

TEST_CASE("failing checks exit 1") {
  Run r = run({"validate", data("p2-bad-inverse.json")});
  CHECK(r.code == 1);
  CHECK(r.out == "groupoid: FAIL inverse law (witness: (1,2))\n");

  Run s = run({"validate", fixture("broken-span.json")});
  CHECK(s.code == 1);
  CHECK(s.out == "span: FAIL right leg: full faithfulness (witness: a,b)\n");

  CHECK(run({"validate", data("bad-unit.sheaf.json")}).out.rfind("sheaf: FAIL unit", 0) == 0);
  CHECK(run({"validate", data("not-a-module.module.json")}).code == 1);
  Run c = run({"validate", data("cycle.graph.json")});
  CHECK(c.code == 1);
  CHECK(c.out.rfind("graph: FAIL acyclicity", 0) == 0);
}

TEST_CASE("malformed files exit 1 with position and hint") {
  for (const char* name : {"syntax-error.json", "unknown-arrow.json", "float-entry.module.json"}) {
    CAPTURE(name);
    Run r = run({"validate", data(name)});
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(r.err.find(std::string(name) + ":") != std::string::npos);
    CHECK(r.err.find("hint: ") != std::string::npos);
  }
  Run u = run({"validate", data("unknown-arrow.json")});
  CHECK(u.err.find("unknown-arrow.json:4:21: unknown arrow 'f'") != std::string::npos);
  CHECK(run({"validate", data("no-such-file.json")}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"table", "--groupoid", fixture("p2.json"), "--ring", "R"}).code == 2);
  CHECK(run({"equivalence", "--groupoid", fixture("p2.json"), "--ring", "Zmod:6"}).code == 2);
  CHECK(run({"equivalence", "--groupoid", fixture("p2.json"), "--samples", "0"}).code == 2);
  CHECK(run({"equivalence", "--groupoid", fixture("p2.json"), "--seed", "x"}).code == 2);
  CHECK(run({"--out", "yaml", "validate", fixture("p2.json")}).code == 2);
  CHECK(run({"validate", "--kind", "bundle", fixture("p2.json")}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("table and bisections") {
  Run t = run({"table", "--groupoid", fixture("p2.json")});
  CHECK(t.code == 0);
  CHECK_FALSE(t.out.empty());
  CHECK(t.out == run({"table", "--groupoid", fixture("p2.json"), "--ring", "Q"}).out);
  Run b = run({"bisections", "--groupoid", fixture("p2.json")});
  CHECK(b.code == 0);
  CHECK(lines(b.out).front() == "bisections: 7");
  CHECK(lines(b.out).size() == 8);
  CHECK(b.out.find("{(1,2),(2,1)}\n") != std::string::npos);
}

TEST_CASE("equivalence run") {
  Run r = run({"equivalence", "--groupoid", fixture("p2.json"), "--ring", "F5", "--seed", "7",
               "--samples", "20"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).front() == "equivalence: groupoid p2.json, ring Fp:5, seed 7, samples 20, max rank 3");
  CHECK(count_prefix(r.out, "eta[", ": PASS") == 20);
  CHECK(count_prefix(r.out, "epsilon[", ": PASS") == 20);
  CHECK(count_prefix(r.out, "naturality-", ": PASS") == 40);
  CHECK(lines(r.out).back() == "summary: eta 20/20, epsilon 20/20, naturality 40/40: PASS");
  CHECK(r.out == run({"equivalence", "--groupoid", fixture("p2.json"), "--ring", "F5", "--seed",
                      "7", "--samples", "20"}).out);
  CHECK(r.out != run({"equivalence", "--groupoid", fixture("p2.json"), "--ring", "F5", "--seed",
                      "8", "--samples", "20"}).out);
}

TEST_CASE("morita run") {
  Run r = run({"morita", "--span", fixture("p2-point.json"), "--ring", "Q", "--samples", "10"});
  CHECK(r.code == 0);
  auto ls = lines(r.out);
  CHECK(ls.at(1) == "span: PASS");
  CHECK(ls.at(2).rfind("direction", 0) == 0);
  CHECK(count_prefix(r.out, "forward", "PASS") == 10);
  CHECK(count_prefix(r.out, "backward", "PASS") == 10);
  CHECK(r.out.find("regular: rank 4 -> 2, round trip PASS\n") != std::string::npos);
  CHECK(ls.back() == "summary: samples 20/20, regular PASS: PASS");

  Run z = run({"morita", "--span", fixture("z2action-point.json"), "--ring", "F5", "--samples", "3"});
  CHECK(z.code == 0);

  Run b = run({"morita", "--span", fixture("broken-span.json"), "--ring", "Q"});
  CHECK(b.code == 1);
  CHECK(b.out.find("span: FAIL right leg: full faithfulness") != std::string::npos);
  CHECK(b.out.find("no transport attempted") != std::string::npos);
  CHECK(b.out.find("forward") == std::string::npos);
}

TEST_CASE("json output parses") {
  using nlohmann::json;
  json v = json::parse(run({"--out", "json", "validate", fixture("p2.json")}).out);
  CHECK(v["result"]["status"] == "PASS");
  CHECK(v["arrows"] == 4);
  Run e = run({"--out", "json", "equivalence", "--groupoid", fixture("z2.json"), "--ring", "F2",
               "--samples", "3"});
  CHECK(e.code == 0);
  json ej = json::parse(e.out);
  CHECK(ej.dump() == json::parse(run({"--out", "json", "equivalence", "--groupoid", fixture("z2.json"),
                                      "--ring", "F2", "--samples", "3"}).out).dump());
  json m = json::parse(run({"--out", "json", "morita", "--span", fixture("p2-point.json"), "--samples", "2"}).out);
  CHECK_FALSE(m.empty());
  json t = json::parse(run({"--out", "json", "table", "--groupoid", fixture("p2.json")}).out);
  CHECK_FALSE(t.empty());
  json b = json::parse(run({"--out", "json", "bisections", "--groupoid", fixture("z3.json")}).out);
  CHECK_FALSE(b.empty());
}

TEST_CASE("examples reproduce the committed fixtures") {
  fs::path dir = fs::temp_directory_path() / "etale-cli-examples";
  fs::remove_all(dir);
  Run r = run({"examples", "--dir", dir.string()});
  CHECK(r.code == 0);
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    CAPTURE(entry.path().filename().string());
    fs::path committed = fs::path(ETALE_FIXTURE_DIR) / entry.path().filename();
    REQUIRE(fs::exists(committed));
    CHECK(slurp(entry.path()) == slurp(committed));
    ++n;
  }
  CHECK(n == lines(r.out).size());
  fs::remove_all(dir);
}

}
