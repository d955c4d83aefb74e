#include "etale/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "etale/algebra.hpp"
#include "etale/builders.hpp"
#include "etale/equivalence.hpp"
#include "etale/io.hpp"
#include "etale/morita.hpp"
#include "json_util.hpp"
#include "random_family.hpp"

namespace etale {

namespace {

namespace fs = std::filesystem;
using detail::Json;

// Bad flag values that CLI11 cannot see (ring names, unsupported rings).
struct UsageError : Error {
  using Error::Error;
};

std::string count(std::size_t n, const std::string& noun) {
  return std::to_string(n) + " " + noun + (n == 1 ? "" : "s");
}

std::string label(const std::string& path) { return fs::path(path).filename().string(); }

Ring ring_arg(const std::string& name, bool needs_linear_algebra) {
  Ring ring = Ring::rational();
  try {
    ring = Ring::parse(name);
  } catch (const Error& e) {
    throw UsageError(std::string("--ring: ") + e.what());
  }
  if (needs_linear_algebra && !ring.supports_linear_algebra()) {
    throw UsageError("--ring: " + ring.name() + " is not supported here (use a field or Z)");
  }
  return ring;
}

Json report_json(const Report& r) {
  Json j = Json::object();
  j["status"] = r.passed ? "PASS" : "FAIL";
  if (!r.passed) {
    j["check"] = r.check;
    j["witness"] = r.witness;
  }
  return j;
}

Json matrices_json(const std::vector<Matrix>& ms) {
  Json j = Json::array();
  for (const auto& m : ms) j.push_back(detail::matrix_json(m));
  return j;
}

Json certificate_json(const CertificateResult& c) {
  Json j = report_json(c.report);
  if (c.certificate) {
    j["checks"] = c.certificate->checks;
    j["components"] = matrices_json(c.certificate->components);
    j["inverse_components"] = matrices_json(c.certificate->inverse_components);
  }
  return j;
}

std::string ranks_text(const std::vector<std::size_t>& ranks) {
  std::string s;
  for (auto r : ranks) s += (s.empty() ? "" : " ") + std::to_string(r);
  return s.empty() ? "-" : s;
}

// ---- validate -------------------------------------------------------------------

struct ValidateArgs {
  std::string file;
  std::string kind;
  std::string groupoid;
  std::string source;
  std::string target;
};

int cmd_validate(const ValidateArgs& a, bool json, std::ostream& out) {
  std::string text = read_file(a.file);
  FileKind kind;
  if (a.kind.empty()) {
    kind = detect_kind(text, a.file);
  } else if (auto k = parse_file_kind(a.kind)) {
    kind = *k;
  } else {
    throw UsageError("--kind: unknown kind '" + a.kind + "'");
  }
  auto maybe = [](const std::string& path) -> GroupoidPtr {
    return path.empty() ? nullptr : load_groupoid(path);
  };

  Report r;
  Json j = Json::object();
  std::string info;
  switch (kind) {
    case FileKind::groupoid: {
      auto g = parse_groupoid(text, a.file);
      r = validate_groupoid(g);
      info = count(g.num_arrows(), "arrow") + ", " + count(g.num_objects(), "object");
      j["arrows"] = g.num_arrows();
      j["objects"] = g.num_objects();
      break;
    }
    case FileKind::module: {
      auto m = load_module(a.file, maybe(a.groupoid));
      r = validate_module(m);
      info = "rank " + std::to_string(m.rank()) + " over " + m.ring().name();
      j["rank"] = m.rank();
      j["ring"] = m.ring().name();
      break;
    }
    case FileKind::sheaf: {
      auto e = load_sheaf(a.file, maybe(a.groupoid));
      r = validate_sheaf(e);
      info = "stalk ranks " + ranks_text(e.stalk_ranks()) + " over " + e.ring().name();
      j["stalk_ranks"] = e.stalk_ranks();
      j["ring"] = e.ring().name();
      break;
    }
    case FileKind::functor: {
      auto f = load_functor(a.file, maybe(a.source), maybe(a.target));
      r = validate_functor(f);
      if (r) {
        Report eq = is_essential_equivalence(f);
        info = eq ? "essential equivalence" : "not an essential equivalence: " + eq.summary();
        j["essential_equivalence"] = report_json(eq);
      }
      break;
    }
    case FileKind::span: {
      auto span = load_span(a.file);
      r = validate_span(span);
      break;
    }
    case FileKind::graph: {
      auto spec = load_graph(a.file);
      try {
        auto g = acyclic_graph_groupoid(spec);
        r = validate_groupoid(g);
        info = count(g.num_objects(), "boundary path") + ", " + count(g.num_arrows(), "arrow");
        j["objects"] = g.num_objects();
        j["arrows"] = g.num_arrows();
      } catch (const InvalidArgument& e) {
        r = Report::fail("acyclicity", e.what());
      }
      break;
    }
  }

  if (json) {
    Json doc = Json::object();
    doc["command"] = "validate";
    doc["file"] = label(a.file);
    doc["kind"] = to_string(kind);
    doc["result"] = report_json(r);
    for (auto it = j.begin(); it != j.end(); ++it) doc[it.key()] = it.value();
    out << detail::render(doc);
  } else {
    out << to_string(kind) << ": " << r.summary();
    if (r && !info.empty()) out << " (" << info << ")";
    out << "\n";
  }
  return r ? 0 : 1;
}

// ---- table, bisections --------------------------------------------------------------

int cmd_table(const std::string& file, const std::string& ring_name, bool json, std::ostream& out) {
  Ring ring = ring_arg(ring_name, false);
  auto g = load_groupoid(file);
  auto table = multiplication_table(g, ring);
  if (!json) {
    out << table.to_tsv();
    return 0;
  }
  Json doc = Json::object();
  doc["command"] = "table";
  doc["groupoid"] = label(file);
  doc["ring"] = ring.name();
  Json names = Json::array();
  for (Arrow a : g->arrows()) names.push_back(g->name(a));
  doc["arrows"] = names;
  Json rows = Json::array();
  for (Arrow a : g->arrows()) {
    Json row = Json::array();
    for (Arrow b : g->arrows()) row.push_back(table.at(a, b).to_string());
    rows.push_back(row);
  }
  doc["table"] = rows;
  out << detail::render(doc);
  return 0;
}

int cmd_bisections(const std::string& file, bool json, std::ostream& out) {
  auto g = load_groupoid(file);
  auto all = enumerate_bisections(*g);
  if (json) {
    Json doc = Json::object();
    doc["command"] = "bisections";
    doc["groupoid"] = label(file);
    doc["count"] = all.size();
    Json list = Json::array();
    for (const auto& u : all) {
      Json names = Json::array();
      for (Arrow a : u.arrows()) names.push_back(g->name(a));
      list.push_back(names);
    }
    doc["bisections"] = list;
    out << detail::render(doc);
  } else {
    out << "bisections: " << all.size() << "\n";
    for (const auto& u : all) out << to_string(*g, u) << "\n";
  }
  return 0;
}

// ---- equivalence -------------------------------------------------------------------

struct RunArgs {
  std::string file;
  std::string ring = "Q";
  std::uint64_t seed = 0;
  std::size_t samples = 20;
  std::size_t max_rank = 3;
};

// Independent seed streams, so changing one kind of sample leaves the others alone.
constexpr std::uint64_t module_stream = 0;
constexpr std::uint64_t sheaf_stream = 1;
constexpr std::uint64_t hom_stream = 2;
constexpr std::uint64_t morphism_stream = 3;

int cmd_equivalence(const RunArgs& a, bool json, std::ostream& out) {
  Ring ring = ring_arg(a.ring, true);
  auto g = load_groupoid(a.file);
  auto seed_for = [&](std::uint64_t stream, std::size_t i) {
    return detail::derive_seed(detail::derive_seed(a.seed, stream), i);
  };

  std::vector<GModule> modules;
  std::vector<GSheaf> sheaves;
  for (std::size_t i = 0; i < a.samples; ++i) {
    modules.push_back(random_module(g, ring, a.max_rank, seed_for(module_stream, i)));
    sheaves.push_back(random_sheaf(g, ring, a.max_rank, seed_for(sheaf_stream, i)));
  }

  std::size_t eta_ok = 0;
  std::size_t eps_ok = 0;
  std::size_t nat_ok = 0;
  std::ostringstream text;
  Json rows = Json::array();
  text << "equivalence: groupoid " << label(a.file) << ", ring " << ring.name() << ", seed "
       << a.seed << ", samples " << a.samples << ", max rank " << a.max_rank << "\n";
  for (std::size_t i = 0; i < a.samples; ++i) {
    std::size_t next = (i + 1) % a.samples;
    CertificateResult e = eta(modules[i]);
    CertificateResult s = epsilon(sheaves[i]);
    Report nm = check_naturality(random_hom(modules[i], modules[next], seed_for(hom_stream, i)));
    Report ns = check_naturality(
        random_morphism(sheaves[i], sheaves[next], seed_for(morphism_stream, i)));
    eta_ok += e ? 1 : 0;
    eps_ok += s ? 1 : 0;
    nat_ok += (nm ? 1 : 0) + (ns ? 1 : 0);

    text << "eta[" << i << "]: " << e.report.summary() << " (module rank " << modules[i].rank()
         << ")\n";
    text << "epsilon[" << i << "]: " << s.report.summary() << " (stalk ranks "
         << ranks_text(sheaves[i].stalk_ranks()) << ")\n";
    text << "naturality-module[" << i << "]: " << nm.summary() << " (" << i << " -> " << next << ")\n";
    text << "naturality-sheaf[" << i << "]: " << ns.summary() << " (" << i << " -> " << next << ")\n";

    Json row = Json::object();
    row["index"] = i;
    row["module_rank"] = modules[i].rank();
    row["stalk_ranks"] = sheaves[i].stalk_ranks();
    row["eta"] = certificate_json(e);
    row["epsilon"] = certificate_json(s);
    row["naturality_module"] = report_json(nm);
    row["naturality_sheaf"] = report_json(ns);
    rows.push_back(row);
  }
  bool passed = eta_ok == a.samples && eps_ok == a.samples && nat_ok == 2 * a.samples;
  text << "summary: eta " << eta_ok << "/" << a.samples << ", epsilon " << eps_ok << "/"
       << a.samples << ", naturality " << nat_ok << "/" << 2 * a.samples << ": "
       << (passed ? "PASS" : "FAIL") << "\n";

  if (json) {
    Json doc = Json::object();
    doc["command"] = "equivalence";
    doc["groupoid"] = label(a.file);
    doc["ring"] = ring.name();
    doc["seed"] = a.seed;
    doc["max_rank"] = a.max_rank;
    doc["samples"] = rows;
    doc["passed"] = passed;
    out << detail::render(doc);
  } else {
    out << text.str();
  }
  return passed ? 0 : 1;
}

// ---- morita ------------------------------------------------------------------------

int cmd_morita(const RunArgs& a, bool json, std::ostream& out) {
  Ring ring = ring_arg(a.ring, true);
  MoritaSpan span = load_span(a.file);
  MoritaReport rep = verify_morita(span, ring, a.samples, a.seed, a.max_rank);
  bool passed = rep.passed();

  if (json) {
    Json doc = Json::object();
    doc["command"] = "morita";
    doc["span"] = label(a.file);
    doc["ring"] = ring.name();
    doc["seed"] = a.seed;
    doc["max_rank"] = a.max_rank;
    doc["span_check"] = report_json(rep.span);
    if (rep.span) {
      Json rows = Json::array();
      for (const auto& s : rep.samples) {
        Json row = Json::object();
        row["direction"] = s.direction;
        row["index"] = s.index;
        row["rank"] = s.rank;
        row["transported_rank"] = s.transported_rank;
        row["round_trip"] = report_json(s.round_trip);
        row["hom"] = report_json(s.hom);
        rows.push_back(row);
      }
      doc["samples"] = rows;
      Json reg = report_json(rep.regular);
      reg["rank"] = rep.regular_rank;
      reg["transported_rank"] = rep.regular_transported_rank;
      doc["regular"] = reg;
    }
    doc["passed"] = passed;
    out << detail::render(doc);
    return passed ? 0 : 1;
  }

  out << "morita: span " << label(a.file) << ", ring " << ring.name() << ", seed " << a.seed
      << ", samples " << a.samples << ", max rank " << a.max_rank << "\n";
  out << "span: " << rep.span.summary() << "\n";
  if (!rep.span) {
    out << "no transport attempted\n";
    return 1;
  }
  out << std::left << std::setw(10) << "direction" << std::setw(7) << "index" << std::setw(6)
      << "rank" << std::setw(13) << "transported" << std::setw(12) << "round-trip"
      << "hom\n";
  std::size_t ok = 0;
  for (const auto& s : rep.samples) {
    out << std::left << std::setw(10) << s.direction << std::setw(7) << s.index << std::setw(6)
        << s.rank << std::setw(13) << s.transported_rank << std::setw(12)
        << s.round_trip.summary() << s.hom.summary() << "\n";
    ok += (s.round_trip && s.hom) ? 1 : 0;
  }
  out << "regular: rank " << rep.regular_rank << " -> " << rep.regular_transported_rank
      << ", round trip " << rep.regular.summary() << "\n";
  out << "summary: samples " << ok << "/" << rep.samples.size() << ", regular "
      << (rep.regular ? "PASS" : "FAIL") << ": " << (passed ? "PASS" : "FAIL") << "\n";
  return passed ? 0 : 1;
}

// ---- examples ----------------------------------------------------------------------

GroupoidFunctor collapse(const GroupoidPtr& g, const GroupoidPtr& point) {
  GroupoidFunctor f{g, point, {}, {}};
  f.obj_map.assign(g->num_objects(), object_at(0));
  f.arr_map.assign(g->num_arrows(), point->unit(object_at(0)));
  return f;
}

int cmd_examples(const std::string& dir, std::ostream& out) {
  fs::create_directories(dir);
  std::vector<std::string> written;
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (fs::path(dir) / name).string());
    f << body;
    written.push_back(name);
  };

  auto point = share(pair_groupoid(1));
  auto p2 = share(pair_groupoid(2));
  auto z2 = share(group_groupoid(cyclic_table(2)));
  auto z3 = share(group_groupoid(cyclic_table(3)));
  auto z2_action = share(action_groupoid(cyclic_table(2), {"0", "1"}, {{0, 1}, {1, 0}}));
  auto z2_trivial = share(action_groupoid(cyclic_table(2), {"a", "b"}, {{0, 1}, {0, 1}}));
  auto discrete2 = share(action_groupoid(cyclic_table(1), {"a", "b"}, {{0, 1}}));
  GraphSpec edge{{"v", "w"}, {{"e", "v", "w"}}};
  auto edge_groupoid = share(acyclic_graph_groupoid(edge));

  write("trivial.json", to_json(*point));
  write("p2.json", to_json(*p2));
  write("z2.json", to_json(*z2));
  write("z3.json", to_json(*z3));
  write("z2-action.json", to_json(*z2_action));
  write("z2-trivial-action.json", to_json(*z2_trivial));
  write("discrete2.json", to_json(*discrete2));
  write("single-edge.graph.json", to_json(edge));
  write("single-edge.json", to_json(*edge_groupoid));
  write("p2-regular.module.json", to_json(regular_module(p2, Ring::rational()), "p2.json"));
  write("p2-random.sheaf.json", to_json(random_sheaf(p2, Ring::rational(), 2, 1), "p2.json"));

  auto span_files = [&](const std::string& stem, const GroupoidPtr& apex) {
    write(stem + "-id.functor.json", to_json(identity_functor(apex), stem + ".json", stem + ".json"));
    write(stem + "-point.functor.json", to_json(collapse(apex, point), stem + ".json", "trivial.json"));
  };
  span_files("p2", p2);
  span_files("z2-action", z2_action);
  span_files("discrete2", discrete2);
  write("p2-point.json", span_json("p2.json", "p2-id.functor.json", "p2-point.functor.json"));
  write("z2action-point.json",
        span_json("z2-action.json", "z2-action-id.functor.json", "z2-action-point.functor.json"));
  // Two separate points are not Morita equivalent to one.
  write("broken-span.json",
        span_json("discrete2.json", "discrete2-id.functor.json", "discrete2-point.functor.json"));

  for (const auto& name : written) out << "wrote " << name << "\n";
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite ample groupoids, their algebras, modules and sheaves", "etale"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--out", format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "check a groupoid, module, sheaf, functor, span or graph file");
  validate->add_option("file", va.file)->required();
  validate->add_option("--kind", va.kind, "groupoid|module|sheaf|functor|span|graph (default: detect)");
  validate->add_option("--groupoid", va.groupoid, "groupoid file for a module or sheaf");
  validate->add_option("--source", va.source, "source groupoid file for a functor");
  validate->add_option("--target", va.target, "target groupoid file for a functor");

  std::string table_file;
  std::string table_ring = "Q";
  auto* table = app.add_subcommand("table", "structure constants of the groupoid algebra");
  table->add_option("--groupoid", table_file)->required();
  table->add_option("--ring", table_ring)->capture_default_str();

  std::string bis_file;
  auto* bisections = app.add_subcommand("bisections", "list every bisection");
  bisections->add_option("--groupoid", bis_file)->required();

  RunArgs eq;
  auto* equivalence = app.add_subcommand("equivalence", "check eta, epsilon and naturality on random samples");
  equivalence->add_option("--groupoid", eq.file)->required();
  equivalence->add_option("--ring", eq.ring)->capture_default_str();
  equivalence->add_option("--seed", eq.seed)->capture_default_str();
  equivalence->add_option("--samples", eq.samples)->capture_default_str()->check(CLI::PositiveNumber);
  equivalence->add_option("--max-rank", eq.max_rank)->capture_default_str();

  RunArgs mo;
  mo.samples = 10;
  mo.max_rank = 2;
  auto* morita = app.add_subcommand("morita", "transport modules along a span of essential equivalences");
  morita->add_option("--span", mo.file)->required();
  morita->add_option("--ring", mo.ring)->capture_default_str();
  morita->add_option("--seed", mo.seed)->capture_default_str();
  morita->add_option("--samples", mo.samples)->capture_default_str()->check(CLI::PositiveNumber);
  morita->add_option("--max-rank", mo.max_rank)->capture_default_str();

  std::string examples_dir = "fixtures";
  auto* examples = app.add_subcommand("examples", "write the builder fixtures");
  examples->add_option("--dir", examples_dir)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  bool json = format == "json";
  try {
    if (*validate) return cmd_validate(va, json, out);
    if (*table) return cmd_table(table_file, table_ring, json, out);
    if (*bisections) return cmd_bisections(bis_file, json, out);
    if (*equivalence) return cmd_equivalence(eq, json, out);
    if (*morita) return cmd_morita(mo, json, out);
    if (*examples) return cmd_examples(examples_dir, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace etale
