#include "etale/io.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json_util.hpp"

namespace etale {

using detail::Json;

ParseError::ParseError(std::string origin, std::size_t line, std::size_t column,
                       std::string message, std::string hint)
    : Error(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message +
            (hint.empty() ? "" : "\n  hint: " + hint)),
      origin_(std::move(origin)),
      line_(line),
      column_(column),
      message_(std::move(message)),
      hint_(std::move(hint)) {}

namespace {

// ---------------------------------------------------------------------------
// Position-tracking parse. nlohmann's SAX interface reports values but not
// where they are, so the input goes through an iterator that publishes how
// far the lexer has read; each event records that offset under the value's
// JSON pointer.

class CountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  CountingIterator(const char* p, const char* begin, std::size_t* consumed)
      : p_(p), begin_(begin), consumed_(consumed) {}

  reference operator*() const { return *p_; }
  CountingIterator& operator++() {
    ++p_;
    *consumed_ = static_cast<std::size_t>(p_ - begin_);
    return *this;
  }
  CountingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const CountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  const char* begin_;
  std::size_t* consumed_;
};

enum class Token { number, other, open };

std::string escape_pointer(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

struct SyntaxProblem {
  std::size_t offset;
  std::string message;
};

class PositionedSax {
 public:
  PositionedSax(std::string_view text, const std::size_t* consumed, Json& root,
                std::unordered_map<std::string, std::size_t>& values,
                std::unordered_map<std::string, std::size_t>& keys)
      : text_(text), consumed_(consumed), root_(root), values_(values), keys_(keys) {}

  std::optional<SyntaxProblem> problem;

  bool null() { return value(nullptr, Token::other); }
  bool boolean(bool b) { return value(b, Token::other); }
  bool number_integer(std::int64_t v) { return value(v, Token::number); }
  bool number_unsigned(std::uint64_t v) { return value(v, Token::number); }
  bool number_float(double v, const std::string&) { return value(v, Token::number); }
  bool string(std::string& s) { return value(s, Token::other); }
  bool binary(Json::binary_t&) { return false; }

  bool start_object(std::size_t) {
    Json* j = place(Json::object(), Token::open);
    frames_.push_back({j, false, 0, "", current_pointer_});
    return true;
  }
  bool key(std::string& k) {
    auto& f = frames_.back();
    f.key = k;
    keys_[f.pointer + "/" + escape_pointer(k)] = token_start(Token::other);
    return true;
  }
  bool end_object() {
    frames_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    Json* j = place(Json::array(), Token::open);
    frames_.push_back({j, true, 0, "", current_pointer_});
    return true;
  }
  bool end_array() {
    frames_.pop_back();
    return true;
  }
  bool parse_error(std::size_t position, const std::string& last, const nlohmann::detail::exception& ex) {
    std::string what = ex.what();
    // Drop nlohmann's "[json.exception...] parse error at line x, column y: "
    // prefix, the position is reported our own way.
    auto colon = what.find(": ", what.find("parse error"));
    if (colon != std::string::npos) what = what.substr(colon + 2);
    (void)last;
    problem = SyntaxProblem{position == 0 ? 0 : position - 1, what};
    return false;
  }

 private:
  struct Frame {
    Json* container;
    bool is_array;
    std::size_t next;
    std::string key;
    std::string pointer;
  };

  template <class V>
  bool value(V&& v, Token t) {
    place(Json(std::forward<V>(v)), t);
    return true;
  }

  Json* place(Json v, Token t) {
    std::string ptr;
    Json* slot;
    if (frames_.empty()) {
      root_ = std::move(v);
      slot = &root_;
    } else {
      auto& f = frames_.back();
      if (f.is_array) {
        ptr = f.pointer + "/" + std::to_string(f.next++);
        f.container->push_back(std::move(v));
        slot = &f.container->back();
      } else {
        ptr = f.pointer + "/" + escape_pointer(f.key);
        slot = &(*f.container)[f.key];
        *slot = std::move(v);
      }
    }
    values_[ptr] = token_start(t);
    current_pointer_ = ptr;
    return slot;
  }

  // Best effort start of the token that was just read.
  std::size_t token_start(Token t) const {
    std::size_t end = *consumed_;
    if (end == 0) return 0;
    std::size_t i = end - 1;
    if (t == Token::number && i > 0) --i;  // the lexer read one character past the number
    while (i > 0 && std::isspace(static_cast<unsigned char>(text_[i]))) --i;
    if (t == Token::open) return i;
    if (text_[i] == '"') {
      std::size_t j = i;
      while (j > 0) {
        --j;
        if (text_[j] == '"' && (j == 0 || text_[j - 1] != '\\')) return j;
      }
      return i;
    }
    while (i > 0 && !std::isspace(static_cast<unsigned char>(text_[i - 1])) &&
           std::string_view(",:[{").find(text_[i - 1]) == std::string_view::npos) {
      --i;
    }
    return i;
  }

  std::string_view text_;
  const std::size_t* consumed_;
  Json& root_;
  std::unordered_map<std::string, std::size_t>& values_;
  std::unordered_map<std::string, std::size_t>& keys_;
  std::vector<Frame> frames_;
  std::string current_pointer_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

class Doc;

// A value inside a parsed document together with its JSON pointer, so any
// schema complaint can be positioned.
class Node {
 public:
  Node(const Doc* doc, const Json* j, std::string ptr) : doc_(doc), j_(j), ptr_(std::move(ptr)) {}

  const Json& json() const { return *j_; }
  const std::string& pointer() const { return ptr_; }

  [[noreturn]] void fail(const std::string& message, const std::string& hint) const;
  [[noreturn]] void fail_key(const std::string& key, const std::string& message,
                             const std::string& hint) const;

  const Node& object(const std::string& what) const {
    if (!j_->is_object()) fail(what + " must be a JSON object", "wrap it in { }");
    return *this;
  }
  const Node& array(const std::string& what) const {
    if (!j_->is_array()) fail(what + " must be a JSON array", "wrap it in [ ]");
    return *this;
  }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }
  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return Node(doc_, &(*j_)[key], ptr_ + "/" + escape_pointer(key));
  }
  Node at(const std::string& key) const {
    object("this value");
    if (!has(key)) fail("missing field \"" + key + "\"", "add \"" + key + "\": ... here");
    return *find(key);
  }

  std::size_t size() const { return j_->size(); }
  Node operator[](std::size_t i) const {
    return Node(doc_, &(*j_)[i], ptr_ + "/" + std::to_string(i));
  }
  std::vector<std::pair<std::string, Node>> members() const {
    std::vector<std::pair<std::string, Node>> out;
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      out.emplace_back(it.key(), Node(doc_, &it.value(), ptr_ + "/" + escape_pointer(it.key())));
    }
    return out;
  }

  void allow_keys(std::initializer_list<std::string_view> allowed) const {
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == it.key();
      if (!ok) {
        std::string list;
        for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
        fail_key(it.key(), "unexpected field \"" + it.key() + "\"",
                 "remove it; allowed fields are " + list);
      }
    }
  }

  std::string str(const std::string& what) const {
    if (!j_->is_string()) fail(what + " must be a string", "put it in double quotes");
    return j_->get<std::string>();
  }

  std::size_t count(const std::string& what) const {
    if (j_->is_number_unsigned()) return j_->get<std::size_t>();
    if (j_->is_number_integer() && j_->get<std::int64_t>() >= 0) return j_->get<std::size_t>();
    fail(what + " must be a non-negative integer", "write a plain whole number such as 2");
  }

  Scalar scalar(const Ring& ring) const {
    Scalar v;
    if (j_->is_number_float()) {
      fail("floating-point entry " + j_->dump() + " is not exact",
           "write fractions as strings, e.g. \"1/2\"");
    } else if (j_->is_number_unsigned()) {
      v = Scalar(mpz_class(std::to_string(j_->get<std::uint64_t>())));
    } else if (j_->is_number_integer()) {
      v = Scalar(mpz_class(std::to_string(j_->get<std::int64_t>())));
    } else if (j_->is_string()) {
      try {
        v = parse_scalar(j_->get<std::string>());
      } catch (const Error& e) {
        fail(e.what(), "use an integer or a fraction string like \"-3/4\"");
      }
    } else {
      fail("matrix entry must be a number", "use an integer or a fraction string like \"-3/4\"");
    }
    try {
      return ring.element(v);
    } catch (const Error& e) {
      fail(e.what(), "entries must lie in " + ring.name());
    }
  }

  Matrix matrix(const Ring& ring, std::size_t rows, std::size_t cols) const {
    std::string shape = std::to_string(rows) + "x" + std::to_string(cols);
    if (!j_->is_array() || j_->size() != rows) {
      fail("expected a " + shape + " matrix (a list of " + std::to_string(rows) + " rows)",
           rows == 0 ? "write []" : "write it row by row, e.g. [[1,0],[0,1]]");
    }
    Matrix m(ring, rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      Node row = (*this)[i];
      if (!row.json().is_array() || row.size() != cols) {
        row.fail("row " + std::to_string(i) + " should have " + std::to_string(cols) + " entries",
                 "the matrix must be " + shape);
      }
      for (std::size_t c = 0; c < cols; ++c) m.set(i, c, row[c].scalar(ring));
    }
    return m;
  }

  Ring ring() const {
    std::string name = str("ring");
    try {
      return Ring::parse(name);
    } catch (const Error& e) {
      fail(e.what(), "use Q, Z, Fp:<prime> (or F<prime>) or Zmod:<m>");
    }
  }

 private:
  const Doc* doc_;
  const Json* j_;
  std::string ptr_;
};

class Doc {
 public:
  Doc(std::string_view text, std::string_view origin) : text_(text), origin_(origin) {
    std::size_t consumed = 0;
    PositionedSax sax(text_, &consumed, root_, values_, keys_);
    CountingIterator first(text_.data(), text_.data(), &consumed);
    CountingIterator last(text_.data() + text_.size(), text_.data(), &consumed);
    bool ok = Json::sax_parse(first, last, &sax);
    if (!ok || sax.problem) {
      std::size_t at = sax.problem ? sax.problem->offset : consumed;
      std::string msg = sax.problem ? sax.problem->message : "malformed JSON";
      throw_at(at, "syntax error: " + msg,
               "check for a missing comma, quote or bracket just before this point");
    }
  }

  Node root() const { return Node(this, &root_, ""); }

  [[noreturn]] void throw_at(std::size_t offset, const std::string& message,
                             const std::string& hint) const {
    auto [line, col] = line_column(text_, offset);
    throw ParseError(origin_, line, col, message, hint);
  }
  [[noreturn]] void fail(const std::string& ptr, const std::string& message,
                         const std::string& hint) const {
    auto it = values_.find(ptr);
    throw_at(it == values_.end() ? 0 : it->second, message, hint);
  }
  [[noreturn]] void fail_key(const std::string& ptr, const std::string& message,
                             const std::string& hint) const {
    auto it = keys_.find(ptr);
    if (it == keys_.end()) fail(ptr, message, hint);
    throw_at(it->second, message, hint);
  }

 private:
  std::string text_;
  std::string origin_;
  Json root_;
  std::unordered_map<std::string, std::size_t> values_;
  std::unordered_map<std::string, std::size_t> keys_;
};

void Node::fail(const std::string& message, const std::string& hint) const {
  doc_->fail(ptr_, message, hint);
}

void Node::fail_key(const std::string& key, const std::string& message,
                    const std::string& hint) const {
  doc_->fail_key(ptr_ + "/" + escape_pointer(key), message, hint);
}

Object lookup_object(const FiniteGroupoid& g, const Node& n, const std::string& what) {
  std::string id = n.str(what);
  auto x = g.find_object(id);
  if (!x) n.fail("unknown object '" + id + "'", "declare it under \"objects\" or fix the spelling");
  return *x;
}

Arrow lookup_arrow(const FiniteGroupoid& g, const Node& n, const std::string& what) {
  std::string id = n.str(what);
  auto a = g.find_arrow(id);
  if (!a) n.fail("unknown arrow '" + id + "'", "declare it under \"arrows\" or fix the spelling");
  return *a;
}

// Keyed map over every object/arrow of g; complains about unknown and
// missing keys.
template <class Id, class Find, class Name, class All>
std::vector<Node> keyed(const Node& map, const std::string& what, Find find, Name name,
                        All all, const char* kind) {
  map.object(what);
  std::vector<std::optional<Node>> slots(all.size());
  for (const auto& [k, v] : map.members()) {
    auto id = find(k);
    if (!id) {
      map.fail_key(k, std::string("unknown ") + kind + " '" + k + "' in " + what,
                   std::string("only declared ") + kind + "s may appear here");
    }
    slots[index(*id)] = v;
  }
  std::vector<Node> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) {
      map.fail(what + " has no entry for " + kind + " '" + name(all[i]) + "'",
               "add \"" + name(all[i]) + "\": ... to " + what);
    }
    out.push_back(*slots[i]);
  }
  return out;
}

std::vector<Node> per_object(const FiniteGroupoid& g, const Node& map, const std::string& what) {
  return keyed<Object>(
      map, what, [&](const std::string& k) { return g.find_object(k); },
      [&](Object x) { return g.name(x); }, g.objects(), "object");
}

std::vector<Node> per_arrow(const FiniteGroupoid& g, const Node& map, const std::string& what) {
  return keyed<Arrow>(
      map, what, [&](const std::string& k) { return g.find_arrow(k); },
      [&](Arrow a) { return g.name(a); }, g.arrows(), "arrow");
}

}  // namespace

std::string to_string(FileKind kind) {
  switch (kind) {
    case FileKind::groupoid: return "groupoid";
    case FileKind::module: return "module";
    case FileKind::sheaf: return "sheaf";
    case FileKind::functor: return "functor";
    case FileKind::span: return "span";
    case FileKind::graph: return "graph";
  }
  return "?";
}

std::optional<FileKind> parse_file_kind(std::string_view name) {
  for (auto k : {FileKind::groupoid, FileKind::module, FileKind::sheaf, FileKind::functor,
                 FileKind::span, FileKind::graph}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

FileKind detect_kind(std::string_view text, std::string_view origin) {
  Doc doc(text, origin);
  Node root = doc.root();
  root.object("the document");
  if (root.has("apex")) return FileKind::span;
  if (root.has("vertices")) return FileKind::graph;
  if (root.has("stalks")) return FileKind::sheaf;
  if (root.has("action")) return FileKind::module;
  if (auto objs = root.find("objects")) {
    return objs->json().is_array() ? FileKind::groupoid : FileKind::functor;
  }
  root.fail("cannot tell what kind of document this is",
            "pass --kind groupoid|module|sheaf|functor|span|graph");
}

FiniteGroupoid parse_groupoid(std::string_view text, std::string_view origin) {
  Doc doc(text, origin);
  Node root = doc.root();
  root.object("a groupoid document");
  root.allow_keys({"objects", "arrows", "compose", "inv", "units"});

  Node objs = root.at("objects");
  objs.array("\"objects\"");
  std::vector<std::string> objects;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < objs.size(); ++i) {
    std::string id = objs[i].str("an object id");
    if (!seen.insert(id).second) objs[i].fail("duplicate object id '" + id + "'", "object ids must be unique");
    objects.push_back(id);
  }

  Node arrs = root.at("arrows");
  arrs.array("\"arrows\"");
  std::vector<FiniteGroupoid::ArrowSpec> arrows;
  seen.clear();
  for (std::size_t i = 0; i < arrs.size(); ++i) {
    Node a = arrs[i];
    a.object("an arrow");
    a.allow_keys({"id", "src", "dst"});
    std::string id = a.at("id").str("an arrow id");
    if (!seen.insert(id).second) a.at("id").fail("duplicate arrow id '" + id + "'", "arrow ids must be unique");
    auto endpoint = [&](const char* key) {
      Node n = a.at(key);
      std::string name = n.str(key);
      for (std::size_t k = 0; k < objects.size(); ++k) {
        if (objects[k] == name) return object_at(k);
      }
      n.fail("unknown object '" + name + "'", "declare it under \"objects\" or fix the spelling");
    };
    Object src = endpoint("src");
    Object dst = endpoint("dst");
    arrows.push_back({id, src, dst});
  }
  auto arrow_id = [&](const Node& n) {
    std::string name = n.str("an arrow id");
    for (std::size_t k = 0; k < arrows.size(); ++k) {
      if (arrows[k].name == name) return arrow_at(k);
    }
    n.fail("unknown arrow '" + name + "'", "declare it under \"arrows\" or fix the spelling");
  };

  Node comp = root.at("compose");
  comp.array("\"compose\"");
  std::vector<FiniteGroupoid::CompositionEntry> entries;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    Node e = comp[i];
    if (!e.json().is_array() || e.size() != 3) {
      e.fail("a compose entry must be a triple [g, h, gh]", "write e.g. [\"(1,2)\", \"(2,1)\", \"(1,1)\"]");
    }
    entries.push_back({arrow_id(e[0]), arrow_id(e[1]), arrow_id(e[2])});
  }

  Node inv = root.at("inv");
  inv.object("\"inv\"");
  std::vector<std::optional<Arrow>> inverses(arrows.size());
  for (const auto& [k, v] : inv.members()) {
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      if (arrows[i].name == k) at = i;
    }
    if (!at) inv.fail_key(k, "unknown arrow '" + k + "' in \"inv\"", "only declared arrows may appear here");
    inverses[*at] = arrow_id(v);
  }
  std::vector<Arrow> inv_list;
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    if (!inverses[i]) {
      inv.fail("\"inv\" has no entry for arrow '" + arrows[i].name + "'",
               "add \"" + arrows[i].name + "\": <its inverse>");
    }
    inv_list.push_back(*inverses[i]);
  }

  Node units = root.at("units");
  units.object("\"units\"");
  std::vector<std::optional<Arrow>> unit_slots(objects.size());
  for (const auto& [k, v] : units.members()) {
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < objects.size(); ++i) {
      if (objects[i] == k) at = i;
    }
    if (!at) units.fail_key(k, "unknown object '" + k + "' in \"units\"", "only declared objects may appear here");
    unit_slots[*at] = arrow_id(v);
  }
  std::vector<Arrow> unit_list;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (!unit_slots[i]) {
      units.fail("\"units\" has no entry for object '" + objects[i] + "'",
                 "add \"" + objects[i] + "\": <its identity arrow>");
    }
    unit_list.push_back(*unit_slots[i]);
  }

  try {
    return FiniteGroupoid(std::move(objects), std::move(arrows), std::move(unit_list),
                          std::move(inv_list), entries);
  } catch (const InvalidArgument& e) {
    comp.fail(e.what(), "each pair g,h may appear at most once in \"compose\"");
  }
}

GModule parse_module(std::string_view text, const GroupoidPtr& g, std::string_view origin) {
  Doc doc(text, origin);
  Node root = doc.root();
  root.object("a module document");
  root.allow_keys({"ring", "rank", "action", "groupoid"});
  Ring ring = root.at("ring").ring();
  std::size_t rank = root.at("rank").count("\"rank\"");
  auto entries = per_arrow(*g, root.at("action"), "\"action\"");
  std::vector<Matrix> action;
  for (const Node& n : entries) action.push_back(n.matrix(ring, rank, rank));
  return GModule(g, ring, rank, std::move(action));
}

GSheaf parse_sheaf(std::string_view text, const GroupoidPtr& g, std::string_view origin) {
  Doc doc(text, origin);
  Node root = doc.root();
  root.object("a sheaf document");
  root.allow_keys({"ring", "stalks", "transport", "groupoid"});
  Ring ring = root.at("ring").ring();
  std::vector<std::size_t> ranks;
  for (const Node& n : per_object(*g, root.at("stalks"), "\"stalks\"")) {
    ranks.push_back(n.count("a stalk rank"));
  }
  auto entries = per_arrow(*g, root.at("transport"), "\"transport\"");
  std::vector<Matrix> transports;
  for (Arrow a : g->arrows()) {
    transports.push_back(entries[index(a)].matrix(ring, ranks[index(g->target(a))],
                                                  ranks[index(g->source(a))]));
  }
  return GSheaf(g, ring, std::move(ranks), std::move(transports));
}

GroupoidFunctor parse_functor(std::string_view text, const GroupoidPtr& source,
                              const GroupoidPtr& target, std::string_view origin) {
  Doc doc(text, origin);
  Node root = doc.root();
  root.object("a functor document");
  root.allow_keys({"objects", "arrows", "source", "target"});
  GroupoidFunctor f{source, target, {}, {}};
  for (const Node& n : per_object(*source, root.at("objects"), "\"objects\"")) {
    f.obj_map.push_back(lookup_object(*target, n, "an object id"));
  }
  for (const Node& n : per_arrow(*source, root.at("arrows"), "\"arrows\"")) {
    f.arr_map.push_back(lookup_arrow(*target, n, "an arrow id"));
  }
  return f;
}

GraphSpec parse_graph(std::string_view text, std::string_view origin) {
  Doc doc(text, origin);
  Node root = doc.root();
  root.object("a graph document");
  root.allow_keys({"vertices", "edges"});
  GraphSpec spec;
  Node vs = root.at("vertices");
  vs.array("\"vertices\"");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    std::string v = vs[i].str("a vertex id");
    if (!seen.insert(v).second) vs[i].fail("duplicate vertex '" + v + "'", "vertex ids must be unique");
    spec.vertices.push_back(v);
  }
  Node es = root.at("edges");
  es.array("\"edges\"");
  for (std::size_t i = 0; i < es.size(); ++i) {
    Node e = es[i];
    GraphSpec::Edge edge;
    std::optional<Node> src, dst;
    if (e.json().is_array() && e.size() == 2) {
      src = e[0];
      dst = e[1];
    } else if (e.json().is_object()) {
      e.allow_keys({"id", "src", "dst"});
      if (auto id = e.find("id")) edge.name = id->str("an edge id");
      src = e.at("src");
      dst = e.at("dst");
    } else {
      e.fail("an edge must be [src, dst] or {\"id\", \"src\", \"dst\"}", "write e.g. [\"v\", \"w\"]");
    }
    edge.src = src->str("an edge source");
    edge.dst = dst->str("an edge target");
    if (!seen.count(edge.src)) src->fail("unknown vertex '" + edge.src + "'", "declare it under \"vertices\"");
    if (!seen.count(edge.dst)) dst->fail("unknown vertex '" + edge.dst + "'", "declare it under \"vertices\"");
    spec.edges.push_back(std::move(edge));
  }
  return spec;
}

// ---- files -----------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::filesystem::path referenced(const std::filesystem::path& from, const std::string& text,
                                 const std::string& key, const char* what) {
  Doc doc(text, from.string());
  Node root = doc.root();
  root.object("the document");
  auto ref = root.find(key);
  if (!ref) {
    root.fail(std::string(what) + " names no " + key + " file",
              "add \"" + key + "\": \"<file>\" or pass it on the command line");
  }
  return from.parent_path() / ref->str("\"" + key + "\"");
}

}  // namespace

GroupoidPtr load_groupoid(const std::filesystem::path& path) {
  return share(parse_groupoid(read_file(path), path.string()));
}

GModule load_module(const std::filesystem::path& path, GroupoidPtr g) {
  std::string text = read_file(path);
  if (!g) g = load_groupoid(referenced(path, text, "groupoid", "the module"));
  return parse_module(text, g, path.string());
}

GSheaf load_sheaf(const std::filesystem::path& path, GroupoidPtr g) {
  std::string text = read_file(path);
  if (!g) g = load_groupoid(referenced(path, text, "groupoid", "the sheaf"));
  return parse_sheaf(text, g, path.string());
}

GroupoidFunctor load_functor(const std::filesystem::path& path, GroupoidPtr source,
                             GroupoidPtr target) {
  std::string text = read_file(path);
  if (!source) source = load_groupoid(referenced(path, text, "source", "the functor"));
  if (!target) target = load_groupoid(referenced(path, text, "target", "the functor"));
  return parse_functor(text, source, target, path.string());
}

MoritaSpan load_span(const std::filesystem::path& path) {
  std::string text = read_file(path);
  Doc doc(text, path.string());
  Node root = doc.root();
  root.object("a span document");
  root.allow_keys({"apex", "left", "right"});
  auto dir = path.parent_path();
  GroupoidPtr apex = load_groupoid(dir / root.at("apex").str("\"apex\""));
  auto left = load_functor(dir / root.at("left").str("\"left\""), apex);
  auto right = load_functor(dir / root.at("right").str("\"right\""), apex);
  return MoritaSpan{std::move(left), std::move(right)};
}

GraphSpec load_graph(const std::filesystem::path& path) {
  return parse_graph(read_file(path), path.string());
}

// ---- output -----------------------------------------------------------------------

using detail::matrix_json;
using detail::render;

std::string to_json(const FiniteGroupoid& g) {
  Json doc = Json::object();
  Json objects = Json::array();
  for (Object x : g.objects()) objects.push_back(g.name(x));
  doc["objects"] = objects;
  Json arrows = Json::array();
  for (Arrow a : g.arrows()) {
    Json spec = Json::object();
    spec["id"] = g.name(a);
    spec["src"] = g.name(g.source(a));
    spec["dst"] = g.name(g.target(a));
    arrows.push_back(spec);
  }
  doc["arrows"] = arrows;
  Json compose = Json::array();
  for (Arrow a : g.arrows()) {
    for (Arrow b : g.arrows()) {
      if (auto ab = g.table_entry(a, b)) compose.push_back(Json::array({g.name(a), g.name(b), g.name(*ab)}));
    }
  }
  doc["compose"] = compose;
  Json inv = Json::object();
  for (Arrow a : g.arrows()) inv[g.name(a)] = g.name(g.inverse(a));
  doc["inv"] = inv;
  Json units = Json::object();
  for (Object x : g.objects()) units[g.name(x)] = g.name(g.unit(x));
  doc["units"] = units;
  return render(doc);
}

std::string to_json(const GModule& m, std::string_view groupoid_ref) {
  const auto& G = m.groupoid();
  Json doc = Json::object();
  if (!groupoid_ref.empty()) doc["groupoid"] = std::string(groupoid_ref);
  doc["ring"] = m.ring().name();
  doc["rank"] = m.rank();
  Json action = Json::object();
  for (Arrow a : G.arrows()) action[G.name(a)] = matrix_json(m.action(a));
  doc["action"] = action;
  return render(doc);
}

std::string to_json(const GSheaf& e, std::string_view groupoid_ref) {
  const auto& G = e.groupoid();
  Json doc = Json::object();
  if (!groupoid_ref.empty()) doc["groupoid"] = std::string(groupoid_ref);
  doc["ring"] = e.ring().name();
  Json stalks = Json::object();
  for (Object x : G.objects()) stalks[G.name(x)] = e.stalk_rank(x);
  doc["stalks"] = stalks;
  Json transport = Json::object();
  for (Arrow a : G.arrows()) transport[G.name(a)] = matrix_json(e.transport(a));
  doc["transport"] = transport;
  return render(doc);
}

std::string to_json(const GroupoidFunctor& f, std::string_view source_ref,
                    std::string_view target_ref) {
  Json doc = Json::object();
  if (!source_ref.empty()) doc["source"] = std::string(source_ref);
  if (!target_ref.empty()) doc["target"] = std::string(target_ref);
  Json objects = Json::object();
  for (Object x : f.source->objects()) objects[f.source->name(x)] = f.target->name(f(x));
  doc["objects"] = objects;
  Json arrows = Json::object();
  for (Arrow a : f.source->arrows()) arrows[f.source->name(a)] = f.target->name(f(a));
  doc["arrows"] = arrows;
  return render(doc);
}

std::string to_json(const GraphSpec& spec) {
  Json doc = Json::object();
  doc["vertices"] = spec.vertices;
  Json edges = Json::array();
  for (const auto& e : spec.edges) {
    if (e.name.empty()) {
      edges.push_back(Json::array({e.src, e.dst}));
    } else {
      Json o = Json::object();
      o["id"] = e.name;
      o["src"] = e.src;
      o["dst"] = e.dst;
      edges.push_back(o);
    }
  }
  doc["edges"] = edges;
  return render(doc);
}

std::string span_json(std::string_view apex_ref, std::string_view left_ref,
                      std::string_view right_ref) {
  Json doc = Json::object();
  doc["apex"] = std::string(apex_ref);
  doc["left"] = std::string(left_ref);
  doc["right"] = std::string(right_ref);
  return render(doc);
}

}  // namespace etale
