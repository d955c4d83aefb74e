#include "etale/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "etale/error.hpp"

namespace etale {

FiniteGroupoid::FiniteGroupoid(std::vector<std::string> objects,
                               std::vector<ArrowSpec> arrows, std::vector<Arrow> units,
                               std::vector<Arrow> inverses,
                               std::span<const CompositionEntry> composition)
    : object_names_(std::move(objects)),
      arrows_(std::move(arrows)),
      units_(std::move(units)),
      inverses_(std::move(inverses)),
      table_(arrows_.size() * arrows_.size()) {
  const std::size_t n_obj = object_names_.size();
  const std::size_t n_arr = arrows_.size();
  std::set<std::string_view> seen;
  for (const auto& name : object_names_) {
    if (!seen.insert(name).second) throw InvalidArgument("duplicate object id '" + name + "'");
  }
  seen.clear();
  for (const auto& a : arrows_) {
    if (!seen.insert(a.name).second) throw InvalidArgument("duplicate arrow id '" + a.name + "'");
    if (index(a.source) >= n_obj || index(a.target) >= n_obj) {
      throw InvalidArgument("arrow '" + a.name + "' has an endpoint out of range");
    }
  }
  if (units_.size() != n_obj) {
    throw InvalidArgument("unit map has " + std::to_string(units_.size()) +
                          " entries for " + std::to_string(n_obj) + " objects");
  }
  if (inverses_.size() != n_arr) {
    throw InvalidArgument("inverse map has " + std::to_string(inverses_.size()) +
                          " entries for " + std::to_string(n_arr) + " arrows");
  }
  auto check_arrow = [&](Arrow g, const char* what) {
    if (index(g) >= n_arr) {
      throw InvalidArgument(std::string(what) + " refers to arrow index " +
                            std::to_string(index(g)) + " out of range");
    }
  };
  for (Arrow u : units_) check_arrow(u, "unit map");
  for (Arrow i : inverses_) check_arrow(i, "inverse map");
  for (const auto& e : composition) {
    check_arrow(e.left, "composition");
    check_arrow(e.right, "composition");
    check_arrow(e.product, "composition");
    auto& slot = table_[index(e.left) * n_arr + index(e.right)];
    if (slot && *slot != e.product) {
      throw InvalidArgument("conflicting composition entries for " + name(e.left) +
                            "*" + name(e.right));
    }
    slot = e.product;
  }
}

std::optional<Arrow> FiniteGroupoid::table_entry(Arrow g, Arrow h) const {
  return table_[index(g) * arrows_.size() + index(h)];
}

std::optional<Arrow> FiniteGroupoid::compose(Arrow g, Arrow h) const {
  if (source(g) != target(h)) return std::nullopt;
  return table_entry(g, h);
}

Arrow FiniteGroupoid::product(Arrow g, Arrow h) const {
  auto p = compose(g, h);
  if (!p) throw InvalidArgument("product " + name(g) + "*" + name(h) + " is undefined");
  return *p;
}

bool FiniteGroupoid::is_unit(Arrow g) const { return unit(source(g)) == g; }

std::optional<Object> FiniteGroupoid::find_object(std::string_view name) const {
  for (std::size_t i = 0; i < object_names_.size(); ++i) {
    if (object_names_[i] == name) return object_at(i);
  }
  return std::nullopt;
}

std::optional<Arrow> FiniteGroupoid::find_arrow(std::string_view name) const {
  for (std::size_t i = 0; i < arrows_.size(); ++i) {
    if (arrows_[i].name == name) return arrow_at(i);
  }
  return std::nullopt;
}

Object FiniteGroupoid::object_named(std::string_view name) const {
  if (auto x = find_object(name)) return *x;
  throw InvalidArgument("unknown object id '" + std::string(name) + "'");
}

Arrow FiniteGroupoid::arrow_named(std::string_view name) const {
  if (auto g = find_arrow(name)) return *g;
  throw InvalidArgument("unknown arrow id '" + std::string(name) + "'");
}

std::vector<Object> FiniteGroupoid::objects() const {
  std::vector<Object> out(num_objects());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = object_at(i);
  return out;
}

std::vector<Arrow> FiniteGroupoid::arrows() const {
  std::vector<Arrow> out(num_arrows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = arrow_at(i);
  return out;
}

std::vector<Arrow> FiniteGroupoid::hom(Object from, Object to) const {
  std::vector<Arrow> out;
  for (Arrow g : arrows()) {
    if (source(g) == from && target(g) == to) out.push_back(g);
  }
  return out;
}

Report validate_groupoid(const FiniteGroupoid& G) {
  for (Object x : G.objects()) {
    Arrow u = G.unit(x);
    if (G.source(u) != x || G.target(u) != x) {
      return Report::fail("unit", G.name(x));
    }
  }
  for (Arrow g : G.arrows()) {
    for (Arrow h : G.arrows()) {
      bool composable = G.source(g) == G.target(h);
      bool present = G.table_entry(g, h).has_value();
      if (composable != present) {
        return Report::fail("composition", G.name(g) + "*" + G.name(h) +
                                               (composable ? " missing" : " not composable"));
      }
    }
  }
  for (Arrow g : G.arrows()) {
    for (Arrow h : G.arrows()) {
      auto gh = G.compose(g, h);
      if (!gh) continue;
      if (G.source(*gh) != G.source(h) || G.target(*gh) != G.target(g)) {
        return Report::fail("composition endpoints", G.name(g) + "*" + G.name(h));
      }
    }
  }
  for (Arrow g : G.arrows()) {
    if (G.compose(G.unit(G.target(g)), g) != g || G.compose(g, G.unit(G.source(g))) != g) {
      return Report::fail("identity law", G.name(g));
    }
  }
  for (Arrow g : G.arrows()) {
    Arrow inv = G.inverse(g);
    if (G.compose(inv, g) != G.unit(G.source(g)) || G.compose(g, inv) != G.unit(G.target(g))) {
      return Report::fail("inverse law", G.name(g));
    }
  }
  for (Arrow g : G.arrows()) {
    for (Arrow h : G.arrows()) {
      auto gh = G.compose(g, h);
      if (!gh) continue;
      for (Arrow k : G.arrows()) {
        auto hk = G.compose(h, k);
        if (!hk) continue;
        if (G.compose(*gh, k) != G.compose(g, *hk)) {
          return Report::fail("associativity",
                              G.name(g) + "," + G.name(h) + "," + G.name(k));
        }
      }
    }
  }
  return Report::pass();
}

CompactOpen make_compact_open(const FiniteGroupoid& g, std::vector<Object> points) {
  for (Object x : points) {
    if (index(x) >= g.num_objects()) {
      throw InvalidArgument("object index " + std::to_string(index(x)) + " out of range");
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  return points;
}

CompactOpen all_objects(const FiniteGroupoid& g) { return g.objects(); }

std::vector<CompactOpen> enumerate_compact_opens(const FiniteGroupoid& g) {
  const std::size_t n = g.num_objects();
  if (n > kBisectionArrowLimit) {
    throw SizeLimitExceeded("enumerate_compact_opens: " + std::to_string(n) +
                            " objects exceeds the limit of " +
                            std::to_string(kBisectionArrowLimit));
  }
  std::vector<CompactOpen> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    CompactOpen u;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) u.push_back(object_at(i));
    }
    out.push_back(std::move(u));
  }
  std::stable_sort(out.begin(), out.end(), [](const CompactOpen& a, const CompactOpen& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

bool is_bisection(const FiniteGroupoid& g, std::span<const Arrow> arrows) {
  std::vector<bool> src(g.num_objects()), tgt(g.num_objects());
  std::vector<bool> seen(g.num_arrows());
  for (Arrow a : arrows) {
    if (index(a) >= g.num_arrows()) {
      throw InvalidArgument("unknown arrow index " + std::to_string(index(a)));
    }
    if (seen[index(a)]) continue;
    seen[index(a)] = true;
    auto s = index(g.source(a));
    auto t = index(g.target(a));
    if (src[s] || tgt[t]) return false;
    src[s] = tgt[t] = true;
  }
  return true;
}

Bisection Bisection::from_arrows(const FiniteGroupoid& g, std::vector<Arrow> arrows) {
  if (!is_bisection(g, arrows)) {
    std::string names;
    for (Arrow a : arrows) names += (names.empty() ? "" : ",") + g.name(a);
    throw InvalidArgument("{" + names + "} is not a bisection");
  }
  std::sort(arrows.begin(), arrows.end());
  arrows.erase(std::unique(arrows.begin(), arrows.end()), arrows.end());
  return Bisection(std::move(arrows));
}

Bisection Bisection::singleton(const FiniteGroupoid& g, Arrow a) {
  return from_arrows(g, {a});
}

Bisection Bisection::units(const FiniteGroupoid& g, const CompactOpen& points) {
  std::vector<Arrow> arrows;
  for (Object x : points) arrows.push_back(g.unit(x));
  return from_arrows(g, std::move(arrows));
}

bool Bisection::contains(Arrow a) const {
  return std::binary_search(arrows_.begin(), arrows_.end(), a);
}

Bisection bisection_product(const FiniteGroupoid& g, const Bisection& u,
                            const Bisection& v) {
  std::vector<Arrow> out;
  for (Arrow a : u.arrows()) {
    for (Arrow b : v.arrows()) {
      if (auto ab = g.compose(a, b)) out.push_back(*ab);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (!is_bisection(g, out)) {
    throw std::logic_error("bisection_product produced a non-bisection; groupoid invalid?");
  }
  return Bisection(std::move(out));
}

Bisection bisection_inverse(const FiniteGroupoid& g, const Bisection& u) {
  std::vector<Arrow> out;
  for (Arrow a : u.arrows()) out.push_back(g.inverse(a));
  std::sort(out.begin(), out.end());
  return Bisection(std::move(out));
}

bool is_idempotent(const FiniteGroupoid& g, const Bisection& u) {
  return std::all_of(u.arrows().begin(), u.arrows().end(),
                     [&](Arrow a) { return g.is_unit(a); });
}

CompactOpen source_set(const FiniteGroupoid& g, const Bisection& u) {
  std::vector<Object> pts;
  for (Arrow a : u.arrows()) pts.push_back(g.source(a));
  return make_compact_open(g, std::move(pts));
}

CompactOpen target_set(const FiniteGroupoid& g, const Bisection& u) {
  std::vector<Object> pts;
  for (Arrow a : u.arrows()) pts.push_back(g.target(a));
  return make_compact_open(g, std::move(pts));
}

std::vector<Bisection> enumerate_bisections(const FiniteGroupoid& g) {
  const std::size_t n = g.num_arrows();
  if (n > kBisectionArrowLimit) {
    throw SizeLimitExceeded("enumerate_bisections: " + std::to_string(n) +
                            " arrows exceeds the limit of " +
                            std::to_string(kBisectionArrowLimit));
  }
  std::vector<Bisection> out;
  std::vector<Arrow> current;
  std::vector<bool> src(g.num_objects()), tgt(g.num_objects());
  // Depth-first over arrows in declaration order, pruning as soon as source
  // or target repeats.
  auto dfs = [&](auto&& self, std::size_t next) -> void {
    out.push_back(Bisection::from_arrows(g, current));
    for (std::size_t i = next; i < n; ++i) {
      Arrow a = arrow_at(i);
      auto s = index(g.source(a));
      auto t = index(g.target(a));
      if (src[s] || tgt[t]) continue;
      src[s] = tgt[t] = true;
      current.push_back(a);
      self(self, i + 1);
      current.pop_back();
      src[s] = tgt[t] = false;
    }
  };
  dfs(dfs, 0);
  std::stable_sort(out.begin(), out.end(), [](const Bisection& a, const Bisection& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.arrows() < b.arrows();
  });
  return out;
}

std::string to_string(const FiniteGroupoid& g, const Bisection& u) {
  std::string s = "{";
  for (std::size_t i = 0; i < u.arrows().size(); ++i) {
    if (i) s += ",";
    s += g.name(u.arrows()[i]);
  }
  return s + "}";
}

std::string to_string(const FiniteGroupoid& g, const CompactOpen& u) {
  std::string s = "{";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ",";
    s += g.name(u[i]);
  }
  return s + "}";
}

std::vector<Arrow> restriction_embedding(const FiniteGroupoid& g, const CompactOpen& u) {
  std::vector<bool> in(g.num_objects());
  for (Object x : u) in.at(index(x)) = true;
  std::vector<Arrow> out;
  for (Arrow a : g.arrows()) {
    if (in[index(g.source(a))] && in[index(g.target(a))]) out.push_back(a);
  }
  return out;
}

FiniteGroupoid restrict_groupoid(const FiniteGroupoid& g, const CompactOpen& u) {
  CompactOpen pts = make_compact_open(g, u);
  std::vector<std::size_t> obj_pos(g.num_objects(), SIZE_MAX);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    obj_pos[index(pts[i])] = i;
    names.push_back(g.name(pts[i]));
  }
  auto embedding = restriction_embedding(g, pts);
  std::vector<std::size_t> arr_pos(g.num_arrows(), SIZE_MAX);
  std::vector<FiniteGroupoid::ArrowSpec> arrows;
  for (std::size_t i = 0; i < embedding.size(); ++i) {
    Arrow a = embedding[i];
    arr_pos[index(a)] = i;
    arrows.push_back({g.name(a), object_at(obj_pos[index(g.source(a))]),
                      object_at(obj_pos[index(g.target(a))])});
  }
  std::vector<Arrow> units;
  for (Object x : pts) units.push_back(arrow_at(arr_pos[index(g.unit(x))]));
  std::vector<Arrow> inverses;
  for (Arrow a : embedding) inverses.push_back(arrow_at(arr_pos[index(g.inverse(a))]));
  std::vector<FiniteGroupoid::CompositionEntry> composition;
  for (Arrow a : embedding) {
    for (Arrow b : embedding) {
      if (auto ab = g.compose(a, b)) {
        composition.push_back({arrow_at(arr_pos[index(a)]), arrow_at(arr_pos[index(b)]),
                               arrow_at(arr_pos[index(*ab)])});
      }
    }
  }
  return FiniteGroupoid(std::move(names), std::move(arrows), std::move(units),
                        std::move(inverses), composition);
}

std::vector<std::vector<Object>> connected_components(const FiniteGroupoid& g) {
  std::vector<std::size_t> parent(g.num_objects());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Arrow a : g.arrows()) {
    auto s = find(index(g.source(a)));
    auto t = find(index(g.target(a)));
    if (s != t) parent[std::max(s, t)] = std::min(s, t);
  }
  std::vector<std::vector<Object>> out;
  std::vector<std::size_t> slot(g.num_objects(), SIZE_MAX);
  for (Object x : g.objects()) {
    auto root = find(index(x));
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(x);
  }
  return out;
}

}  // namespace etale
