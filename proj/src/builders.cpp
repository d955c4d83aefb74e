#include "etale/builders.hpp"

#include <algorithm>
#include <map>

#include "etale/error.hpp"
#include "random_family.hpp"

namespace etale {

namespace {

using Spec = FiniteGroupoid::ArrowSpec;
using Entry = FiniteGroupoid::CompositionEntry;

// Pair groupoid on the objects [first, first + n) of a larger groupoid,
// appending to the given tables.
void append_pair_block(const std::vector<std::string>& names, std::size_t first, std::size_t n,
                       std::vector<Spec>& arrows, std::vector<Arrow>& units,
                       std::vector<Arrow>& inverses, std::vector<Entry>& compose) {
  const std::size_t base = arrows.size();
  auto id = [&](std::size_t i, std::size_t j) { return arrow_at(base + i * n + j); };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      arrows.push_back({"(" + names[first + i] + "," + names[first + j] + ")",
                        object_at(first + j), object_at(first + i)});
      inverses.push_back(id(j, i));
    }
  }
  for (std::size_t i = 0; i < n; ++i) units[first + i] = id(i, i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) compose.push_back({id(i, j), id(j, k), id(i, k)});
    }
  }
}

std::vector<std::string> element_names(const GroupTable& table, std::vector<std::string> names) {
  if (names.empty()) {
    for (std::size_t i = 0; i < table.size(); ++i) names.push_back(std::to_string(i));
  }
  if (names.size() != table.size()) {
    throw InvalidArgument("group: " + std::to_string(names.size()) + " names for " +
                          std::to_string(table.size()) + " elements");
  }
  return names;
}

struct GroupData {
  std::size_t identity;
  std::vector<std::size_t> inverse;
};

GroupData check_group(const GroupTable& t) {
  const std::size_t n = t.size();
  if (n == 0) throw InvalidArgument("not a group: empty table");
  for (std::size_t a = 0; a < n; ++a) {
    if (t[a].size() != n) throw InvalidArgument("not a group: row " + std::to_string(a) + " has the wrong length");
    for (std::size_t b = 0; b < n; ++b) {
      if (t[a][b] >= n) throw InvalidArgument("not a group: entry out of range");
    }
  }
  std::size_t e = n;
  for (std::size_t c = 0; c < n && e == n; ++c) {
    bool ok = true;
    for (std::size_t a = 0; a < n; ++a) ok = ok && t[c][a] == a && t[a][c] == a;
    if (ok) e = c;
  }
  if (e == n) throw InvalidArgument("not a group: no identity element");
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (t[t[a][b]][c] != t[a][t[b][c]]) {
          throw InvalidArgument("not a group: associativity fails at (" + std::to_string(a) + "," +
                                std::to_string(b) + "," + std::to_string(c) + ")");
        }
      }
    }
  }
  GroupData d{e, std::vector<std::size_t>(n, n)};
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (t[a][b] == e && t[b][a] == e) d.inverse[a] = b;
    }
    if (d.inverse[a] == n) throw InvalidArgument("not a group: " + std::to_string(a) + " has no inverse");
  }
  return d;
}

}  // namespace

FiniteGroupoid pair_groupoid(std::size_t n) {
  if (n < 1) throw InvalidArgument("pair_groupoid needs n >= 1");
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(std::to_string(i));
  std::vector<Spec> arrows;
  std::vector<Arrow> units(n), inverses;
  std::vector<Entry> compose;
  append_pair_block(names, 0, n, arrows, units, inverses, compose);
  return FiniteGroupoid(names, std::move(arrows), std::move(units), std::move(inverses), compose);
}

GroupTable cyclic_table(std::size_t n) {
  if (n < 1) throw InvalidArgument("cyclic_table needs n >= 1");
  GroupTable t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return t;
}

FiniteGroupoid group_groupoid(const GroupTable& table, std::vector<std::string> names) {
  auto d = check_group(table);
  names = element_names(table, std::move(names));
  const std::size_t n = table.size();
  std::vector<Spec> arrows;
  std::vector<Arrow> inverses;
  std::vector<Entry> compose;
  for (std::size_t a = 0; a < n; ++a) {
    arrows.push_back({names[a], object_at(0), object_at(0)});
    inverses.push_back(arrow_at(d.inverse[a]));
    for (std::size_t b = 0; b < n; ++b) compose.push_back({arrow_at(a), arrow_at(b), arrow_at(table[a][b])});
  }
  return FiniteGroupoid({"*"}, std::move(arrows), {arrow_at(d.identity)}, std::move(inverses),
                        compose);
}

FiniteGroupoid action_groupoid(const GroupTable& table, const std::vector<std::string>& points,
                               const std::vector<std::vector<std::size_t>>& act,
                               std::vector<std::string> names) {
  auto d = check_group(table);
  names = element_names(table, std::move(names));
  const std::size_t n = table.size();
  const std::size_t m = points.size();
  if (act.size() != n) throw InvalidArgument("not an action: one row per group element expected");
  for (std::size_t g = 0; g < n; ++g) {
    if (act[g].size() != m) throw InvalidArgument("not an action: row " + names[g] + " has the wrong length");
    for (std::size_t x = 0; x < m; ++x) {
      if (act[g][x] >= m) throw InvalidArgument("not an action: point index out of range");
    }
  }
  for (std::size_t x = 0; x < m; ++x) {
    if (act[d.identity][x] != x) throw InvalidArgument("not an action: identity moves " + points[x]);
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t h = 0; h < n; ++h) {
        if (act[g][act[h][x]] != act[table[g][h]][x]) {
          throw InvalidArgument("not an action: " + names[g] + ".(" + names[h] + "." + points[x] +
                                ") differs from (" + names[g] + names[h] + ")." + points[x]);
        }
      }
    }
  }
  auto id = [&](std::size_t g, std::size_t x) { return arrow_at(g * m + x); };
  std::vector<Spec> arrows;
  std::vector<Arrow> inverses, units;
  std::vector<Entry> compose;
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t x = 0; x < m; ++x) {
      arrows.push_back({"(" + names[g] + "," + points[x] + ")", object_at(x), object_at(act[g][x])});
      inverses.push_back(id(d.inverse[g], act[g][x]));
      for (std::size_t h = 0; h < n; ++h) {
        // (g, h.x)(h, x) = (gh, x) is listed under its right factor.
        compose.push_back({id(g, act[h][x]), id(h, x), id(table[g][h], x)});
      }
    }
  }
  for (std::size_t x = 0; x < m; ++x) units.push_back(id(d.identity, x));
  return FiniteGroupoid(points, std::move(arrows), std::move(units), std::move(inverses), compose);
}

FiniteGroupoid acyclic_graph_groupoid(const GraphSpec& spec) {
  const std::size_t nv = spec.vertices.size();
  std::map<std::string, std::size_t> vid;
  for (std::size_t v = 0; v < nv; ++v) {
    if (!vid.emplace(spec.vertices[v], v).second) {
      throw InvalidArgument("graph: duplicate vertex " + spec.vertices[v]);
    }
  }
  struct E {
    std::string name;
    std::size_t src, dst;
  };
  std::vector<E> edges;
  for (std::size_t i = 0; i < spec.edges.size(); ++i) {
    const auto& e = spec.edges[i];
    auto s = vid.find(e.src);
    auto t = vid.find(e.dst);
    if (s == vid.end()) throw InvalidArgument("graph: edge " + std::to_string(i) + " starts at unknown vertex " + e.src);
    if (t == vid.end()) throw InvalidArgument("graph: edge " + std::to_string(i) + " ends at unknown vertex " + e.dst);
    edges.push_back({e.name.empty() ? "e" + std::to_string(i) : e.name, s->second, t->second});
  }

  std::vector<std::vector<std::size_t>> out(nv), in(nv);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out[edges[i].src].push_back(i);
    in[edges[i].dst].push_back(i);
  }
  // Cycle check by colouring DFS.
  std::vector<int> colour(nv, 0);
  auto visit = [&](auto&& self, std::size_t v) -> void {
    colour[v] = 1;
    for (std::size_t e : out[v]) {
      std::size_t w = edges[e].dst;
      if (colour[w] == 1) {
        throw InvalidArgument("graph has a cycle through vertex " + spec.vertices[w] +
                              "; its boundary path space is infinite, only acyclic graphs are supported");
      }
      if (colour[w] == 0) self(self, w);
    }
    colour[v] = 2;
  };
  for (std::size_t v = 0; v < nv; ++v) {
    if (colour[v] == 0) visit(visit, v);
  }

  std::vector<std::string> objects;
  std::vector<Spec> arrows;
  std::vector<Arrow> units, inverses;
  std::vector<Entry> compose;
  for (std::size_t s = 0; s < nv; ++s) {
    if (!out[s].empty()) continue;
    // Paths into s, as edge index sequences, grown backwards from the sink.
    std::vector<std::vector<std::size_t>> paths{{}};
    std::vector<std::size_t> starts{s};
    for (std::size_t at = 0; at < paths.size(); ++at) {
      for (std::size_t e : in[starts[at]]) {
        std::vector<std::size_t> p{e};
        p.insert(p.end(), paths[at].begin(), paths[at].end());
        paths.push_back(std::move(p));
        starts.push_back(edges[e].src);
      }
    }
    std::sort(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    const std::size_t first = objects.size();
    for (const auto& p : paths) {
      std::string name;
      if (p.empty()) name = spec.vertices[s];
      for (std::size_t e : p) name += edges[e].name;
      objects.push_back(std::move(name));
    }
    units.resize(objects.size());
    append_pair_block(objects, first, paths.size(), arrows, units, inverses, compose);
  }
  return FiniteGroupoid(std::move(objects), std::move(arrows), std::move(units),
                        std::move(inverses), compose);
}

FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  const std::size_t no = a.num_objects();
  const std::size_t na = a.num_arrows();
  std::vector<std::string> objects;
  std::vector<Spec> arrows;
  std::vector<Arrow> units, inverses;
  std::vector<Entry> compose;
  for (Object x : a.objects()) {
    objects.push_back(a.name(x));
    units.push_back(a.unit(x));
  }
  for (Object x : b.objects()) {
    objects.push_back(b.name(x));
    units.push_back(arrow_at(na + index(b.unit(x))));
  }
  for (Arrow g : a.arrows()) {
    arrows.push_back({a.name(g), a.source(g), a.target(g)});
    inverses.push_back(a.inverse(g));
    for (Arrow h : a.arrows()) {
      if (auto gh = a.compose(g, h)) compose.push_back({g, h, *gh});
    }
  }
  for (Arrow g : b.arrows()) {
    arrows.push_back({b.name(g), object_at(no + index(b.source(g))), object_at(no + index(b.target(g)))});
    inverses.push_back(arrow_at(na + index(b.inverse(g))));
    for (Arrow h : b.arrows()) {
      if (auto gh = b.compose(g, h)) {
        compose.push_back({arrow_at(na + index(g)), arrow_at(na + index(h)), arrow_at(na + index(*gh))});
      }
    }
  }
  return FiniteGroupoid(std::move(objects), std::move(arrows), std::move(units),
                        std::move(inverses), compose);
}

GSheaf random_sheaf(const GroupoidPtr& g, const Ring& ring, std::size_t max_rank,
                    std::uint64_t seed) {
  detail::Rng rng(seed);
  auto ranks = detail::random_component_ranks(*g, max_rank, rng);
  auto family = detail::random_transport_family(*g, ring, ranks, rng);
  return GSheaf(g, ring, std::move(family.ranks), std::move(family.transports));
}

GSheaf random_sheaf_with_ranks(const GroupoidPtr& g, const Ring& ring,
                               const std::vector<std::size_t>& stalk_ranks, std::uint64_t seed) {
  detail::Rng rng(seed);
  auto family = detail::random_transport_family(*g, ring, stalk_ranks, rng);
  return GSheaf(g, ring, std::move(family.ranks), std::move(family.transports));
}

}  // namespace etale
