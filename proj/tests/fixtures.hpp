#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "focinet/graph.hpp"
#include "focinet/household.hpp"
#include "focinet/layers.hpp"
#include "focinet/registry.hpp"

namespace fixtures {

using namespace focinet;

/// Small hand-written registries.
class BundleBuilder {
 public:
  BundleBuilder& person(PersonId id, int birth_year, Sex sex = Sex::female, std::optional<int> death = {}) {
    b_.persons.push_back({id, birth_year, sex, death, {}});
    return *this;
  }
  BundleBuilder& migrate(PersonId id, int year, MigrationDirection dir) {
    for (auto& p : b_.persons) {
      if (p.person_id == id) p.migrations.push_back({year, dir});
    }
    return *this;
  }
  BundleBuilder& parent(PersonId child, PersonId parent, ParentKind kind = ParentKind::biological) {
    b_.parent_links.push_back({child, parent, kind});
    return *this;
  }
  BundleBuilder& address(AddressId id, double x, double y) {
    b_.addresses.push_back({id, x, y});
    return *this;
  }
  BundleBuilder& live(PersonId id, int year, AddressId address,
                      MaritalStatus status = MaritalStatus::never_married, std::optional<PersonId> partner = {}) {
    b_.residences.push_back({id, year, address, status, partner});
    return *this;
  }
  BundleBuilder& work(PersonId id, int year, WorkplaceId workplace, bool fictional = false) {
    b_.employment.push_back({id, year, workplace, fictional});
    return *this;
  }
  BundleBuilder& enroll(PersonId id, int year, std::uint64_t institution, std::uint64_t program, std::int64_t grade) {
    b_.enrollment.push_back({id, year, institution, program, grade});
    return *this;
  }
  BundleBuilder& income(PersonId id, int year, double value) {
    b_.income.push_back({id, year, value});
    return *this;
  }
  RegistryBundle build() {
    RegistryBundle out = b_;
    canonicalize(out);
    return out;
  }

 private:
  RegistryBundle b_;
};

inline std::string slurp(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("focinet_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Bipartite view from container member lists plus optional family edges.
inline Graph containers_view(const std::vector<std::vector<PersonId>>& containers,
                             const std::vector<std::pair<PersonId, PersonId>>& family = {},
                             Layer layer = Layer::colleague) {
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < containers.size(); ++c) {
    NodeId cn = NodeId::container(layer, c + 1);
    nodes.push_back(cn);
    for (PersonId p : containers[c]) edges.push_back({NodeId::person(p), cn, layer_bit(layer)});
  }
  for (auto [a, b] : family) edges.push_back({NodeId::person(a), NodeId::person(b), layer_bit(Layer::family)});
  return Graph::from_edges(ViewKind::bipartite, nodes, edges);
}

/// Persons 1,2 share a household at address 1; person 3 lives alone at
/// address 1; person 4 lives alone at address 2, 30 m away.
inline Graph residential_view() {
  const int y = 2020;
  auto b = BundleBuilder()
               .person(1, 1980, Sex::male).person(2, 1982).person(3, 1950).person(4, 1960)
               .address(1, 0, 0).address(2, 30, 0)
               .live(1, y, 1, MaritalStatus::married, 2).live(2, y, 1, MaritalStatus::married, 1)
               .live(3, y, 1).live(4, y, 2)
               .build();
  RegistryIndex index(b);
  auto hh = assign_households(index, y);
  auto h = bipartite_view(build_household(index, hh));
  auto n = bipartite_view(build_neighborhood(index, hh, 1));
  std::vector<const Graph*> parts{&h, &n};
  return stack_layers(parts);
}

struct Toy {
  Graph graph;
  std::vector<NodeId> ids;
  std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
};

/// Random connected-ish weighted graph; every third node is a workplace.
inline Toy random_toy(std::mt19937_64& rng, std::size_t n) {
  Toy t;
  for (std::size_t i = 0; i < n; ++i) {
    t.ids.push_back(i % 3 == 2 ? NodeId::container(Layer::colleague, i + 1) : NodeId::person(i + 1));
  }
  std::uniform_real_distribution<double> w(0.05, 3.0);
  const std::size_t m = n + rng() % (2 * n + 1);
  std::map<std::pair<std::size_t, std::size_t>, double> chosen;
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t a = rng() % n;
    std::size_t b = rng() % n;
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    chosen.emplace(std::pair{a, b}, std::round(w(rng) * 64) / 64);
  }
  std::vector<Edge> edges;
  for (auto [ab, weight] : chosen) {
    edges.push_back({t.ids[ab.first], t.ids[ab.second], layer_bit(Layer::colleague)});
    t.edges.emplace_back(ab.first, ab.second, weight);
  }
  auto g = Graph::from_edges(ViewKind::bipartite, t.ids, edges);
  std::vector<double> weights(g.edge_count());
  for (auto [a, b, weight] : t.edges) {
    auto ia = *g.index_of(t.ids[a]);
    auto ib = *g.index_of(t.ids[b]);
    for (auto adj : g.adjacent(ia)) {
      if (adj.node == ib) weights[adj.edge] = weight;
    }
  }
  t.graph = g.with_weights(weights);
  return t;
}

// ---- oracles ----

/// All-pairs distances by Floyd-Warshall over an undirected weighted edge list.
inline std::vector<std::vector<double>> floyd_warshall(std::size_t n,
                                                       const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [a, b, w] : edges) {
    d[a][b] = std::min(d[a][b], w);
    d[b][a] = std::min(d[b][a], w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// Number of (order-1)-subsets of alters that lie inside one container,
/// i.e. order-cliques containing u, by exhaustive enumeration.
inline std::int64_t brute_force_cliques(const std::vector<std::vector<PersonId>>& containers, int order) {
  std::vector<PersonId> alters;
  for (const auto& c : containers) alters.insert(alters.end(), c.begin(), c.end());
  std::sort(alters.begin(), alters.end());
  alters.erase(std::unique(alters.begin(), alters.end()), alters.end());
  const std::size_t want = static_cast<std::size_t>(order - 1);
  std::vector<std::size_t> pick;
  std::int64_t total = 0;
  auto inside = [&] {
    for (const auto& c : containers) {
      bool all = true;
      for (std::size_t i : pick) all = all && std::find(c.begin(), c.end(), alters[i]) != c.end();
      if (all) return true;
    }
    return false;
  };
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (pick.size() == want) {
      total += inside() ? 1 : 0;
      return;
    }
    for (std::size_t i = from; i < alters.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  rec(rec, 0);
  return total;
}

/// Maximal cliques of a small graph by Bron-Kerbosch without pivoting.
inline std::vector<std::vector<std::size_t>> maximal_cliques(const std::vector<std::vector<bool>>& adj) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> r;
  auto bk = [&](auto&& self, std::vector<std::size_t> p, std::vector<std::size_t> x) -> void {
    if (p.empty() && x.empty()) {
      out.push_back(r);
      return;
    }
    while (!p.empty()) {
      const std::size_t v = p.back();
      std::vector<std::size_t> np;
      std::vector<std::size_t> nx;
      for (std::size_t w : p) if (adj[v][w]) np.push_back(w);
      for (std::size_t w : x) if (adj[v][w]) nx.push_back(w);
      r.push_back(v);
      self(self, np, nx);
      r.pop_back();
      p.pop_back();
      x.push_back(v);
    }
  };
  std::vector<std::size_t> all(adj.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  bk(bk, all, {});
  return out;
}

/// Textbook local clustering 2T / (d (d - 1)) from an adjacency matrix.
inline std::optional<double> textbook_clustering(const std::vector<std::vector<bool>>& adj, std::size_t u) {
  std::vector<std::size_t> nb;
  for (std::size_t v = 0; v < adj.size(); ++v)
    if (v != u && adj[u][v]) nb.push_back(v);
  const double d = static_cast<double>(nb.size());
  if (nb.size() < 2) return std::nullopt;
  double t = 0;
  for (std::size_t i = 0; i < nb.size(); ++i)
    for (std::size_t j = i + 1; j < nb.size(); ++j)
      if (adj[nb[i]][nb[j]]) t += 1;
  return 2 * t / (d * (d - 1));
}

/// Pearson r from the one-pass textbook formula in long double.
inline std::optional<double> pearson_direct(const std::vector<double>& x, const std::vector<double>& y) {
  long double n = static_cast<long double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  if (!(den > 0)) return std::nullopt;
  return static_cast<double>((n * sxy - sx * sy) / den);
}

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
template <typename F>
double bisect(F&& f, double lo, double hi, int iterations = 200) {
  const bool lo_negative = f(lo) < 0;
  for (int i = 0; i < iterations; ++i) {
    double mid = 0.5 * (lo + hi);
    if ((f(mid) < 0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace fixtures
