#include "focinet/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>

#include "focinet/csv.hpp"
#include "focinet/errors.hpp"
#include "focinet/parallel.hpp"

namespace focinet {

std::string_view to_string(ViewKind kind) { return kind == ViewKind::bipartite ? "bipartite" : "unipartite"; }

Graph Graph::from_edges(ViewKind kind, std::vector<NodeId> nodes, std::vector<Edge> edges) {
  Graph g;
  g.kind_ = kind;
  std::erase_if(edges, [](const Edge& e) { return e.a == e.b; });
  for (auto& e : edges) {
    if (e.b < e.a) std::swap(e.a, e.b);
    nodes.push_back(e.a);
    nodes.push_back(e.b);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  if (nodes.size() >= std::numeric_limits<std::uint32_t>::max()) throw DataError("graph too large: node count");
  std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return std::pair(x.a, x.b) < std::pair(y.a, y.b); });
  std::size_t out = 0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (out > 0 && edges[out - 1].a == edges[i].a && edges[out - 1].b == edges[i].b) {
      edges[out - 1].mask |= edges[i].mask;
    } else {
      edges[out++] = edges[i];
    }
  }
  edges.resize(out);
  if (edges.size() >= std::numeric_limits<std::uint32_t>::max()) throw DataError("graph too large: edge count");

  g.nodes_ = std::move(nodes);
  g.person_count_ = static_cast<std::size_t>(
      std::partition_point(g.nodes_.begin(), g.nodes_.end(), [](NodeId n) { return n.is_person(); }) - g.nodes_.begin());
  auto idx = [&](NodeId n) {
    return static_cast<std::uint32_t>(std::lower_bound(g.nodes_.begin(), g.nodes_.end(), n) - g.nodes_.begin());
  };
  g.ends_.reserve(edges.size());
  g.masks_.reserve(edges.size());
  std::vector<std::uint64_t> counts(g.nodes_.size() + 1, 0);
  for (const auto& e : edges) {
    std::uint32_t a = idx(e.a);
    std::uint32_t b = idx(e.b);
    g.ends_.emplace_back(a, b);
    g.masks_.push_back(e.mask);
    ++counts[a + 1];
    ++counts[b + 1];
  }
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  g.offsets_ = counts;
  g.adjacency_.resize(2 * edges.size());
  for (std::uint32_t e = 0; e < g.ends_.size(); ++e) {
    auto [a, b] = g.ends_[e];
    g.adjacency_[counts[a]++] = {b, e};
    g.adjacency_[counts[b]++] = {a, e};
  }
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]),
              [](const Adjacent& x, const Adjacent& y) { return x.node < y.node; });
  }
  return g;
}

std::optional<std::uint32_t> Graph::index_of(NodeId id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
  if (it == nodes_.end() || *it != id) return std::nullopt;
  return static_cast<std::uint32_t>(it - nodes_.begin());
}

Graph Graph::with_weights(std::vector<double> weights) const {
  if (weights.size() != ends_.size()) throw DataError("weight vector does not match edge count");
  Graph g = *this;
  g.weights_ = std::move(weights);
  return g;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(ends_.size());
  for (std::size_t e = 0; e < ends_.size(); ++e) out.push_back({nodes_[ends_[e].first], nodes_[ends_[e].second], masks_[e]});
  return out;
}

LayerMask Graph::layers() const {
  LayerMask m = 0;
  for (LayerMask x : masks_) m |= x;
  return m;
}

bool Graph::operator==(const Graph& o) const {
  return kind_ == o.kind_ && span_ == o.span_ && nodes_ == o.nodes_ && ends_ == o.ends_ && masks_ == o.masks_ &&
         weights_ == o.weights_;
}

Graph bipartite_view(const LayerSlice& s) {
  std::vector<NodeId> nodes;
  for (PersonId p : s.persons) nodes.push_back(NodeId::person(p));
  std::vector<Edge> edges;
  const LayerMask bit = layer_bit(s.layer);
  for (const auto& [p, c] : s.memberships) edges.push_back({NodeId::person(p), c, bit});
  for (const auto& [x, y] : s.container_links) edges.push_back({x, y, bit});
  if (s.layer == Layer::family) {
    for (const auto& [a, b] : s.edges) edges.push_back({NodeId::person(a), NodeId::person(b), bit});
  }
  Graph g = Graph::from_edges(ViewKind::bipartite, std::move(nodes), std::move(edges));
  g.set_span(TimeSpan{s.year, 0});
  return g;
}

Graph unipartite_view(const LayerSlice& s) {
  std::vector<NodeId> nodes;
  for (PersonId p : s.persons) nodes.push_back(NodeId::person(p));
  std::vector<Edge> edges;
  const LayerMask bit = layer_bit(s.layer);
  edges.reserve(s.edges.size());
  for (const auto& [a, b] : s.edges) edges.push_back({NodeId::person(a), NodeId::person(b), bit});
  Graph g = Graph::from_edges(ViewKind::unipartite, std::move(nodes), std::move(edges));
  g.set_span(TimeSpan{s.year, 0});
  return g;
}

Graph merge_graphs(std::span<const Graph* const> graphs) {
  if (graphs.empty()) return Graph::from_edges(ViewKind::unipartite, {}, {});
  std::vector<NodeId> nodes;
  std::vector<Edge> edges;
  for (const Graph* g : graphs) {
    if (g->kind() != graphs.front()->kind()) throw UsageError("cannot merge bipartite and unipartite views");
    nodes.insert(nodes.end(), g->nodes().begin(), g->nodes().end());
    auto e = g->edges();
    edges.insert(edges.end(), e.begin(), e.end());
  }
  return Graph::from_edges(graphs.front()->kind(), std::move(nodes), std::move(edges));
}

Graph merge_timespan(const std::map<int, Graph>& yearly, TimeSpan span) {
  if (span.span < 0) throw UsageError("negative time span");
  std::vector<const Graph*> parts;
  for (int y = span.first_year(); y <= span.anchor_year; ++y) {
    auto it = yearly.find(y);
    if (it == yearly.end()) throw DataError("missing year " + std::to_string(y) + " for time span");
    parts.push_back(&it->second);
  }
  if (parts.size() == 1) {
    Graph g = *parts.front();
    g.set_span(span);
    return g;
  }
  Graph g = merge_graphs(parts);
  g.set_span(span);
  return g;
}

Graph stack_layers(std::span<const Graph* const> views) {
  for (const Graph* v : views) {
    if (v->kind() != views.front()->kind()) throw UsageError("cannot stack views of different kinds");
    if (v->span() != views.front()->span()) throw UsageError("cannot stack views with different time spans");
  }
  Graph g = merge_graphs(views);
  if (!views.empty()) g.set_span(views.front()->span());
  return g;
}

namespace {

using Alter = std::pair<std::uint32_t, LayerMask>;

constexpr LayerMask kNeighborhood = layer_bit(Layer::neighborhood);

void persons_of(const Graph& g, std::uint32_t container, LayerMask bits, std::uint32_t skip, std::vector<Alter>& out) {
  for (auto [q, e] : g.adjacent(container)) {
    LayerMask m = g.mask(e) & bits;
    if (m && q != skip && g.node(q).is_person()) out.emplace_back(q, m);
  }
}

/// Alters of person index i with the layers that connect them; may repeat.
void collect_alters(const Graph& g, std::uint32_t i, LayerMask layers, std::vector<Alter>& out) {
  for (auto [x, e] : g.adjacent(i)) {
    const LayerMask m = g.mask(e) & layers;
    if (!m) continue;
    const NodeId node = g.node(x);
    if (node.is_person()) {
      out.emplace_back(x, m);
      continue;
    }
    if (node.tag() == NodeTag::address) continue;
    if (LayerMask direct = m & ~kNeighborhood) persons_of(g, x, direct, i, out);
    if (!(m & kNeighborhood) || node.tag() != NodeTag::household) continue;
    for (auto [a, e2] : g.adjacent(x)) {
      if (!(g.mask(e2) & kNeighborhood) || g.node(a).tag() != NodeTag::address) continue;
      for (auto [y, e3] : g.adjacent(a)) {
        if (!(g.mask(e3) & kNeighborhood)) continue;
        NodeTag tag = g.node(y).tag();
        if (tag == NodeTag::household && y != x) {
          persons_of(g, y, kNeighborhood, i, out);
        } else if (tag == NodeTag::address) {
          for (auto [h, e4] : g.adjacent(y)) {
            if (h != x && (g.mask(e4) & kNeighborhood) && g.node(h).tag() == NodeTag::household) {
              persons_of(g, h, kNeighborhood, i, out);
            }
          }
        }
      }
    }
  }
}

void merge_alters(std::vector<Alter>& alters) {
  std::sort(alters.begin(), alters.end());
  std::size_t out = 0;
  for (std::size_t k = 0; k < alters.size(); ++k) {
    if (out > 0 && alters[out - 1].first == alters[k].first) {
      alters[out - 1].second |= alters[k].second;
    } else {
      alters[out++] = alters[k];
    }
  }
  alters.resize(out);
}

std::uint32_t require_person(const Graph& g, PersonId person) {
  auto idx = g.index_of(NodeId::person(person));
  if (!idx) throw DataError("unknown person " + std::to_string(person));
  return *idx;
}

}  // namespace

Graph project(const Graph& g) {
  std::vector<NodeId> nodes(g.persons().begin(), g.persons().end());
  std::vector<Edge> edges;
  std::vector<Alter> alters;
  for (std::uint32_t i = 0; i < g.person_count(); ++i) {
    alters.clear();
    collect_alters(g, i, kAllLayersMask, alters);
    merge_alters(alters);
    for (auto [q, m] : alters) {
      if (q > i) edges.push_back({g.node(i), g.node(q), m});
    }
  }
  Graph out = Graph::from_edges(ViewKind::unipartite, std::move(nodes), std::move(edges));
  out.set_span(g.span());
  return out;
}

std::vector<PersonId> person_neighbors(const Graph& g, PersonId person, LayerMask layers) {
  std::uint32_t i = require_person(g, person);
  std::vector<Alter> alters;
  collect_alters(g, i, layers, alters);
  merge_alters(alters);
  std::vector<PersonId> out;
  out.reserve(alters.size());
  for (auto [q, m] : alters) out.push_back(g.node(q).id());
  return out;
}

std::size_t person_degree(const Graph& g, PersonId person, LayerMask layers) {
  return person_neighbors(g, person, layers).size();
}

std::vector<std::size_t> person_degrees(const Graph& g, LayerMask layers, std::size_t threads) {
  std::vector<std::size_t> out(g.person_count(), 0);
  if (g.kind() == ViewKind::unipartite) {
    for (std::uint32_t i = 0; i < g.person_count(); ++i) {
      for (auto [q, e] : g.adjacent(i)) out[i] += (g.mask(e) & layers) ? 1 : 0;
    }
    return out;
  }
  constexpr std::size_t kChunk = 1024;
  const std::size_t chunks = (g.person_count() + kChunk - 1) / kChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<Alter> alters;
    const std::size_t end = std::min(g.person_count(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      alters.clear();
      collect_alters(g, static_cast<std::uint32_t>(i), layers, alters);
      merge_alters(alters);
      out[i] = alters.size();
    }
  });
  return out;
}

std::vector<PersonPair> person_pairs(const Graph& g, LayerMask layers) {
  std::vector<PersonPair> out;
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.endpoints(e);
    NodeId na = g.node(a);
    NodeId nb = g.node(b);
    if ((g.mask(e) & layers) && na.is_person() && nb.is_person()) out.emplace_back(na.id(), nb.id());
  }
  return out;
}

namespace {

constexpr char kMagic[8] = {'F', 'O', 'C', 'I', 'N', 'E', 'T', '\0'};
constexpr std::uint32_t kSnapshotVersion = 1;

class ByteWriter {
 public:
  explicit ByteWriter(std::ostream& out) : out_(out) {}
  template <typename T>
  void put(T value) {
    std::uint64_t bits;
    if constexpr (std::is_same_v<T, double>) {
      bits = std::bit_cast<std::uint64_t>(value);
    } else {
      bits = static_cast<std::uint64_t>(value);
    }
    char buf[sizeof(T)];
    for (std::size_t k = 0; k < sizeof(T); ++k) buf[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
    out_.write(buf, sizeof(T));
  }

 private:
  std::ostream& out_;
};

class ByteReader {
 public:
  ByteReader(std::istream& in, std::string file) : in_(in), file_(std::move(file)) {}
  template <typename T>
  T get() {
    unsigned char buf[sizeof(T)];
    if (!in_.read(reinterpret_cast<char*>(buf), sizeof(T))) throw DataError(file_ + ": truncated snapshot");
    std::uint64_t bits = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k) bits |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
    if constexpr (std::is_same_v<T, double>) {
      return std::bit_cast<double>(bits);
    } else {
      return static_cast<T>(bits);
    }
  }

 private:
  std::istream& in_;
  std::string file_;
};

}  // namespace

void write_snapshot(const Graph& g, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  out.write(kMagic, sizeof kMagic);
  ByteWriter w(out);
  w.put<std::uint32_t>(kSnapshotVersion);
  w.put<std::uint8_t>(static_cast<std::uint8_t>(g.kind()));
  w.put<std::uint8_t>(g.span() ? 1 : 0);
  w.put<std::int32_t>(g.span() ? g.span()->anchor_year : 0);
  w.put<std::int32_t>(g.span() ? g.span()->span : 0);
  w.put<std::uint8_t>(g.weighted() ? 1 : 0);
  w.put<std::uint64_t>(g.node_count());
  for (NodeId n : g.nodes()) w.put<std::uint64_t>(n.raw());
  w.put<std::uint64_t>(g.edge_count());
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.endpoints(e);
    w.put<std::uint32_t>(a);
    w.put<std::uint32_t>(b);
    w.put<std::uint8_t>(g.mask(e));
    if (g.weighted()) w.put<double>(g.weight(e));
  }
  if (!out) throw DataError("write failed: " + file.string());
}

Graph read_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw DataError("missing file: " + file.string());
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw DataError(file.string() + ": not a graph snapshot");
  }
  ByteReader r(in, file.string());
  auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion) throw DataError(file.string() + ": unsupported snapshot version " + std::to_string(version));
  auto kind = r.get<std::uint8_t>();
  if (kind > 1) throw DataError(file.string() + ": bad view kind");
  bool has_span = r.get<std::uint8_t>() != 0;
  auto anchor = r.get<std::int32_t>();
  auto span = r.get<std::int32_t>();
  bool weighted = r.get<std::uint8_t>() != 0;
  auto n_nodes = r.get<std::uint64_t>();
  std::vector<NodeId> nodes;
  for (std::uint64_t k = 0; k < n_nodes; ++k) nodes.push_back(NodeId::from_raw(r.get<std::uint64_t>()));
  if (!std::is_sorted(nodes.begin(), nodes.end())) throw DataError(file.string() + ": nodes out of order");
  auto n_edges = r.get<std::uint64_t>();
  std::vector<Edge> edges;
  std::vector<double> weights;
  for (std::uint64_t k = 0; k < n_edges; ++k) {
    auto a = r.get<std::uint32_t>();
    auto b = r.get<std::uint32_t>();
    auto m = r.get<std::uint8_t>();
    if (a >= n_nodes || b >= n_nodes) throw DataError(file.string() + ": edge endpoint out of range");
    edges.push_back({nodes[a], nodes[b], m});
    if (weighted) weights.push_back(r.get<double>());
  }
  Graph g = Graph::from_edges(static_cast<ViewKind>(kind), std::move(nodes), std::move(edges));
  if (g.edge_count() != n_edges) throw DataError(file.string() + ": duplicate edges in snapshot");
  if (weighted) g = g.with_weights(std::move(weights));
  if (has_span) g.set_span(TimeSpan{anchor, span});
  return g;
}

void write_edges_csv(const Graph& g, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  CsvWriter w(out);
  if (g.weighted()) {
    w.header({"src", "dst", "layers", "weight"});
  } else {
    w.header({"src", "dst", "layers"});
  }
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.endpoints(e);
    w.field(g.node(a).to_string()).field(g.node(b).to_string()).field(mask_to_string(g.mask(e)));
    if (g.weighted()) w.field(g.weight(e));
    w.end_row();
  }
}

}  // namespace focinet
