#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "focinet/ids.hpp"
#include "focinet/layers.hpp"

namespace focinet {

enum class ViewKind : std::uint8_t { bipartite, unipartite };

std::string_view to_string(ViewKind kind);

/// Undirected edge between two node ids with the layers it belongs to.
struct Edge {
  NodeId a;
  NodeId b;
  LayerMask mask = 0;
};

/// Immutable undirected graph in compressed sparse row form. Nodes are kept
/// sorted by NodeId, so persons come first; edges are unique and carry a
/// layer bitmask and an optional weight.
class Graph {
 public:
  struct Adjacent {
    std::uint32_t node;
    std::uint32_t edge;
  };

  Graph() = default;

  /// Self-loops are dropped; parallel edges are merged by OR-ing masks.
  /// Endpoints missing from `nodes` are added.
  static Graph from_edges(ViewKind kind, std::vector<NodeId> nodes, std::vector<Edge> edges);

  ViewKind kind() const { return kind_; }
  std::optional<TimeSpan> span() const { return span_; }
  void set_span(std::optional<TimeSpan> span) { span_ = span; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return ends_.size(); }
  std::size_t person_count() const { return person_count_; }

  NodeId node(std::uint32_t index) const { return nodes_[index]; }
  std::span<const NodeId> nodes() const { return nodes_; }
  std::span<const NodeId> persons() const { return std::span(nodes_).first(person_count_); }
  std::optional<std::uint32_t> index_of(NodeId id) const;

  std::span<const Adjacent> adjacent(std::uint32_t index) const {
    return std::span(adjacency_).subspan(offsets_[index], offsets_[index + 1] - offsets_[index]);
  }
  std::size_t degree(std::uint32_t index) const { return offsets_[index + 1] - offsets_[index]; }

  /// Edge endpoints as node indices (first < second).
  std::pair<std::uint32_t, std::uint32_t> endpoints(std::uint32_t edge) const { return ends_[edge]; }
  LayerMask mask(std::uint32_t edge) const { return masks_[edge]; }
  bool weighted() const { return !weights_.empty(); }
  double weight(std::uint32_t edge) const { return weights_.empty() ? 1.0 : weights_[edge]; }
  std::span<const double> weights() const { return weights_; }

  /// Copy with per-edge weights, indexed like edges.
  Graph with_weights(std::vector<double> weights) const;

  /// Canonical edge list sorted by (a, b).
  std::vector<Edge> edges() const;

  /// Union of all masks.
  LayerMask layers() const;

  bool operator==(const Graph& other) const;

 private:
  ViewKind kind_ = ViewKind::unipartite;
  std::optional<TimeSpan> span_;
  std::vector<NodeId> nodes_;
  std::size_t person_count_ = 0;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<Adjacent> adjacency_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends_;
  std::vector<LayerMask> masks_;
  std::vector<double> weights_;
};

/// Person -> container memberships, container links and family edges of one slice.
Graph bipartite_view(const LayerSlice& slice);
/// Person -> person edges of one slice.
Graph unipartite_view(const LayerSlice& slice);

/// Union of nodes and edges. All inputs must be of one kind; spans are
/// dropped. Weights are not carried over.
Graph merge_graphs(std::span<const Graph* const> graphs);

/// Union of the yearly graphs anchor-span .. anchor. Throws DataError for a
/// missing year.
Graph merge_timespan(const std::map<int, Graph>& yearly, TimeSpan span);

/// Union of per-layer views. Throws UsageError when kinds or spans differ.
Graph stack_layers(std::span<const Graph* const> views);

/// Persons adjacent iff they share a container of some layer; addresses
/// connect neighborhood households through household-address(-address)-household
/// chains. Family person-person edges are kept. Isolated persons stay.
Graph project(const Graph& bipartite);

/// Sorted distinct alter persons of `person` reachable within the layers in
/// `layers`: direct person edges, and for bipartite views the projection rule.
std::vector<PersonId> person_neighbors(const Graph& view, PersonId person, LayerMask layers = kAllLayersMask);

/// Number of distinct alters. Throws DataError for a person not in the view.
std::size_t person_degree(const Graph& view, PersonId person, LayerMask layers = kAllLayersMask);

/// Degree of every person in node order.
std::vector<std::size_t> person_degrees(const Graph& view, LayerMask layers = kAllLayersMask, std::size_t threads = 1);

/// Person pairs (first < second) of a unipartite view whose mask meets `layers`.
std::vector<PersonPair> person_pairs(const Graph& unipartite, LayerMask layers = kAllLayersMask);

/// Binary snapshot: "FOCINET\0", u32 version, then little-endian fields.
void write_snapshot(const Graph& graph, const std::filesystem::path& file);
Graph read_snapshot(const std::filesystem::path& file);

/// Columns: src, dst, layers[, weight]. Nodes as "person:12", "address:3", ...
void write_edges_csv(const Graph& graph, const std::filesystem::path& file);

}  // namespace focinet
