#include "focinet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "focinet/errors.hpp"
#include "focinet/hocc.hpp"
#include "focinet/metrics.hpp"
#include "focinet/paths.hpp"

namespace focinet {

Network::Network(RegistryBundle bundle, LayerMask layers, const BuildOptions& options, std::size_t threads)
    : bundle_(std::make_unique<RegistryBundle>(std::move(bundle))), layers_(layers) {
  index_ = std::make_unique<RegistryIndex>(*bundle_);
  if (bundle_->end_year < bundle_->start_year) throw DataError("registry has no yearly rows");
  households_ = assign_household_years(*index_, bundle_->start_year, bundle_->end_year);
  for (auto& s : build_layers(*index_, households_, layers, options, threads)) {
    auto key = std::make_pair(s.layer, s.year);
    slices_.emplace(key, std::move(s));
  }
}

const LayerSlice& Network::slice(Layer layer, int year) const {
  auto it = slices_.find({layer, year});
  if (it == slices_.end()) {
    throw DataError("no " + std::string(layer_name(layer)) + " slice for " + std::to_string(year));
  }
  return it->second;
}

bool Network::has(Layer layer, int year) const { return slices_.count({layer, year}) > 0; }

std::vector<PersonPair> union_pairs(std::span<const std::vector<PersonPair>* const> parts) {
  std::vector<PersonPair> out;
  std::vector<PersonPair> tmp;
  for (const auto* p : parts) {
    tmp.clear();
    tmp.reserve(out.size() + p->size());
    std::set_union(out.begin(), out.end(), p->begin(), p->end(), std::back_inserter(tmp));
    out.swap(tmp);
  }
  return out;
}

std::vector<std::pair<double, double>> lorenz_grid(std::span<const std::pair<double, double>> lorenz, int steps) {
  if (steps < 1) throw UsageError("lorenz grid needs at least one step");
  std::vector<std::pair<double, double>> out;
  if (lorenz.empty()) return out;
  std::size_t j = 1;
  for (int i = 0; i <= steps; ++i) {
    const double x = static_cast<double>(i) / steps;
    while (j < lorenz.size() - 1 && lorenz[j].first < x) ++j;
    const auto [x0, y0] = lorenz[j - 1];
    const auto [x1, y1] = lorenz[std::min(j, lorenz.size() - 1)];
    double y = x1 > x0 ? y0 + (y1 - y0) * (x - x0) / (x1 - x0) : y1;
    if (i == 0) y = 0.0;
    if (i == steps) y = 1.0;
    out.emplace_back(x, y);
  }
  return out;
}

namespace {

std::vector<PersonId> merge_ids(const std::vector<PersonId>& a, const std::vector<PersonId>& b) {
  std::vector<PersonId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string name_of(std::size_t layer_slot) {
  return layer_slot < kAllLayers.size() ? std::string(layer_name(kAllLayers[layer_slot])) : "all";
}

Cell count(std::size_t n) { return static_cast<std::int64_t>(n); }

std::vector<std::size_t> as_counts(const std::vector<double>& degrees) {
  std::vector<std::size_t> out;
  out.reserve(degrees.size());
  for (double d : degrees) out.push_back(static_cast<std::size_t>(d));
  return out;
}

}  // namespace

std::vector<std::string> reproduce_all(const ReproduceOptions& o, const std::filesystem::path& dir) {
  SynthConfig config = o.synth;
  config.seed = o.seed;
  config.check();
  o.weights.check();
  if (o.hocc_orders.empty()) throw UsageError("at least one clustering order is required");

  BuildOptions build;
  build.seed = o.seed;
  build.colleague_cap = o.colleague_cap;
  const Network net(generate(config), kAllLayersMask, build, o.threads);
  const int first = net.bundle().start_year;
  const int anchor = net.bundle().end_year;
  const int max_span = anchor - first;
  constexpr std::size_t kLayers = kAllLayers.size();

  const std::vector<std::pair<std::string, std::string>> provenance{
      {"seed", std::to_string(o.seed)},
      {"persons_initial", std::to_string(config.n_persons_initial)},
      {"years", std::to_string(first) + ".." + std::to_string(anchor)},
      {"colleague_cap", std::to_string(o.colleague_cap)},
  };
  std::vector<std::string> written;
  auto emit = [&](MetricTable& t, const std::string& file) {
    t.provenance = provenance;
    t.write(dir / file);
    written.push_back(file);
  };

  MetricTable stability("stability", {"layer", "year", "next_year", "stability"});
  for (Layer l : kAllLayers) {
    for (int y = first; y < anchor; ++y) {
      stability.add_row({std::string(layer_name(l)), y, y + 1,
                         cell(edge_stability(net.slice(l, y).edges, net.slice(l, y + 1).edges))});
    }
  }
  emit(stability, "stability.csv");

  MetricTable counts("edge_node_counts", {"layer", "view", "anchor_year", "span", "persons", "nodes", "edges"});
  MetricTable overlap("overlap", {"reference", "comparison", "anchor_year", "span", "share"});
  MetricTable histogram("degree_histogram", {"layer", "span", "bin_low", "bin_high", "count"});
  MetricTable lorenz("lorenz", {"layer", "span", "x", "y"});
  MetricTable lorenz_summary("lorenz_summary", {"layer", "span", "top20_share", "gini"});
  MetricTable correlation("degree_correlation", {"span", "layer_a", "layer_b", "pearson"});
  MetricTable hocc_summary("hocc_summary", {"order", "span", "sampled", "defined", "share_above_095", "mean"});
  MetricTable hocc_hist("hocc_histogram", {"order", "span", "bin_low", "bin_high", "count"});
  MetricTable by_span("paths_by_span", {"span", "pairs", "unconnected_share", "mean", "sd"});

  std::array<std::vector<PersonPair>, kLayers> pairs;
  std::array<std::vector<PersonId>, kLayers> persons;
  std::array<Graph, kLayers> bipartite;
  Graph stacked_bipartite0;
  Graph stacked_unipartite0;
  Endpoints endpoints;
  const PathSampleSpec spec{o.path_sources, o.path_targets, o.seed};
  auto path_span = [&](int s) { return s == 0 || s == max_span || (s & (s - 1)) == 0; };

  auto hocc_rows = [&](const Graph& g, int s) {
    for (int order : o.hocc_orders) {
      auto h = hocc_distribution(g, order, o.hocc_sample, o.seed, o.threads);
      hocc_summary.add_row({order, s, count(h.nodes.size()), count(h.defined), cell(h.share_above_095), cell(h.mean)});
      for (auto row : h.histogram.rows) {
        row.insert(row.begin(), {order, s});
        hocc_hist.add_row(std::move(row));
      }
    }
  };

  for (int s = 0; s <= max_span; ++s) {
    const int year = anchor - s;
    for (std::size_t k = 0; k < kLayers; ++k) {
      const LayerSlice& slice = net.slice(kAllLayers[k], year);
      std::vector<PersonPair> merged;
      merged.reserve(pairs[k].size() + slice.edges.size());
      std::set_union(pairs[k].begin(), pairs[k].end(), slice.edges.begin(), slice.edges.end(),
                     std::back_inserter(merged));
      pairs[k].swap(merged);
      persons[k] = merge_ids(persons[k], slice.persons);
      Graph view = bipartite_view(slice);
      if (s == 0) {
        bipartite[k] = std::move(view);
      } else {
        const Graph* parts[] = {&bipartite[k], &view};
        bipartite[k] = merge_graphs(parts);
      }
    }

    std::vector<const std::vector<PersonPair>*> pair_parts;
    std::vector<const Graph*> graph_parts;
    std::vector<PersonId> all_persons;
    for (std::size_t k = 0; k < kLayers; ++k) {
      pair_parts.push_back(&pairs[k]);
      graph_parts.push_back(&bipartite[k]);
      all_persons = merge_ids(all_persons, persons[k]);
    }
    const auto all_pairs = union_pairs(pair_parts);
    Graph stacked = merge_graphs(graph_parts);
    stacked.set_span(TimeSpan{anchor, s});

    for (std::size_t k = 0; k <= kLayers; ++k) {
      const bool all = k == kLayers;
      const auto& ids = all ? all_persons : persons[k];
      const auto& edges = all ? all_pairs : pairs[k];
      const Graph& b = all ? stacked : bipartite[k];
      counts.add_row({name_of(k), std::string("unipartite"), anchor, s, count(ids.size()), count(ids.size()),
                      count(edges.size())});
      counts.add_row({name_of(k), std::string("bipartite"), anchor, s, count(b.person_count()), count(b.node_count()),
                      count(b.edge_count())});
    }
    for (std::size_t r = 0; r < kLayers; ++r) {
      const auto& ref = net.slice(kAllLayers[r], anchor).edges;
      for (std::size_t c = 0; c < kLayers; ++c) {
        if (c == r) continue;
        overlap.add_row({name_of(r), name_of(c), anchor, s, cell(overlap_share(ref, pairs[c]))});
      }
    }

    if (s == 0 || s == max_span) {
      std::vector<DegreeSequence> seqs;
      for (std::size_t k = 0; k <= kLayers; ++k) {
        const bool all = k == kLayers;
        seqs.push_back(degree_sequence(all ? all_persons : persons[k], all ? all_pairs : pairs[k]));
        const auto degrees = as_counts(seqs.back().degrees);
        for (auto row : degree_histogram(degrees).rows) {
          row.insert(row.begin(), {name_of(k), s});
          histogram.add_row(std::move(row));
        }
        if (auto curve = lorenz_points(degrees)) {
          for (auto [x, y] : lorenz_grid(*curve)) lorenz.add_row({name_of(k), s, x, y});
          lorenz_summary.add_row({name_of(k), s, top_share(*curve, 0.2), gini(*curve)});
        } else {
          lorenz_summary.add_row({name_of(k), s, Undefined{}, Undefined{}});
        }
      }
      const Eigen::MatrixXd r = degree_correlation(seqs);
      for (Eigen::Index a = 0; a < r.rows(); ++a) {
        for (Eigen::Index b = 0; b < r.cols(); ++b) {
          correlation.add_row({s, name_of(static_cast<std::size_t>(a)), name_of(static_cast<std::size_t>(b)), r(a, b)});
        }
      }
      hocc_rows(stacked, s);
    }

    if (s == 0) {
      std::vector<Graph> uni;
      for (Layer l : kAllLayers) uni.push_back(unipartite_view(net.slice(l, anchor)));
      std::vector<const Graph*> uni_parts;
      for (const auto& g : uni) uni_parts.push_back(&g);
      stacked_unipartite0 = stack_layers(uni_parts);
      stacked_bipartite0 = stacked;
      endpoints = sample_endpoints(stacked, spec);
    }
    if (path_span(s)) {
      auto d = shortest_distances(apply_weights(stacked, o.weights), endpoints.sources, endpoints.targets, o.threads);
      by_span.add_row({s, count(d.pairs), cell(d.unconnected_share), cell(d.mean), cell(d.sd)});
    }
  }

  emit(counts, "edge_node_counts.csv");
  emit(overlap, "overlap.csv");
  emit(histogram, "degree_histogram.csv");
  emit(lorenz, "lorenz.csv");
  emit(lorenz_summary, "lorenz_summary.csv");
  emit(correlation, "degree_correlation.csv");

  AttributeGrouping income;
  income.kind = AttributeGrouping::Kind::income_quantile;
  auto by_income = degree_by_attribute(stacked_unipartite0, net.index(), anchor, income, o.threads);
  emit(by_income, "degree_by_income.csv");
  AttributeGrouping sex;
  sex.kind = AttributeGrouping::Kind::sex;
  auto by_sex = degree_by_attribute(stacked_unipartite0, net.index(), anchor, sex, o.threads);
  emit(by_sex, "degree_by_sex.csv");

  emit(hocc_summary, "hocc_summary.csv");
  emit(hocc_hist, "hocc_histogram.csv");

  SweepOptions sweep;
  for (std::size_t n : o.source_sweep) {
    if (n < o.path_sources) sweep.source_counts.push_back(n);
  }
  sweep.unipartite = &stacked_unipartite0;
  auto sweep_table = robustness_sweep(stacked_bipartite0, spec, o.weights, sweep, o.threads);
  emit(sweep_table, "paths_sweep.csv");
  emit(by_span, "paths_by_span.csv");
  return written;
}

}  // namespace focinet
