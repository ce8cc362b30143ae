#include "focinet/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "focinet/csv.hpp"
#include "focinet/errors.hpp"
#include "focinet/parallel.hpp"
#include "focinet/rng.hpp"

namespace focinet {

namespace {

std::vector<PersonId> draw_persons(const Graph& view, std::size_t count, std::string_view stream, std::uint64_t seed) {
  CounterRng rng(seed, stream);
  std::vector<PersonId> out;
  for (auto k : rng.sample_indices(view.person_count(), count)) out.push_back(view.node(static_cast<std::uint32_t>(k)).id());
  return out;
}

void check_counts(const Graph& view, const PathSampleSpec& spec) {
  if (spec.n_sources == 0 || spec.n_targets == 0) throw UsageError("source and target counts must be at least 1");
  if (spec.n_sources > view.person_count() || spec.n_targets > view.person_count()) {
    throw DataError("too few persons (" + std::to_string(view.person_count()) + ") for " +
                    std::to_string(spec.n_sources) + " sources and " + std::to_string(spec.n_targets) + " targets");
  }
}

}  // namespace

std::optional<double> source_clustered_sem(const DistanceSummary& s) {
  std::vector<double> means;
  for (std::size_t i = 0; i < s.distances.size();) {
    std::size_t j = i;
    double sum = 0;
    while (j < s.distances.size() && s.distances[j].source == s.distances[i].source) sum += s.distances[j++].distance;
    means.push_back(sum / static_cast<double>(j - i));
    i = j;
  }
  if (means.size() < 2) return std::nullopt;
  double m = 0;
  for (double v : means) m += v;
  m /= static_cast<double>(means.size());
  double ss = 0;
  for (double v : means) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(means.size() - 1) / static_cast<double>(means.size()));
}

Endpoints sample_endpoints(const Graph& view, const PathSampleSpec& spec) {
  check_counts(view, spec);
  Endpoints e{draw_persons(view, spec.n_sources, "paths.sources", spec.seed),
              draw_persons(view, spec.n_targets, "paths.targets", spec.seed)};
  std::sort(e.sources.begin(), e.sources.end());
  std::sort(e.targets.begin(), e.targets.end());
  return e;
}

DistanceSummary shortest_distances(const Graph& g, std::span<const PersonId> sources, std::span<const PersonId> targets,
                                   std::size_t threads, double bin_width) {
  if (!(bin_width > 0)) throw UsageError("histogram bin width must be positive");
  for (double w : g.weights()) {
    if (!(w >= 0)) throw UsageError("shortest paths need non-negative weights");
  }
  auto lookup = [&](PersonId p) {
    auto idx = g.index_of(NodeId::person(p));
    if (!idx) throw DataError("unknown person " + std::to_string(p));
    return *idx;
  };
  std::vector<std::uint32_t> target_idx;
  for (PersonId t : targets) target_idx.push_back(lookup(t));
  std::vector<char> is_target(g.node_count(), 0);
  for (auto t : target_idx) is_target[t] = 1;
  std::vector<std::uint32_t> source_idx;
  for (PersonId s : sources) source_idx.push_back(lookup(s));

  struct PerSource {
    std::vector<PairDistance> found;
    std::size_t pairs = 0;
    std::size_t unconnected = 0;
  };
  std::vector<PerSource> results(sources.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  parallel_for(sources.size(), threads, [&](std::size_t s) {
    const std::uint32_t src = source_idx[s];
    std::size_t remaining = 0;
    for (auto t : target_idx) remaining += t != src ? 1 : 0;
    auto& out = results[s];
    out.pairs = remaining;
    std::vector<double> dist(g.node_count(), kInf);
    std::vector<char> done(g.node_count(), 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[src] = 0;
    queue.emplace(0.0, src);
    while (!queue.empty() && remaining > 0) {
      auto [d, u] = queue.top();
      queue.pop();
      if (done[u]) continue;
      done[u] = 1;
      if (is_target[u] && u != src) {
        --remaining;
        out.found.push_back({sources[s], g.node(u).id(), d});
      }
      for (auto [v, e] : g.adjacent(u)) {
        double nd = d + g.weight(e);
        if (nd < dist[v]) {
          dist[v] = nd;
          queue.emplace(nd, v);
        }
      }
    }
    out.unconnected = remaining;
    std::sort(out.found.begin(), out.found.end(),
              [](const PairDistance& a, const PairDistance& b) { return a.target < b.target; });
  });

  DistanceSummary summary;
  summary.bin_width = bin_width;
  double sum = 0;
  for (auto& r : results) {
    summary.pairs += r.pairs;
    summary.unconnected += r.unconnected;
    for (const auto& pd : r.found) {
      sum += pd.distance;
      summary.distances.push_back(pd);
    }
  }
  const std::size_t n = summary.distances.size();
  if (summary.pairs > 0) summary.unconnected_share = static_cast<double>(summary.unconnected) / static_cast<double>(summary.pairs);
  if (n > 0) {
    double mean = sum / static_cast<double>(n);
    summary.mean = mean;
    if (n > 1) {
      double ss = 0;
      for (const auto& pd : summary.distances) ss += (pd.distance - mean) * (pd.distance - mean);
      summary.sd = std::sqrt(ss / static_cast<double>(n - 1));
    }
    for (const auto& pd : summary.distances) {
      auto bin = static_cast<std::size_t>(std::floor(pd.distance / bin_width + 1e-9));
      if (bin >= summary.histogram.size()) summary.histogram.resize(bin + 1, 0);
      ++summary.histogram[bin];
    }
  }
  return summary;
}

MetricTable robustness_sweep(const Graph& g, const PathSampleSpec& spec, const WeightParams& base,
                             const SweepOptions& options, std::size_t threads) {
  check_counts(g, spec);
  auto sources = draw_persons(g, spec.n_sources, "paths.sources", spec.seed);
  auto targets = draw_persons(g, spec.n_targets, "paths.targets", spec.seed);
  std::sort(targets.begin(), targets.end());
  MetricTable t("robustness_sweep", {"variant", "n_sources", "n_targets", "pairs", "unconnected_share", "mean", "sd", "sem"});

  auto run = [&](const std::string& name, const Graph& weighted, std::size_t n_sources) {
    std::vector<PersonId> src(sources.begin(), sources.begin() + static_cast<std::ptrdiff_t>(n_sources));
    std::sort(src.begin(), src.end());
    auto s = shortest_distances(weighted, src, targets, threads);
    auto sem = source_clustered_sem(s);
    t.add_row({name, static_cast<std::int64_t>(n_sources), static_cast<std::int64_t>(targets.size()),
               static_cast<std::int64_t>(s.pairs), cell(s.unconnected_share), cell(s.mean), cell(s.sd), cell(sem)});
  };

  const Graph base_graph = apply_weights(g, base);
  run("base", base_graph, sources.size());
  const LayerMask present = g.layers();
  for (Layer l : kAllLayers) {
    if (!has_layer(present, l)) continue;
    for (double f : options.factors) {
      WeightParams p = base;
      p.layer_factor[static_cast<std::size_t>(l)] *= f;
      run("factor_" + std::string(layer_name(l)) + "_" + format_double(f), apply_weights(g, p), sources.size());
    }
  }
  WeightParams unit = base;
  unit.unweighted = true;
  run("unweighted_bipartite", apply_weights(g, unit), sources.size());
  WeightParams uniform = base;
  uniform.uniform_container = options.uniform_container;
  run("uniform_container", apply_weights(g, uniform), sources.size());
  if (options.unipartite) {
    run("unweighted_unipartite", unit_weights(*options.unipartite), sources.size());
  } else {
    run("unweighted_unipartite", unit_weights(project(g)), sources.size());
  }
  for (std::size_t n : options.source_counts) {
    if (n == 0 || n > sources.size()) throw UsageError("source sweep counts must lie in [1, n_sources]");
    run("sources_" + std::to_string(n), base_graph, n);
  }
  return t;
}

MetricTable distance_table(const DistanceSummary& s) {
  MetricTable t("distances", {"source", "target", "distance"});
  for (const auto& pd : s.distances) {
    t.add_row({static_cast<std::int64_t>(pd.source), static_cast<std::int64_t>(pd.target), pd.distance});
  }
  return t;
}

MetricTable distance_histogram(const DistanceSummary& s) {
  MetricTable t("distance_histogram", {"bin_low", "bin_high", "count"});
  for (std::size_t i = 0; i < s.histogram.size(); ++i) {
    t.add_row({static_cast<double>(i) * s.bin_width, static_cast<double>(i + 1) * s.bin_width, s.histogram[i]});
  }
  return t;
}

}  // namespace focinet
