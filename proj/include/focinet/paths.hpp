#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "focinet/graph.hpp"
#include "focinet/metrics.hpp"
#include "focinet/weights.hpp"

namespace focinet {

struct PathSampleSpec {
  std::size_t n_sources = 1000;
  std::size_t n_targets = 1000;
  std::uint64_t seed = 1;
};

struct Endpoints {
  std::vector<PersonId> sources;  // sorted
  std::vector<PersonId> targets;  // sorted
};

/// Uniform samples without replacement from the persons of the view, drawn
/// independently for sources and targets. Throws UsageError for a zero count
/// and DataError when either count exceeds the number of persons.
Endpoints sample_endpoints(const Graph& view, const PathSampleSpec& spec);

struct PairDistance {
  PersonId source = 0;
  PersonId target = 0;
  double distance = 0.0;
};

struct DistanceSummary {
  std::vector<PairDistance> distances;  // finite pairs, sorted by (source, target)
  std::size_t pairs = 0;                // ordered pairs excluding self-pairs
  std::size_t unconnected = 0;
  std::optional<double> unconnected_share;
  std::optional<double> mean;
  std::optional<double> sd;
  double bin_width = 0.5;
  std::vector<std::int64_t> histogram;  // bin i covers [i, i+1) * bin_width
};

/// Exact shortest-path distances from every source to every target. Edge
/// weights must be non-negative; an unweighted view uses unit weights.
DistanceSummary shortest_distances(const Graph& view, std::span<const PersonId> sources,
                                   std::span<const PersonId> targets, std::size_t threads = 1, double bin_width = 0.5);

/// Standard error of the mean distance treating each source as one cluster:
/// sd of per-source means over sqrt(sources); nullopt below two sources.
std::optional<double> source_clustered_sem(const DistanceSummary& summary);

struct SweepOptions {
  std::vector<double> factors{0.5, 2.0};
  std::vector<std::size_t> source_counts{};
  double uniform_container = 0.5;
  /// Individual-centered view for the unit-weight unipartite variant; the
  /// projection of the bipartite view when null.
  const Graph* unipartite = nullptr;
};

/// Distance summaries under weight variants of one bipartite view, all on the
/// same endpoints: base; each present layer scaled by each factor; unit
/// weights; uniform colleague/classmate weight; unit weights on the
/// projection; and each source count (a prefix of the source draw).
/// Columns: variant, n_sources, n_targets, pairs, unconnected_share, mean, sd, sem.
MetricTable robustness_sweep(const Graph& bipartite, const PathSampleSpec& spec, const WeightParams& base,
                             const SweepOptions& options = {}, std::size_t threads = 1);

MetricTable distance_table(const DistanceSummary& summary);
MetricTable distance_histogram(const DistanceSummary& summary);

}  // namespace focinet
