#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "focinet/graph.hpp"
#include "focinet/metrics.hpp"

namespace focinet {

using CliqueCount = __int128;

/// Alter sets of the foci around one person. Each container lists the persons
/// sharing it with u (u excluded), sorted.
struct ContainerNeighborhood {
  PersonId person = 0;
  std::vector<std::vector<PersonId>> containers;
  std::size_t degree = 0;  // distinct alters
};

/// Containers around u in a bipartite view: household, workplace and class
/// nodes; each family edge as a two-person pseudo-container; and for the
/// neighborhood, the persons at u's address and at each address linked to it.
ContainerNeighborhood container_neighborhood(const Graph& bipartite, PersonId person);

/// Drops empty and duplicate containers and orders them by size.
void normalize(ContainerNeighborhood& n);

CliqueCount binomial(std::uint64_t n, std::uint64_t k);

/// ℓ-cliques containing u inside one container of `others` alters.
CliqueCount container_clique_count(std::size_t others, int order);

/// ℓ-cliques containing u that lie inside at least one container, by
/// inclusion-exclusion over container subsets.
CliqueCount clique_count_inclusion_exclusion(const ContainerNeighborhood& n, int order);

/// Same count by grouping alters with identical container membership; used
/// for persons with many containers.
CliqueCount clique_count_by_signature(const ContainerNeighborhood& n, int order);

/// Picks inclusion-exclusion up to 24 containers, the signature count beyond.
CliqueCount clique_count(const ContainerNeighborhood& n, int order);

struct HoccResult {
  PersonId person = 0;
  int order = 2;
  std::size_t degree = 0;
  CliqueCount k_l = 0;
  CliqueCount k_l1 = 0;
  std::optional<double> coefficient;
};

/// C_ℓ(u) = ℓ |K_{ℓ+1}| / ((d_u − ℓ + 1) |K_ℓ|); undefined when d_u ≤ ℓ − 1
/// or |K_ℓ| = 0.
HoccResult local_hocc(const ContainerNeighborhood& n, int order);
HoccResult local_hocc(const Graph& bipartite, PersonId person, int order);

struct HoccSummary {
  std::vector<HoccResult> nodes;  // sampled persons, sorted by id
  MetricTable histogram;          // bin_low, bin_high, count
  std::size_t defined = 0;
  std::optional<double> share_above_095;
  std::optional<double> mean;
};

/// Samples persons (all when sample >= person count) with the hocc.sample
/// stream and summarizes their coefficients in `bins` equal bins on [0, 1].
HoccSummary hocc_distribution(const Graph& bipartite, int order, std::size_t sample, std::uint64_t seed,
                              std::size_t threads = 1, int bins = 20);

std::string to_string(CliqueCount value);

}  // namespace focinet
