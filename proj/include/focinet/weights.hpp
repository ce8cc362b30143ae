#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include "focinet/graph.hpp"

namespace focinet {

enum class LogBase : std::uint8_t { natural, ten };

struct WeightParams {
  double family = 1.0;
  double person_household = 1.0 / 6.0;
  double household_address = 1.0 / 3.0;
  double address_address = 0.5;
  double k = 20.0;
  double gamma = 0.5772156649;
  LogBase log_base = LogBase::natural;
  /// Multiplier per layer, indexed by Layer. Person-household edges count as
  /// household, household-address and address-address edges as neighborhood.
  std::array<double, 5> layer_factor{1.0, 1.0, 1.0, 1.0, 1.0};
  /// When set, person-workplace and person-class edges get this weight
  /// instead of the size-scaled one.
  std::optional<double> uniform_container;
  /// Every edge weighs 1.
  bool unweighted = false;

  /// Throws UsageError unless every weight is positive and k >= 3.
  void check() const;
};

/// Reads a [weights] section: family, person_household, household_address,
/// address_address, k, gamma, log_base (natural|ten), factor_<layer>,
/// uniform_container, unweighted.
WeightParams load_weight_params(const std::filesystem::path& file);

/// Mean distance in a random k-regular graph of n nodes, clamped below at 1.
/// Throws UsageError for n < 2.
double kregular_distance(double n, const WeightParams& params = {});

/// Weight of a person->container edge for a container of `container_size`
/// persons, before layer factors. Only household, colleague and classmate
/// have containers; other layers throw UsageError.
double container_edge_weight(Layer layer, std::size_t container_size, const WeightParams& params = {});

/// Weighted copy of a bipartite view. Container size is the number of person
/// neighbors of the container node in the view.
Graph apply_weights(const Graph& bipartite, const WeightParams& params = {});

/// Unit weights for a unipartite view.
Graph unit_weights(const Graph& unipartite);

}  // namespace focinet
