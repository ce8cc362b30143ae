#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "focinet/graph.hpp"
#include "focinet/household.hpp"
#include "focinet/layers.hpp"
#include "focinet/registry.hpp"
#include "focinet/synth.hpp"
#include "focinet/weights.hpp"

namespace focinet {

/// Registry, households and all layer slices held in memory.
class Network {
 public:
  Network(RegistryBundle bundle, LayerMask layers, const BuildOptions& options, std::size_t threads);

  const RegistryBundle& bundle() const { return *bundle_; }
  const RegistryIndex& index() const { return *index_; }
  const std::vector<HouseholdAssignment>& households() const { return households_; }
  const LayerSlice& slice(Layer layer, int year) const;
  bool has(Layer layer, int year) const;
  LayerMask layers() const { return layers_; }

 private:
  std::unique_ptr<RegistryBundle> bundle_;
  std::unique_ptr<RegistryIndex> index_;
  std::vector<HouseholdAssignment> households_;
  std::map<std::pair<Layer, int>, LayerSlice> slices_;
  LayerMask layers_;
};

/// Union of sorted unique pair lists.
std::vector<PersonPair> union_pairs(std::span<const std::vector<PersonPair>* const> parts);

/// Lorenz curve sampled at x = 0, 1/steps, ..., 1 by linear interpolation.
std::vector<std::pair<double, double>> lorenz_grid(std::span<const std::pair<double, double>> lorenz, int steps = 100);

struct ReproduceOptions {
  SynthConfig synth;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::size_t colleague_cap = 100;
  std::size_t path_sources = 100;
  std::size_t path_targets = 100;
  /// Prefix sizes of the source draw; sizes not below path_sources are skipped.
  std::vector<std::size_t> source_sweep{25, 50};
  std::size_t hocc_sample = 500;
  std::vector<int> hocc_orders{2, 3, 4};
  WeightParams weights;
};

/// Generates a synthetic registry and writes every analysis table into
/// `directory`, which must exist. Output depends only on the options, never on
/// the thread count. Returns the file names written.
std::vector<std::string> reproduce_all(const ReproduceOptions& options, const std::filesystem::path& directory);

}  // namespace focinet
