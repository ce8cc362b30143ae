#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "focinet/household.hpp"
#include "focinet/ids.hpp"
#include "focinet/registry.hpp"

namespace focinet {

enum class FamilyRelation : std::uint8_t {
  child,
  parent,
  full_sibling,
  half_sibling,
  sibling_unknown,
  grandchild,
  grandparent,
  aunt_uncle,
  niece_nephew,
  cousin,
  co_parent,
};

std::string_view to_string(FamilyRelation relation);
FamilyRelation parse_family_relation(std::string_view text);

/// `dst` is the `relation` of `src`: {child, parent, parent} means the
/// parent is the child's parent.
struct FamilyTie {
  PersonId src = 0;
  PersonId dst = 0;
  FamilyRelation relation = FamilyRelation::child;
  auto operator<=>(const FamilyTie&) const = default;
};

using PersonPair = std::pair<PersonId, PersonId>;  // first < second

/// One layer in one year, in both views.
struct LayerSlice {
  Layer layer = Layer::family;
  int year = 0;
  /// Node set of the layer (sorted): everyone the layer is defined for,
  /// including persons without ties.
  std::vector<PersonId> persons;
  /// Bipartite person -> container edges, sorted.
  std::vector<std::pair<PersonId, NodeId>> memberships;
  /// Neighborhood only: household -> address, then directed address -> address
  /// (one row per selecting/selected address pair). Sorted.
  std::vector<std::pair<NodeId, NodeId>> container_links;
  /// Unipartite edges, sorted and unique.
  std::vector<PersonPair> edges;
  /// Family only: typed directional ties between present persons.
  std::vector<FamilyTie> ties;
  /// Neighborhood only: households without usable coordinates.
  std::vector<HouseholdId> skipped;
};

/// All first- and second-degree ties derived from parent links, ignoring
/// presence. Both directions of every tie are listed; one relation per ordered pair.
std::vector<FamilyTie> family_ties(const RegistryIndex& index);

/// Ties with both endpoints born by `year` (deceased and emigrated relatives kept).
std::vector<FamilyTie> family_ties_in_year(const RegistryIndex& index, const std::vector<FamilyTie>& all, int year);

LayerSlice build_family(const RegistryIndex& index, const std::vector<FamilyTie>& all, int year);
LayerSlice build_household(const RegistryIndex& index, const HouseholdAssignment& assignment);

struct NeighborhoodParams {
  std::size_t max_neighbors = 10;
  double radius_m = 50.0;
};
LayerSlice build_neighborhood(const RegistryIndex& index, const HouseholdAssignment& assignment, std::uint64_t seed,
                              const NeighborhoodParams& params = {});

constexpr std::size_t kNoColleagueCap = std::numeric_limits<std::size_t>::max();
LayerSlice build_colleague(const RegistryIndex& index, int year, std::uint64_t seed, std::size_t cap = 100);

/// Interns (institution, program, grade) triples over the whole enrollment table.
class ClassIndex {
 public:
  explicit ClassIndex(const RegistryBundle& bundle);
  ContainerId id_of(const EnrollmentSpell& spell) const;
  std::size_t size() const { return keys_.size(); }

 private:
  std::vector<std::tuple<std::uint64_t, std::uint64_t, std::int64_t>> keys_;
};

LayerSlice build_classmate(const RegistryIndex& index, const ClassIndex& classes, int year);

struct BuildOptions {
  std::uint64_t seed = 1;
  std::size_t colleague_cap = 100;
  NeighborhoodParams neighborhood;
};

/// All five layers for every year of `households`, in layer order within year.
std::vector<LayerSlice> build_layers(const RegistryIndex& index, const std::vector<HouseholdAssignment>& households,
                                     LayerMask layers, const BuildOptions& options, std::size_t threads = 1);

/// Files per slice: edges_<layer>_<year>.csv, membership_<layer>_<year>.csv,
/// plus addr_links_<year>.csv and household_address_<year>.csv for the
/// neighborhood and relations_family_<year>.csv for the family layer.
void write_slice(const LayerSlice& slice, const std::filesystem::path& directory,
                 const std::vector<FamilyTie>* relations = nullptr);
LayerSlice read_slice(const std::filesystem::path& directory, Layer layer, int year);

}  // namespace focinet
