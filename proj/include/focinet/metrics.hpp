#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "focinet/graph.hpp"
#include "focinet/registry.hpp"

namespace focinet {

/// Missing or undefined value; written as NA.
struct Undefined {
  bool operator==(const Undefined&) const = default;
};

using Cell = std::variant<Undefined, std::int64_t, double, std::string>;

Cell cell(std::optional<double> value);

/// A named table with a fixed column schema. Provenance lines are written as
/// leading "# key=value" comments.
struct MetricTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> provenance;

  MetricTable() = default;
  MetricTable(std::string name, std::vector<std::string> columns) : name(std::move(name)), columns(std::move(columns)) {}

  /// Throws DataError on a width mismatch. NaN and infinite doubles become Undefined.
  void add_row(std::vector<Cell> row);
  void write(std::ostream& out) const;
  void write(const std::filesystem::path& file) const;
};

struct CountEntry {
  std::string layer;
  int anchor_year = 0;
  int span = 0;
  const Graph* graph = nullptr;
};

/// Columns: layer, view, anchor_year, span, persons, nodes, edges.
MetricTable edge_node_counts(std::span<const CountEntry> entries);

/// |E_y ∩ E_next| / |E_y|; nullopt when E_y is empty. Inputs sorted and unique.
std::optional<double> edge_stability(std::span<const PersonPair> year, std::span<const PersonPair> next);

/// |E_ref ∩ E_cmp| / |E_ref|; nullopt when E_ref is empty. Inputs sorted and unique.
std::optional<double> overlap_share(std::span<const PersonPair> ref, std::span<const PersonPair> cmp);

using Point = std::pair<double, double>;

/// (0,0), then (i/n, cumulative share of the i smallest degrees); nullopt for
/// an empty or all-zero sequence.
std::optional<std::vector<Point>> lorenz_points(std::vector<std::size_t> degrees);

/// Share of all degree held by the top `fraction` of nodes, read off the curve
/// by linear interpolation.
double top_share(std::span<const Point> lorenz, double fraction);

double gini(std::span<const Point> lorenz);

/// Pearson r; nullopt when either sequence is constant or shorter than 2.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct DegreeSequence {
  std::vector<PersonId> persons;  // sorted
  std::vector<double> degrees;
};

DegreeSequence degree_sequence(const Graph& view, std::size_t threads = 1);
/// Degrees from unique person pairs; endpoints missing from `persons` are added.
DegreeSequence degree_sequence(std::span<const PersonId> persons, std::span<const PersonPair> pairs);

/// Symmetric matrix of Pearson correlations between person degrees of each
/// pair of sequences, over persons in both node sets. NaN marks an undefined cell.
Eigen::MatrixXd degree_correlation(std::span<const DegreeSequence> sequences);
Eigen::MatrixXd degree_correlation(std::span<const Graph* const> views);

struct AttributeGrouping {
  enum class Kind : std::uint8_t { income_quantile, sex } kind = Kind::income_quantile;
  int quantiles = 4;
};

/// Mean person degree per (age, group) cell for persons of the view alive in
/// `year`. Income quantiles are taken within each birth-year cohort. Columns:
/// age, group, n, mean_degree. Empty cells carry NA.
MetricTable degree_by_attribute(const Graph& view, const RegistryIndex& index, int year,
                                const AttributeGrouping& grouping, std::size_t threads = 1);

/// Log-spaced bins [lo, hi); degree 0 gets its own bin. Columns: bin_low,
/// bin_high, count. Counts sum to the number of degrees.
MetricTable degree_histogram(std::span<const std::size_t> degrees, int bins_per_decade = 10);

}  // namespace focinet
