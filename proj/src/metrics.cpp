#include "focinet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "focinet/csv.hpp"
#include "focinet/errors.hpp"

namespace focinet {

Cell cell(std::optional<double> value) {
  if (!value) return Undefined{};
  return *value;
}

void MetricTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DataError(name + ": row has " + std::to_string(row.size()) + " cells, schema has " +
                    std::to_string(columns.size()));
  }
  for (auto& c : row) {
    if (auto* d = std::get_if<double>(&c); d && !std::isfinite(*d)) c = Undefined{};
  }
  rows.push_back(std::move(row));
}

void MetricTable::write(std::ostream& out) const {
  for (const auto& [k, v] : provenance) out << "# " << k << '=' << v << '\n';
  CsvWriter w(out);
  for (const auto& c : columns) w.field(c);
  w.end_row();
  for (const auto& row : rows) {
    for (const auto& c : row) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Undefined>) {
              w.field("NA");
            } else {
              w.field(v);
            }
          },
          c);
    }
    w.end_row();
  }
}

void MetricTable::write(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  write(out);
}

MetricTable edge_node_counts(std::span<const CountEntry> entries) {
  MetricTable t("edge_node_counts", {"layer", "view", "anchor_year", "span", "persons", "nodes", "edges"});
  for (const auto& e : entries) {
    t.add_row({e.layer, std::string(to_string(e.graph->kind())), std::int64_t{e.anchor_year}, std::int64_t{e.span},
               static_cast<std::int64_t>(e.graph->person_count()), static_cast<std::int64_t>(e.graph->node_count()),
               static_cast<std::int64_t>(e.graph->edge_count())});
  }
  return t;
}

namespace {

std::size_t intersection_size(std::span<const PersonPair> a, std::span<const PersonPair> b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

std::optional<double> edge_stability(std::span<const PersonPair> year, std::span<const PersonPair> next) {
  if (year.empty()) return std::nullopt;
  return static_cast<double>(intersection_size(year, next)) / static_cast<double>(year.size());
}

std::optional<double> overlap_share(std::span<const PersonPair> ref, std::span<const PersonPair> cmp) {
  if (ref.empty()) return std::nullopt;
  return static_cast<double>(intersection_size(ref, cmp)) / static_cast<double>(ref.size());
}

std::optional<std::vector<Point>> lorenz_points(std::vector<std::size_t> degrees) {
  std::sort(degrees.begin(), degrees.end());
  double total = 0;
  for (auto d : degrees) total += static_cast<double>(d);
  if (degrees.empty() || total == 0) return std::nullopt;
  std::vector<Point> pts{{0.0, 0.0}};
  const double n = static_cast<double>(degrees.size());
  double cum = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    cum += static_cast<double>(degrees[i]);
    pts.emplace_back(static_cast<double>(i + 1) / n, cum / total);
  }
  pts.back() = {1.0, 1.0};
  return pts;
}

double top_share(std::span<const Point> lorenz, double fraction) {
  const double x = 1.0 - fraction;
  for (std::size_t i = 1; i < lorenz.size(); ++i) {
    if (lorenz[i].first >= x) {
      auto [x0, y0] = lorenz[i - 1];
      auto [x1, y1] = lorenz[i];
      double y = x1 == x0 ? y1 : y0 + (y1 - y0) * (x - x0) / (x1 - x0);
      return 1.0 - y;
    }
  }
  return 0.0;
}

double gini(std::span<const Point> lorenz) {
  double area = 0;
  for (std::size_t i = 1; i < lorenz.size(); ++i) {
    area += (lorenz[i].first - lorenz[i - 1].first) * (lorenz[i].second + lorenz[i - 1].second) / 2.0;
  }
  return 1.0 - 2.0 * area;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DegreeSequence degree_sequence(const Graph& view, std::size_t threads) {
  DegreeSequence d;
  auto deg = person_degrees(view, kAllLayersMask, threads);
  for (std::size_t i = 0; i < view.person_count(); ++i) {
    d.persons.push_back(view.node(static_cast<std::uint32_t>(i)).id());
    d.degrees.push_back(static_cast<double>(deg[i]));
  }
  return d;
}

DegreeSequence degree_sequence(std::span<const PersonId> persons, std::span<const PersonPair> pairs) {
  DegreeSequence d;
  d.persons.assign(persons.begin(), persons.end());
  for (const auto& [a, b] : pairs) {
    d.persons.push_back(a);
    d.persons.push_back(b);
  }
  std::sort(d.persons.begin(), d.persons.end());
  d.persons.erase(std::unique(d.persons.begin(), d.persons.end()), d.persons.end());
  d.degrees.assign(d.persons.size(), 0.0);
  auto at = [&](PersonId p) { return std::lower_bound(d.persons.begin(), d.persons.end(), p) - d.persons.begin(); };
  for (const auto& [a, b] : pairs) {
    d.degrees[static_cast<std::size_t>(at(a))] += 1;
    d.degrees[static_cast<std::size_t>(at(b))] += 1;
  }
  return d;
}

Eigen::MatrixXd degree_correlation(std::span<const DegreeSequence> seqs) {
  const auto k = static_cast<Eigen::Index>(seqs.size());
  Eigen::MatrixXd r = Eigen::MatrixXd::Constant(k, k, std::nan(""));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i; j < k; ++j) {
      const auto& a = seqs[static_cast<std::size_t>(i)];
      const auto& b = seqs[static_cast<std::size_t>(j)];
      std::vector<double> x, y;
      std::size_t p = 0, q = 0;
      while (p < a.persons.size() && q < b.persons.size()) {
        if (a.persons[p] < b.persons[q]) {
          ++p;
        } else if (b.persons[q] < a.persons[p]) {
          ++q;
        } else {
          x.push_back(a.degrees[p++]);
          y.push_back(b.degrees[q++]);
        }
      }
      r(i, j) = r(j, i) = pearson(x, y).value_or(std::nan(""));
    }
  }
  return r;
}

Eigen::MatrixXd degree_correlation(std::span<const Graph* const> views) {
  std::vector<DegreeSequence> seqs;
  for (const Graph* v : views) seqs.push_back(degree_sequence(*v));
  return degree_correlation(seqs);
}

MetricTable degree_by_attribute(const Graph& view, const RegistryIndex& index, int year,
                                const AttributeGrouping& grouping, std::size_t threads) {
  const bool by_income = grouping.kind == AttributeGrouping::Kind::income_quantile;
  if (by_income && grouping.quantiles < 2) throw UsageError("need at least two income quantiles");
  auto degrees = person_degrees(view, kAllLayersMask, threads);
  auto present = population_mask(index.bundle(), year);

  struct Row {
    PersonId id;
    int birth_year;
    double income;
    std::size_t degree;
    int group;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < view.person_count(); ++i) {
    PersonId id = view.node(static_cast<std::uint32_t>(i)).id();
    if (!std::binary_search(present.begin(), present.end(), id)) continue;
    const auto* person = index.person(id);
    if (!person) continue;
    Row r{id, person->birth_year, 0.0, degrees[i], 0};
    if (by_income) {
      auto inc = index.income(id, year);
      if (!inc) continue;
      r.income = *inc;
    } else {
      r.group = person->sex == Sex::female ? 0 : 1;
    }
    rows.push_back(r);
  }
  if (by_income) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return std::tuple(a.birth_year, a.income, a.id) < std::tuple(b.birth_year, b.income, b.id);
    });
    std::size_t begin = 0;
    while (begin < rows.size()) {
      std::size_t end = begin;
      while (end < rows.size() && rows[end].birth_year == rows[begin].birth_year) ++end;
      const std::size_t n = end - begin;
      for (std::size_t k = begin; k < end; ++k) {
        rows[k].group = static_cast<int>((k - begin) * static_cast<std::size_t>(grouping.quantiles) / n);
      }
      begin = end;
    }
  }
  const int n_groups = by_income ? grouping.quantiles : 2;
  std::map<int, std::vector<std::pair<double, std::size_t>>> cells;  // age -> (sum, n) per group
  for (const auto& r : rows) {
    auto& v = cells[year - r.birth_year];
    v.resize(static_cast<std::size_t>(n_groups));
    v[static_cast<std::size_t>(r.group)].first += static_cast<double>(r.degree);
    ++v[static_cast<std::size_t>(r.group)].second;
  }
  MetricTable t("degree_by_attribute", {"age", "group", "n", "mean_degree"});
  for (const auto& [age, groups] : cells) {
    for (int g = 0; g < n_groups; ++g) {
      auto [sum, n] = groups[static_cast<std::size_t>(g)];
      std::string label = by_income ? "q" + std::to_string(g + 1) : (g == 0 ? "female" : "male");
      Cell mean = n ? Cell(sum / static_cast<double>(n)) : Cell(Undefined{});
      t.add_row({std::int64_t{age}, label, static_cast<std::int64_t>(n), mean});
    }
  }
  return t;
}

MetricTable degree_histogram(std::span<const std::size_t> degrees, int bins_per_decade) {
  if (bins_per_decade < 1) throw UsageError("bins per decade must be positive");
  MetricTable t("degree_histogram", {"bin_low", "bin_high", "count"});
  std::map<int, std::int64_t> bins;  // -1 = zero degree
  std::size_t max_degree = 0;
  for (auto d : degrees) {
    max_degree = std::max(max_degree, d);
    if (d == 0) {
      ++bins[-1];
      continue;
    }
    int b = static_cast<int>(std::floor(std::log10(static_cast<double>(d)) * bins_per_decade + 1e-9));
    // Guard against rounding at bin edges.
    while (std::pow(10.0, static_cast<double>(b) / bins_per_decade) > static_cast<double>(d) + 1e-9) --b;
    while (std::pow(10.0, static_cast<double>(b + 1) / bins_per_decade) <= static_cast<double>(d)) ++b;
    ++bins[b];
  }
  if (degrees.empty()) return t;
  if (bins.count(-1)) t.add_row({0.0, 1.0, bins[-1]});
  const int top = max_degree == 0 ? -1 : bins.rbegin()->first;
  for (int b = 0; b <= top; ++b) {
    double lo = std::pow(10.0, static_cast<double>(b) / bins_per_decade);
    double hi = std::pow(10.0, static_cast<double>(b + 1) / bins_per_decade);
    auto it = bins.find(b);
    t.add_row({lo, hi, it == bins.end() ? std::int64_t{0} : it->second});
  }
  return t;
}

}  // namespace focinet
