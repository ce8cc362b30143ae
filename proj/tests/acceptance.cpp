// Acceptance checks. Prints one PASS/FAIL line per criterion; optional
// arguments select criteria by number.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fixtures.hpp"
#include "household_scenarios.hpp"
#include "focinet/cli.hpp"
#include "focinet/hocc.hpp"
#include "focinet/metrics.hpp"
#include "focinet/paths.hpp"
#include "focinet/synth.hpp"
#include "focinet/weights.hpp"

using namespace focinet;
namespace fs = std::filesystem;

namespace {

class Verdict {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failure_.empty()) failure_ = what;
    ok_ = ok_ && ok;
  }
  bool ok() const { return ok_; }
  std::size_t checks() const { return checks_; }
  const std::string& failure() const { return failure_; }
  std::string note;

 private:
  bool ok_ = true;
  std::size_t checks_ = 0;
  std::string failure_;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 6) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double distance(const Graph& weighted, PersonId a, PersonId b) {
  std::vector<PersonId> s{a};
  std::vector<PersonId> t{b};
  auto d = shortest_distances(weighted, s, t);
  return d.distances.empty() ? std::numeric_limits<double>::infinity() : d.distances.front().distance;
}

Verdict weight_identities() {
  Verdict v;
  const auto start = Clock::now();
  auto w = apply_weights(fixtures::residential_view());
  const double hh = distance(w, 1, 2);
  const double addr = distance(w, 1, 3);
  const double nb = distance(w, 1, 4);
  const double elapsed = seconds_since(start);
  v.expect(std::abs(hh - 1.0 / 3.0) <= 1e-12, "household pair " + fmt(hh, 17));
  v.expect(std::abs(addr - 1.0) <= 1e-12, "same address " + fmt(addr, 17));
  v.expect(std::abs(nb - 1.5) <= 1e-12, "neighbors " + fmt(nb, 17));
  v.expect(elapsed < 1.0, "runtime " + fmt(elapsed) + " s");
  v.note = "household " + fmt(hh) + ", address " + fmt(addr) + ", neighbors " + fmt(nb) + " in " + fmt(elapsed, 3) + " s";
  return v;
}

Verdict kregular() {
  Verdict v;
  WeightParams natural;
  WeightParams ten;
  ten.log_base = LogBase::ten;
  const double dn = kregular_distance(500, natural);
  const double dt = kregular_distance(500, ten);
  const double d2 = kregular_distance(2, natural);
  v.expect(std::abs(dn - 2.3788) <= 1e-3, "natural log " + fmt(dn));
  v.expect(std::abs(dt - 2.12) <= 0.01, "base ten " + fmt(dt));
  v.expect(d2 == 1.0, "d(2) " + fmt(d2));
  v.note = "d(500,20) natural " + fmt(dn, 5) + ", base ten " + fmt(dt, 4) + ", d(2,20) " + fmt(d2);
  return v;
}

Verdict hocc_correctness() {
  Verdict v;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::size_t counts = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t alters = 1 + rng() % 20;
    std::vector<std::vector<PersonId>> cs(1 + rng() % 6);
    for (auto& c : cs) {
      std::set<PersonId> s;
      const std::size_t size = 1 + rng() % alters;
      while (s.size() < size) s.insert(1 + rng() % alters);
      c.assign(s.begin(), s.end());
    }
    ContainerNeighborhood n;
    n.person = 0;
    n.containers = cs;
    normalize(n);
    for (int order = 2; order <= 7; ++order) {
      const auto want = static_cast<CliqueCount>(fixtures::brute_force_cliques(cs, order));
      v.expect(clique_count_inclusion_exclusion(n, order) == want,
               "instance " + std::to_string(trial) + " order " + std::to_string(order));
      ++counts;
    }
  }

  std::size_t compared = 0;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nodes = 3 + rng() % 10;
    std::vector<std::vector<bool>> adj(nodes, std::vector<bool>(nodes, false));
    const double density = 0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0;
    for (std::size_t i = 0; i < nodes; ++i) {
      for (std::size_t j = i + 1; j < nodes; ++j) {
        if (static_cast<double>(rng() % 1000) / 1000.0 < density) adj[i][j] = adj[j][i] = true;
      }
    }
    // Maximal cliques as containers project back onto exactly this graph.
    std::vector<std::vector<PersonId>> cs;
    for (const auto& q : fixtures::maximal_cliques(adj)) {
      if (q.size() < 2) continue;
      std::vector<PersonId> c;
      for (std::size_t x : q) c.push_back(static_cast<PersonId>(x + 1));
      std::sort(c.begin(), c.end());
      cs.push_back(c);
    }
    auto view = fixtures::containers_view(cs);
    for (std::size_t u = 0; u < nodes; ++u) {
      const auto want = fixtures::textbook_clustering(adj, u);
      if (!view.index_of(NodeId::person(u + 1))) {
        v.expect(!want.has_value(), "isolated node has a coefficient");
        continue;
      }
      auto r = local_hocc(view, static_cast<PersonId>(u + 1), 2);
      v.expect(r.coefficient.has_value() == want.has_value(), "definedness differs");
      if (want && r.coefficient) {
        worst = std::max(worst, std::abs(*r.coefficient - *want));
        ++compared;
      }
    }
  }
  v.expect(worst <= 1e-12, "C_2 deviation " + fmt(worst));
  const double elapsed = seconds_since(start);
  v.expect(elapsed < 30.0, "runtime " + fmt(elapsed) + " s");
  v.note = std::to_string(counts) + " exact counts, " + std::to_string(compared) + " C_2 values within " + fmt(worst, 3) +
           " in " + fmt(elapsed, 3) + " s";
  return v;
}

Verdict dual_view() {
  Verdict v;
  const auto start = Clock::now();
  SynthConfig c;
  c.resize(10000);
  c.start_year = 2019;
  c.end_year = 2021;
  const auto bundle = generate(c);
  RegistryIndex index(bundle);
  auto hh = assign_household_years(index, 2020, 2021);
  const LayerMask unsampled = layer_bit(Layer::family) | layer_bit(Layer::household) | layer_bit(Layer::classmate);
  auto slices = build_layers(index, hh, unsampled, BuildOptions{}, 1);
  for (int y = 2020; y <= 2021; ++y) slices.push_back(build_colleague(index, y, 1, kNoColleagueCap));
  std::size_t pairs = 0;
  for (const auto& s : slices) {
    const auto projected = person_pairs(project(bipartite_view(s)));
    const auto direct = person_pairs(unipartite_view(s));
    v.expect(projected == direct, std::string(layer_name(s.layer)) + " " + std::to_string(s.year));
    pairs += direct.size();
  }

  fixtures::BundleBuilder bb;
  bb.address(1, 0, 0);
  for (PersonId p = 1; p <= 101; ++p) bb.person(p, 2005).live(p, 2020, 1).enroll(p, 2020, 1, 1, 9);
  auto small = bb.build();
  RegistryIndex small_index(small);
  ClassIndex classes(small);
  auto cls = build_classmate(small_index, classes, 2020);
  const double bip = static_cast<double>(bipartite_view(cls).edge_count());
  const double uni = static_cast<double>(unipartite_view(cls).edge_count());
  const double ratio = bip / uni;
  v.expect(bip == 101 && uni == 5050, "class edge counts " + fmt(bip) + "/" + fmt(uni));
  v.expect(std::abs(ratio - 0.0198) <= 5e-4, "ratio " + fmt(ratio));
  const double elapsed = seconds_since(start);
  v.expect(elapsed < 60.0, "runtime " + fmt(elapsed) + " s");
  v.note = std::to_string(slices.size()) + " slices (" + std::to_string(pairs) +
           " pairs) project exactly; class of 101 ratio " + fmt(ratio, 4) + " in " + fmt(elapsed, 3) + " s";
  return v;
}

struct FourteenYears {
  RegistryBundle bundle;
  std::vector<LayerSlice> slices;
  const LayerSlice& slice(Layer layer, int year) const {
    for (const auto& s : slices) {
      if (s.layer == layer && s.year == year) return s;
    }
    throw std::out_of_range("slice");
  }
};

const FourteenYears& fourteen_years() {
  static const FourteenYears f = [] {
    FourteenYears out;
    SynthConfig c;
    c.resize(4000);
    c.start_year = 2008;
    c.end_year = 2021;
    out.bundle = generate(c);
    RegistryIndex index(out.bundle);
    auto hh = assign_household_years(index, 2008, 2021);
    out.slices = build_layers(index, hh, kAllLayersMask, BuildOptions{}, std::thread::hardware_concurrency());
    return out;
  }();
  return f;
}

std::string snapshot_bytes(const Graph& g, const fs::path& file) {
  write_snapshot(g, file);
  return fixtures::slurp(file);
}

std::set<std::pair<NodeId, NodeId>> endpoint_set(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const auto& e : g.edges()) out.emplace(e.a, e.b);
  return out;
}

Verdict span_monotonicity() {
  Verdict v;
  const auto& data = fourteen_years();
  const int anchor = 2021;
  const int max_span = 13;
  const auto dir = fixtures::scratch("acceptance_span");
  std::map<Layer, std::vector<std::vector<PersonPair>>> spanned;
  std::size_t byte_checks = 0;

  for (Layer layer : kAllLayers) {
    std::map<int, Graph> uni;
    std::map<int, Graph> bip;
    for (const auto& s : data.slices) {
      if (s.layer != layer) continue;
      uni[s.year] = unipartite_view(s);
      bip[s.year] = bipartite_view(s);
    }
    const std::string name(layer_name(layer));
    for (const auto& [year, g] : uni) {
      v.expect(snapshot_bytes(merge_timespan(uni, TimeSpan{year, 0}), dir / "a.bin") == snapshot_bytes(g, dir / "b.bin"),
               name + " unipartite span 0 " + std::to_string(year));
      v.expect(snapshot_bytes(merge_timespan(bip, TimeSpan{year, 0}), dir / "a.bin") ==
                   snapshot_bytes(bip.at(year), dir / "b.bin"),
               name + " bipartite span 0 " + std::to_string(year));
      byte_checks += 2;
    }

    std::vector<PersonPair> prev_pairs;
    std::set<std::pair<NodeId, NodeId>> prev_bip;
    DegreeSequence prev_deg;
    auto& series = spanned[layer];
    for (int s = 0; s <= max_span; ++s) {
      const std::string at = name + " span " + std::to_string(s);
      auto u = merge_timespan(uni, TimeSpan{anchor, s});
      auto pairs = person_pairs(u);
      v.expect(std::includes(pairs.begin(), pairs.end(), prev_pairs.begin(), prev_pairs.end()), at + " unipartite edges");
      auto b = endpoint_set(merge_timespan(bip, TimeSpan{anchor, s}));
      v.expect(std::includes(b.begin(), b.end(), prev_bip.begin(), prev_bip.end()), at + " bipartite edges");
      auto deg = degree_sequence(u);
      for (std::size_t i = 0; i < prev_deg.persons.size(); ++i) {
        auto it = std::lower_bound(deg.persons.begin(), deg.persons.end(), prev_deg.persons[i]);
        const bool present = it != deg.persons.end() && *it == prev_deg.persons[i];
        v.expect(present && deg.degrees[static_cast<std::size_t>(it - deg.persons.begin())] >= prev_deg.degrees[i],
                 at + " degree of person " + std::to_string(prev_deg.persons[i]));
      }
      series.push_back(pairs);
      prev_pairs = std::move(pairs);
      prev_bip = std::move(b);
      prev_deg = std::move(deg);
    }
  }

  std::size_t share_checks = 0;
  for (Layer ref : kAllLayers) {
    const auto& ref_edges = data.slice(ref, anchor).edges;
    for (Layer cmp : kAllLayers) {
      if (cmp == ref) continue;
      std::optional<double> prev;
      for (int s = 0; s <= max_span; ++s) {
        auto share = overlap_share(ref_edges, spanned[cmp][static_cast<std::size_t>(s)]);
        if (prev && share) v.expect(*share >= *prev, std::string(layer_name(ref)) + "/" + std::string(layer_name(cmp)));
        if (share) prev = share;
        ++share_checks;
      }
    }
  }
  fs::remove_all(dir);
  v.note = "14 years, spans 0.." + std::to_string(max_span) + "; " + std::to_string(byte_checks) +
           " span-0 snapshots byte-identical; " + std::to_string(share_checks) + " overlap shares monotone";
  return v;
}

Verdict path_oracle() {
  Verdict v;
  std::mt19937_64 rng(99);
  std::size_t compared = 0;
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto toy = fixtures::random_toy(rng, 2 + rng() % 49);
    auto oracle = fixtures::floyd_warshall(toy.ids.size(), toy.edges);
    std::vector<PersonId> persons;
    for (NodeId id : toy.ids) {
      if (id.is_person()) persons.push_back(id.id());
    }
    auto d = shortest_distances(toy.graph, persons, persons);
    std::map<std::pair<PersonId, PersonId>, double> got;
    for (const auto& pd : d.distances) got[{pd.source, pd.target}] = pd.distance;
    for (std::size_t i = 0; i < toy.ids.size(); ++i) {
      for (std::size_t j = 0; j < toy.ids.size(); ++j) {
        if (i == j || !toy.ids[i].is_person() || !toy.ids[j].is_person()) continue;
        auto it = got.find({toy.ids[i].id(), toy.ids[j].id()});
        if (std::isinf(oracle[i][j])) {
          v.expect(it == got.end(), "unreachable pair reported");
        } else if (it == got.end()) {
          v.expect(false, "reachable pair missing");
        } else {
          worst = std::max(worst, std::abs(it->second - oracle[i][j]));
          ++compared;
        }
      }
    }
  }
  v.expect(worst <= 1e-9, "max deviation " + fmt(worst));

  const int y = 2020;
  auto b = fixtures::BundleBuilder()
               .person(1, 1980).person(2, 1970)
               .address(1, 0, 0).address(2, 20, 0)
               .live(1, y, 1).live(2, y, 2)
               .build();
  RegistryIndex index(b);
  auto view = bipartite_view(build_neighborhood(index, assign_households(index, y), 1));
  WeightParams unit;
  unit.unweighted = true;
  const double hops = distance(apply_weights(view, unit), 1, 2);
  v.expect(hops == 5.0, "unweighted neighbor distance " + fmt(hops));
  v.note = std::to_string(compared) + " pairs on 200 graphs within " + fmt(worst, 3) + "; unweighted neighbor distance " +
           fmt(hops);
  return v;
}

Verdict household_rules() {
  Verdict v;
  std::size_t n = 0;
  for (const auto& o : scenarios::all()) {
    v.expect(o.pass, o.name + ": " + o.detail);
    ++n;
  }
  v.note = std::to_string(n) + " scenarios: child age 24/25, age gap 14/16, split and reform, collective of 11, "
           "leave and return";
  return v;
}

std::vector<std::string> regular_files(const fs::path& dir) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

Verdict determinism() {
  Verdict v;
  const auto dir = fixtures::scratch("acceptance_repro");
  const unsigned many = std::max(4u, std::thread::hardware_concurrency());
  auto reproduce = [&](unsigned threads, const std::string& out) {
    std::vector<std::string> args{"focinet", "--threads", std::to_string(threads), "reproduce-all", "--seed", "1",
                                  "--persons", "100000", "--years", "2008..2021", "--out", (dir / out).string()};
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream sink;
    std::ostringstream err;
    const auto start = Clock::now();
    const int code = run(static_cast<int>(argv.size()), argv.data(), sink, err);
    const double elapsed = seconds_since(start);
    v.expect(code == 0, "exit " + std::to_string(code) + ": " + err.str());
    v.expect(elapsed < 600.0, "threads " + std::to_string(threads) + " took " + fmt(elapsed) + " s");
    return elapsed;
  };
  const double t1 = reproduce(1, "one");
  const double tn = reproduce(many, "many");
  std::size_t compared = 0;
  if (v.ok()) {
    const auto names = regular_files(dir / "one");
    v.expect(names == regular_files(dir / "many"), "file lists differ");
    for (const auto& n : names) {
      if (n == "manifest.txt") continue;
      v.expect(fixtures::slurp(dir / "one" / n) == fixtures::slurp(dir / "many" / n), n + " differs");
      ++compared;
    }
  }
  fs::remove_all(dir);
  v.note = "100k persons x 14 years; " + std::to_string(compared) + " files identical; threads 1 " + fmt(t1, 4) +
           " s, threads " + std::to_string(many) + " " + fmt(tn, 4) + " s";
  return v;
}

Verdict metric_sanity() {
  Verdict v;
  const auto& data = fourteen_years();
  std::size_t curves = 0;
  std::size_t shares = 0;
  std::vector<DegreeSequence> sequences;
  for (const auto& s : data.slices) {
    if (s.year != 2021) continue;
    auto g = unipartite_view(s);
    auto d = person_degrees(g);
    auto pts = lorenz_points(d);
    if (!pts) continue;
    const std::string name(layer_name(s.layer));
    v.expect(pts->front() == Point{0.0, 0.0}, name + " Lorenz start");
    v.expect(std::abs(pts->back().first - 1.0) <= 1e-12 && std::abs(pts->back().second - 1.0) <= 1e-12,
             name + " Lorenz end");
    for (std::size_t i = 2; i < pts->size(); ++i) {
      const auto& [x0, y0] = (*pts)[i - 2];
      const auto& [x1, y1] = (*pts)[i - 1];
      const auto& [x2, y2] = (*pts)[i];
      // Slope of each segment is at least the slope of the previous one.
      v.expect((y2 - y1) * (x1 - x0) >= (y1 - y0) * (x2 - x1) - 1e-12, name + " Lorenz convexity");
    }
    ++curves;
    sequences.push_back(degree_sequence(g));
  }

  for (const auto& a : data.slices) {
    for (const auto& b : data.slices) {
      if (a.layer == b.layer && b.year == a.year + 1) {
        if (auto st = edge_stability(a.edges, b.edges)) {
          v.expect(*st >= 0.0 && *st <= 1.0, "stability " + fmt(*st));
          ++shares;
        }
      }
      if (a.year == b.year && a.layer != b.layer) {
        if (auto ov = overlap_share(a.edges, b.edges)) {
          v.expect(*ov >= 0.0 && *ov <= 1.0, "overlap " + fmt(*ov));
          ++shares;
        }
      }
    }
  }

  std::vector<DegreeSequence> doubled;
  for (const auto& s : sequences) {
    doubled.push_back(s);
    doubled.push_back(s);
  }
  auto m = degree_correlation(doubled);
  for (Eigen::Index i = 0; i + 1 < m.rows(); i += 2) {
    v.expect(std::abs(m(i, i + 1) - 1.0) <= 1e-12, "self-layer correlation " + fmt(m(i, i + 1), 17));
  }

  std::mt19937_64 rng(17);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 30;
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng() % 50);
      y[i] = static_cast<double>(rng() % 50);
    }
    auto got = pearson(x, y);
    auto want = fixtures::pearson_direct(x, y);
    v.expect(got.has_value() == want.has_value(), "Pearson definedness");
    if (got && want) worst = std::max(worst, std::abs(*got - *want));
  }
  v.expect(worst <= 1e-12, "Pearson deviation " + fmt(worst));
  v.note = std::to_string(curves) + " Lorenz curves convex, " + std::to_string(shares) + " shares in [0,1], " +
           std::to_string(sequences.size()) + " self correlations 1, Pearson within " + fmt(worst, 3);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, weight_identities}, {2, kregular},      {3, hocc_correctness}, {4, dual_view},    {5, span_monotonicity},
      {6, path_oracle},       {7, household_rules}, {8, determinism},    {9, metric_sanity},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));
  int failed = 0;
  for (const auto& [n, check] : criteria) {
    if (!wanted.empty() && !wanted.count(n)) continue;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.expect(false, std::string("exception: ") + e.what());
    }
    if (v.ok()) {
      std::cout << "PASS " << n << ": " << v.note << " (" << v.checks() << " checks)\n";
    } else {
      std::cout << "FAIL " << n << ": " << v.failure() << "\n";
      ++failed;
    }
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
