#include "focinet/layers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_map>

#include "focinet/csv.hpp"
#include "focinet/errors.hpp"
#include "focinet/parallel.hpp"
#include "focinet/rng.hpp"

namespace focinet {

namespace {

constexpr std::array<std::string_view, 11> kRelationNames{
    "child",        "parent",      "full_sibling", "half_sibling", "sibling_unknown", "grandchild",
    "grandparent",  "aunt_uncle",  "niece_nephew", "cousin",       "co_parent"};

template <typename T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool in_sorted(const std::vector<PersonId>& v, PersonId id) { return std::binary_search(v.begin(), v.end(), id); }

void add_clique(const std::vector<PersonId>& members, std::vector<PersonPair>& out) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) out.emplace_back(members[i], members[j]);
  }
}

PersonPair ordered(PersonId a, PersonId b) { return a < b ? PersonPair{a, b} : PersonPair{b, a}; }

FamilyRelation sibling_type(std::span<const PersonId> pa, std::span<const PersonId> pb) {
  if (pa.size() >= 2 && std::equal(pa.begin(), pa.end(), pb.begin(), pb.end())) return FamilyRelation::full_sibling;
  if (pa.size() >= 2 && pb.size() >= 2) return FamilyRelation::half_sibling;
  return FamilyRelation::sibling_unknown;
}

}  // namespace

std::string_view to_string(FamilyRelation relation) { return kRelationNames[static_cast<std::size_t>(relation)]; }

FamilyRelation parse_family_relation(std::string_view text) {
  for (std::size_t i = 0; i < kRelationNames.size(); ++i) {
    if (kRelationNames[i] == text) return static_cast<FamilyRelation>(i);
  }
  throw DataError("unknown family relation '" + std::string(text) + "'");
}

std::vector<FamilyTie> family_ties(const RegistryIndex& index) {
  std::vector<FamilyTie> ties;
  auto add = [&](PersonId src, PersonId dst, FamilyRelation rel) {
    if (src != dst) ties.push_back({src, dst, rel});
  };
  for (const auto& person : index.bundle().persons) {
    const PersonId c = person.person_id;
    auto parents = index.parents(c);
    for (std::size_t i = 0; i < parents.size(); ++i) {
      const PersonId p = parents[i];
      add(c, p, FamilyRelation::parent);
      add(p, c, FamilyRelation::child);
      for (std::size_t j = i + 1; j < parents.size(); ++j) {
        add(p, parents[j], FamilyRelation::co_parent);
        add(parents[j], p, FamilyRelation::co_parent);
      }
      for (PersonId gp : index.parents(p)) {
        add(c, gp, FamilyRelation::grandparent);
        add(gp, c, FamilyRelation::grandchild);
        // Siblings of the parent are aunts and uncles; their children are cousins.
        for (PersonId s : index.children(gp)) {
          if (s == p) continue;
          add(c, s, FamilyRelation::aunt_uncle);
          add(s, c, FamilyRelation::niece_nephew);
          for (PersonId k : index.children(s)) add(c, k, FamilyRelation::cousin);
        }
      }
      for (PersonId s : index.children(p)) {
        if (s != c) add(c, s, sibling_type(parents, index.parents(s)));
      }
    }
  }
  std::sort(ties.begin(), ties.end());
  // One relation per ordered pair; the enum order is the precedence.
  ties.erase(std::unique(ties.begin(), ties.end(),
                         [](const FamilyTie& a, const FamilyTie& b) { return a.src == b.src && a.dst == b.dst; }),
             ties.end());
  return ties;
}

std::vector<FamilyTie> family_ties_in_year(const RegistryIndex& index, const std::vector<FamilyTie>& all, int year) {
  std::vector<FamilyTie> out;
  for (const auto& t : all) {
    if (index.person(t.src)->birth_year <= year && index.person(t.dst)->birth_year <= year) out.push_back(t);
  }
  return out;
}

LayerSlice build_family(const RegistryIndex& index, const std::vector<FamilyTie>& all, int year) {
  LayerSlice s;
  s.layer = Layer::family;
  s.year = year;
  s.persons = population_mask(index.bundle(), year);
  for (const auto& t : all) {
    if (in_sorted(s.persons, t.src) && in_sorted(s.persons, t.dst)) {
      s.ties.push_back(t);
      s.edges.push_back(ordered(t.src, t.dst));
    }
  }
  sort_unique(s.edges);
  return s;
}

LayerSlice build_household(const RegistryIndex& index, const HouseholdAssignment& assignment) {
  LayerSlice s;
  s.layer = Layer::household;
  s.year = assignment.year;
  auto mask = population_mask(index.bundle(), assignment.year);
  for (const auto& h : assignment.households) {
    std::vector<PersonId> members;
    for (PersonId p : h.members) {
      if (in_sorted(mask, p)) members.push_back(p);
    }
    for (PersonId p : members) {
      s.persons.push_back(p);
      s.memberships.emplace_back(p, NodeId::container(Layer::household, h.id));
    }
    add_clique(members, s.edges);
  }
  sort_unique(s.persons);
  sort_unique(s.memberships);
  sort_unique(s.edges);
  return s;
}

LayerSlice build_neighborhood(const RegistryIndex& index, const HouseholdAssignment& assignment, std::uint64_t seed,
                              const NeighborhoodParams& params) {
  LayerSlice s;
  s.layer = Layer::neighborhood;
  s.year = assignment.year;
  auto mask = population_mask(index.bundle(), assignment.year);

  struct Site {
    const Household* household;
    double x, y;
    std::vector<PersonId> members;
  };
  std::vector<Site> sites;
  for (const auto& h : assignment.households) {
    const auto* a = index.address(h.address);
    if (!a || !std::isfinite(a->x) || !std::isfinite(a->y)) {
      s.skipped.push_back(h.id);
      continue;
    }
    Site site{&h, a->x, a->y, {}};
    for (PersonId p : h.members) {
      if (in_sorted(mask, p)) site.members.push_back(p);
    }
    sites.push_back(std::move(site));
  }

  const double cell = params.radius_m;
  auto cell_of = [&](double v) { return static_cast<std::int64_t>(std::floor(v / cell)); };
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < sites.size(); ++i) grid[{cell_of(sites[i].x), cell_of(sites[i].y)}].push_back(i);

  const CounterRng base(seed, "layer.neighborhood", static_cast<std::uint64_t>(assignment.year));
  const double r2 = params.radius_m * params.radius_m;
  std::vector<std::pair<double, std::size_t>> candidates;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const auto& me = sites[i];
    candidates.clear();
    const auto cx = cell_of(me.x);
    const auto cy = cell_of(me.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = grid.find({cx + dx, cy + dy});
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (j == i) continue;
          double ex = sites[j].x - me.x;
          double ey = sites[j].y - me.y;
          double d2 = ex * ex + ey * ey;
          if (d2 <= r2) candidates.emplace_back(d2, j);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    std::vector<std::size_t> chosen;
    if (candidates.size() <= params.max_neighbors) {
      for (auto& c : candidates) chosen.push_back(c.second);
    } else {
      const double cutoff = candidates[params.max_neighbors - 1].first;
      std::vector<std::size_t> tied;
      for (auto& c : candidates) {
        if (c.first < cutoff) {
          chosen.push_back(c.second);
        } else if (c.first == cutoff) {
          tied.push_back(c.second);
        }
      }
      auto rng = base.derive(me.household->id);
      for (auto k : rng.sample_indices(tied.size(), params.max_neighbors - chosen.size())) chosen.push_back(tied[k]);
    }
    for (std::size_t j : chosen) {
      const auto& other = sites[j];
      for (PersonId a : me.members) {
        for (PersonId b : other.members) s.edges.push_back(ordered(a, b));
      }
      if (other.household->address != me.household->address) {
        s.container_links.emplace_back(NodeId::address(me.household->address),
                                       NodeId::address(other.household->address));
      }
    }
  }
  for (const auto& site : sites) {
    s.container_links.emplace_back(NodeId::container(Layer::household, site.household->id),
                                   NodeId::address(site.household->address));
    for (PersonId p : site.members) {
      s.persons.push_back(p);
      s.memberships.emplace_back(p, NodeId::container(Layer::household, site.household->id));
    }
  }
  sort_unique(s.persons);
  sort_unique(s.memberships);
  sort_unique(s.container_links);
  sort_unique(s.edges);
  std::sort(s.skipped.begin(), s.skipped.end());
  return s;
}

LayerSlice build_colleague(const RegistryIndex& index, int year, std::uint64_t seed, std::size_t cap) {
  LayerSlice s;
  s.layer = Layer::colleague;
  s.year = year;
  auto mask = population_mask(index.bundle(), year);
  std::map<WorkplaceId, std::vector<PersonId>> staff;
  for (const auto& e : index.bundle().employment) {
    if (e.year != year || !in_sorted(mask, e.person_id)) continue;
    s.persons.push_back(e.person_id);
    if (!e.fictional) staff[e.workplace_id].push_back(e.person_id);
  }
  const CounterRng base(seed, "layer.colleague", static_cast<std::uint64_t>(year));
  for (auto& [wid, members] : staff) {
    sort_unique(members);
    for (PersonId p : members) s.memberships.emplace_back(p, NodeId::container(Layer::colleague, wid));
    const std::size_t n = members.size();
    if (cap == kNoColleagueCap || n <= cap + 1) {
      add_clique(members, s.edges);
      continue;
    }
    auto rng = base.derive(wid);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto k : rng.sample_indices(n - 1, cap)) {
        std::size_t j = k < i ? k : k + 1;
        s.edges.push_back(ordered(members[i], members[j]));
      }
    }
  }
  sort_unique(s.persons);
  sort_unique(s.memberships);
  sort_unique(s.edges);
  return s;
}

ClassIndex::ClassIndex(const RegistryBundle& bundle) {
  for (const auto& e : bundle.enrollment) keys_.emplace_back(e.institution_id, e.program_id, e.grade_or_cohort);
  sort_unique(keys_);
}

ContainerId ClassIndex::id_of(const EnrollmentSpell& e) const {
  auto key = std::tuple(e.institution_id, e.program_id, e.grade_or_cohort);
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key);
  if (it == keys_.end() || *it != key) throw DataError("enrollment spell not in class index");
  return static_cast<ContainerId>(it - keys_.begin()) + 1;
}

LayerSlice build_classmate(const RegistryIndex& index, const ClassIndex& classes, int year) {
  LayerSlice s;
  s.layer = Layer::classmate;
  s.year = year;
  auto mask = population_mask(index.bundle(), year);
  std::map<ContainerId, std::vector<PersonId>> rooms;
  for (const auto& e : index.bundle().enrollment) {
    if (e.year != year || !in_sorted(mask, e.person_id)) continue;
    s.persons.push_back(e.person_id);
    rooms[classes.id_of(e)].push_back(e.person_id);
  }
  for (auto& [cid, members] : rooms) {
    sort_unique(members);
    for (PersonId p : members) s.memberships.emplace_back(p, NodeId::container(Layer::classmate, cid));
    add_clique(members, s.edges);
  }
  sort_unique(s.persons);
  sort_unique(s.memberships);
  sort_unique(s.edges);
  return s;
}

std::vector<LayerSlice> build_layers(const RegistryIndex& index, const std::vector<HouseholdAssignment>& households,
                                     LayerMask layers, const BuildOptions& options, std::size_t threads) {
  std::vector<FamilyTie> ties;
  if (has_layer(layers, Layer::family)) ties = family_ties(index);
  ClassIndex classes(index.bundle());
  std::vector<std::pair<std::size_t, Layer>> tasks;
  for (std::size_t y = 0; y < households.size(); ++y) {
    for (Layer l : kAllLayers) {
      if (has_layer(layers, l)) tasks.emplace_back(y, l);
    }
  }
  std::vector<LayerSlice> out(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t t) {
    const auto& hh = households[tasks[t].first];
    switch (tasks[t].second) {
      case Layer::family:
        out[t] = build_family(index, ties, hh.year);
        break;
      case Layer::household:
        out[t] = build_household(index, hh);
        break;
      case Layer::neighborhood:
        out[t] = build_neighborhood(index, hh, options.seed, options.neighborhood);
        break;
      case Layer::colleague:
        out[t] = build_colleague(index, hh.year, options.seed, options.colleague_cap);
        break;
      case Layer::classmate:
        out[t] = build_classmate(index, classes, hh.year);
        break;
    }
  });
  return out;
}

namespace {

std::filesystem::path slice_file(const std::filesystem::path& dir, std::string_view stem, Layer layer, int year) {
  return dir / (std::string(stem) + "_" + std::string(layer_name(layer)) + "_" + std::to_string(year) + ".csv");
}

std::filesystem::path year_file(const std::filesystem::path& dir, std::string_view stem, int year) {
  return dir / (std::string(stem) + "_" + std::to_string(year) + ".csv");
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  return out;
}

void write_ties(const std::vector<FamilyTie>& ties, const std::filesystem::path& file) {
  auto out = open_out(file);
  CsvWriter w(out);
  w.header({"src", "dst", "relation"});
  for (const auto& t : ties) w.field(t.src).field(t.dst).field(to_string(t.relation)).end_row();
}

}  // namespace

void write_slice(const LayerSlice& s, const std::filesystem::path& dir, const std::vector<FamilyTie>* relations) {
  {
    auto out = open_out(slice_file(dir, "nodes", s.layer, s.year));
    CsvWriter w(out);
    w.header({"person_id"});
    for (PersonId p : s.persons) w.field(p).end_row();
  }
  if (s.layer == Layer::family) {
    write_ties(s.ties, slice_file(dir, "edges", s.layer, s.year));
    if (relations) write_ties(*relations, year_file(dir, "relations_family", s.year));
    return;
  }
  {
    auto out = open_out(slice_file(dir, "edges", s.layer, s.year));
    CsvWriter w(out);
    w.header({"src", "dst"});
    for (const auto& [a, b] : s.edges) w.field(a).field(b).end_row();
  }
  {
    auto out = open_out(slice_file(dir, "membership", s.layer, s.year));
    CsvWriter w(out);
    w.header({"person_id", "container_id"});
    for (const auto& [p, c] : s.memberships) w.field(p).field(c.id()).end_row();
  }
  if (s.layer == Layer::neighborhood) {
    auto hh_out = open_out(year_file(dir, "household_address", s.year));
    auto link_out = open_out(year_file(dir, "addr_links", s.year));
    CsvWriter hh(hh_out);
    CsvWriter links(link_out);
    hh.header({"household_id", "address_id"});
    links.header({"src_address_id", "dst_address_id"});
    for (const auto& [a, b] : s.container_links) {
      if (a.tag() == NodeTag::household) {
        hh.field(a.id()).field(b.id()).end_row();
      } else {
        links.field(a.id()).field(b.id()).end_row();
      }
    }
    auto skip_out = open_out(year_file(dir, "skipped_households", s.year));
    CsvWriter skip(skip_out);
    skip.header({"household_id"});
    for (HouseholdId h : s.skipped) skip.field(h).end_row();
  }
}

LayerSlice read_slice(const std::filesystem::path& dir, Layer layer, int year) {
  LayerSlice s;
  s.layer = layer;
  s.year = year;
  {
    CsvReader r(slice_file(dir, "nodes", layer, year), {"person_id"});
    while (r.next()) s.persons.push_back(r.u64(0));
  }
  if (layer == Layer::family) {
    CsvReader r(slice_file(dir, "edges", layer, year), {"src", "dst", "relation"});
    while (r.next()) {
      FamilyTie t{r.u64(0), r.u64(1), FamilyRelation::child};
      try {
        t.relation = parse_family_relation(r.text(2));
      } catch (const DataError& e) {
        r.fail(2, e.what());
      }
      if (t.src == t.dst) r.fail(1, "self loop");
      s.ties.push_back(t);
      s.edges.push_back(ordered(t.src, t.dst));
    }
  } else {
    CsvReader r(slice_file(dir, "edges", layer, year), {"src", "dst"});
    while (r.next()) {
      PersonId a = r.u64(0);
      PersonId b = r.u64(1);
      if (a == b) r.fail(1, "self loop");
      s.edges.push_back(ordered(a, b));
    }
    CsvReader m(slice_file(dir, "membership", layer, year), {"person_id", "container_id"});
    const Layer owner = layer == Layer::neighborhood ? Layer::household : layer;
    while (m.next()) s.memberships.emplace_back(m.u64(0), NodeId::container(owner, m.u64(1)));
  }
  if (layer == Layer::neighborhood) {
    CsvReader hh(year_file(dir, "household_address", year), {"household_id", "address_id"});
    while (hh.next()) {
      s.container_links.emplace_back(NodeId::container(Layer::household, hh.u64(0)), NodeId::address(hh.u64(1)));
    }
    CsvReader links(year_file(dir, "addr_links", year), {"src_address_id", "dst_address_id"});
    while (links.next()) s.container_links.emplace_back(NodeId::address(links.u64(0)), NodeId::address(links.u64(1)));
    CsvReader skip(year_file(dir, "skipped_households", year), {"household_id"});
    while (skip.next()) s.skipped.push_back(skip.u64(0));
  }
  sort_unique(s.persons);
  std::sort(s.ties.begin(), s.ties.end());
  sort_unique(s.memberships);
  sort_unique(s.container_links);
  sort_unique(s.edges);
  return s;
}

}  // namespace focinet
