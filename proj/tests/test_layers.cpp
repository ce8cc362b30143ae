#include <doctest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "focinet/graph.hpp"
#include "focinet/household.hpp"
#include "focinet/layers.hpp"
#include "focinet/synth.hpp"

using namespace focinet;
using fixtures::BundleBuilder;

namespace {

const int kYear = 2020;

std::optional<FamilyRelation> relation(const std::vector<FamilyTie>& ties, PersonId src, PersonId dst) {
  for (const auto& t : ties) {
    if (t.src == src && t.dst == dst) return t.relation;
  }
  return std::nullopt;
}

std::size_t degree_in(const std::vector<PersonPair>& edges, PersonId p) {
  std::size_t d = 0;
  for (auto [a, b] : edges) d += (a == p || b == p) ? 1 : 0;
  return d;
}

/// Persons 1..n at address 1, all working at workplace 7.
RegistryBundle workplace_of(std::size_t n) {
  BundleBuilder bb;
  bb.address(1, 0, 0);
  for (PersonId p = 1; p <= n; ++p) bb.person(p, 1980).live(p, kYear, 1).work(p, kYear, 7);
  return bb.build();
}

/// One household per address; addresses at the given x positions on a line.
RegistryBundle line_of(const std::vector<double>& xs) {
  BundleBuilder bb;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto id = static_cast<PersonId>(i + 1);
    bb.address(id, xs[i], 0).person(id, 1980).live(id, kYear, id);
  }
  return bb.build();
}

std::set<PersonId> selected_by(const LayerSlice& s, AddressId from) {
  std::set<PersonId> out;
  for (auto [a, b] : s.container_links) {
    if (a == NodeId::address(from) && b.tag() == NodeTag::address) out.insert(static_cast<PersonId>(b.id()));
  }
  return out;
}

}  // namespace

TEST_CASE("family relations from parent links") {
  // 1,2 grandparents; 3 and 8 their children; 4 married in; 5,6 children of 3 and 4;
  // 10 child of 3 and 11; 12 child of 3 alone; 9 child of 8.
  auto b = BundleBuilder()
               .person(1, 1930).person(2, 1932, Sex::male).person(3, 1955).person(4, 1954, Sex::male)
               .person(5, 1980).person(6, 1982).person(8, 1958).person(9, 1985)
               .person(10, 1988).person(11, 1950, Sex::male).person(12, 1990)
               .parent(3, 1).parent(3, 2).parent(8, 1).parent(8, 2)
               .parent(5, 3).parent(5, 4).parent(6, 3).parent(6, 4)
               .parent(10, 3).parent(10, 11).parent(12, 3).parent(9, 8)
               .build();
  RegistryIndex index(b);
  auto ties = family_ties(index);
  CHECK(relation(ties, 5, 3) == FamilyRelation::parent);
  CHECK(relation(ties, 3, 5) == FamilyRelation::child);
  CHECK(relation(ties, 5, 6) == FamilyRelation::full_sibling);
  CHECK(relation(ties, 5, 10) == FamilyRelation::half_sibling);
  CHECK(relation(ties, 5, 12) == FamilyRelation::sibling_unknown);
  CHECK(relation(ties, 5, 1) == FamilyRelation::grandparent);
  CHECK(relation(ties, 1, 5) == FamilyRelation::grandchild);
  CHECK(relation(ties, 5, 8) == FamilyRelation::aunt_uncle);
  CHECK(relation(ties, 8, 5) == FamilyRelation::niece_nephew);
  CHECK(relation(ties, 5, 9) == FamilyRelation::cousin);
  CHECK(relation(ties, 9, 5) == FamilyRelation::cousin);
  CHECK(relation(ties, 3, 4) == FamilyRelation::co_parent);
  CHECK(relation(ties, 3, 11) == FamilyRelation::co_parent);
  CHECK_FALSE(relation(ties, 4, 11).has_value());
  CHECK_FALSE(relation(ties, 4, 8).has_value());

  // Every tie has a reverse tie.
  for (const auto& t : ties) CHECK(relation(ties, t.dst, t.src).has_value());
}

TEST_CASE("family edges need both persons present") {
  auto b = BundleBuilder()
               .person(1, 1940, Sex::female, 2015)
               .person(2, 1970)
               .person(3, 1995)
               .person(4, 2022)
               .parent(2, 1).parent(3, 2).parent(4, 3)
               .build();
  b.start_year = 2019;
  b.end_year = 2022;
  RegistryIndex index(b);
  auto all = family_ties(index);
  auto s = build_family(index, all, kYear);
  CHECK(s.edges == std::vector<PersonPair>{{2, 3}});
  // The deceased grandmother stays in the relations export.
  auto rel = family_ties_in_year(index, all, kYear);
  CHECK(relation(rel, 3, 1) == FamilyRelation::grandparent);
  CHECK_FALSE(relation(rel, 3, 4).has_value());
}

TEST_CASE("household of four") {
  BundleBuilder bb;
  bb.address(1, 0, 0).address(2, 1000, 0);
  bb.person(1, 1975, Sex::male).person(2, 1977).person(3, 2005).person(4, 2008).person(5, 1960);
  bb.parent(3, 1).parent(3, 2).parent(4, 1).parent(4, 2);
  bb.live(1, kYear, 1, MaritalStatus::married, 2).live(2, kYear, 1, MaritalStatus::married, 1);
  bb.live(3, kYear, 1).live(4, kYear, 1).live(5, kYear, 2);
  auto b = bb.build();
  RegistryIndex index(b);
  auto s = build_household(index, assign_households(index, kYear));
  std::size_t in_family = 0;
  for (auto [p, c] : s.memberships) in_family += p <= 4 ? 1 : 0;
  CHECK(in_family == 4);
  CHECK(s.memberships.size() == 5);
  CHECK(s.edges.size() == 6);
  CHECK(degree_in(s.edges, 5) == 0);
  CHECK(s.persons.size() == 5);
}

TEST_CASE("neighborhood selection") {
  SUBCASE("three households within ten metres select each other") {
    auto b = line_of({0, 4, 9});
    RegistryIndex index(b);
    auto s = build_neighborhood(index, assign_households(index, kYear), 1);
    CHECK(s.edges.size() == 3);
    CHECK(selected_by(s, 1) == std::set<PersonId>{2, 3});
    CHECK(selected_by(s, 3) == std::set<PersonId>{1, 2});
  }
  SUBCASE("nearest ten of twelve on a line") {
    std::vector<double> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(i);
    auto b = line_of(xs);
    RegistryIndex index(b);
    auto s = build_neighborhood(index, assign_households(index, kYear), 1);
    std::set<PersonId> want;
    for (PersonId p = 2; p <= 11; ++p) want.insert(p);
    CHECK(selected_by(s, 1) == want);
    // Selection is directed; edges are the undirected union.
    CHECK(selected_by(s, 12).count(1) == 0);
    CHECK(std::binary_search(s.edges.begin(), s.edges.end(), PersonPair{1, 11}));
    CHECK_FALSE(std::binary_search(s.edges.begin(), s.edges.end(), PersonPair{1, 12}));
  }
  SUBCASE("eleven equidistant candidates break ties by seed") {
    // Integer points at exactly 25 m from the origin.
    const std::vector<std::pair<double, double>> ring{{25, 0},  {0, 25},  {-25, 0}, {0, -25}, {7, 24},  {24, 7},
                                                      {-7, 24}, {-24, 7}, {7, -24}, {24, -7}, {15, 20}};
    BundleBuilder bb;
    bb.address(1, 0, 0).person(1, 1980).live(1, kYear, 1);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const auto p = static_cast<PersonId>(i + 2);
      bb.address(p, ring[i].first, ring[i].second).person(p, 1980).live(p, kYear, p);
    }
    auto b = bb.build();
    RegistryIndex index(b);
    auto hh = assign_households(index, kYear);
    auto s1 = build_neighborhood(index, hh, 5);
    CHECK(selected_by(s1, 1).size() == 10);
    CHECK(s1.edges == build_neighborhood(index, hh, 5).edges);
    std::set<std::set<PersonId>> picks;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) picks.insert(selected_by(build_neighborhood(index, hh, seed), 1));
    CHECK(picks.size() > 1);
  }
  SUBCASE("addresses without coordinates are skipped") {
    auto b = line_of({0, 5});
    b.addresses[1].x = std::numeric_limits<double>::quiet_NaN();
    RegistryIndex index(b);
    auto s = build_neighborhood(index, assign_households(index, kYear), 1);
    CHECK(s.skipped.size() == 1);
    CHECK(s.edges.empty());
  }
  SUBCASE("beyond the radius nothing is selected") {
    auto b = line_of({0, 51});
    RegistryIndex index(b);
    auto s = build_neighborhood(index, assign_households(index, kYear), 1);
    CHECK(s.edges.empty());
  }
}

TEST_CASE("colleague layer") {
  SUBCASE("fifty staff form a clique") {
    auto b = workplace_of(50);
    RegistryIndex index(b);
    auto s = build_colleague(index, kYear, 1);
    CHECK(s.memberships.size() == 50);
    CHECK(s.edges.size() == 1225);
  }
  SUBCASE("101 staff are still complete") {
    auto b = workplace_of(101);
    RegistryIndex index(b);
    auto s = build_colleague(index, kYear, 1);
    CHECK(s.edges.size() == 101 * 100 / 2);
  }
  SUBCASE("1000 staff are sampled to at least the cap") {
    auto b = workplace_of(1000);
    RegistryIndex index(b);
    auto s = build_colleague(index, kYear, 3);
    std::vector<std::size_t> deg(1001, 0);
    for (auto [a, c] : s.edges) {
      CHECK(a < c);
      ++deg[a];
      ++deg[c];
    }
    for (PersonId p = 1; p <= 1000; ++p) CHECK(deg[p] >= 100);
    CHECK(s.edges.size() < 1000 * 999 / 2);
    CHECK(s.edges == build_colleague(index, kYear, 3).edges);
    CHECK(build_colleague(index, kYear, 3, kNoColleagueCap).edges.size() == 1000 * 999 / 2);
  }
  SUBCASE("fictional workplaces give no colleagues") {
    BundleBuilder bb;
    bb.address(1, 0, 0);
    for (PersonId p = 1; p <= 5; ++p) bb.person(p, 1980).live(p, kYear, 1).work(p, kYear, 9, true);
    auto b = bb.build();
    RegistryIndex index(b);
    auto s = build_colleague(index, kYear, 1);
    CHECK(s.edges.empty());
    CHECK(s.persons.size() == 5);
  }
}

TEST_CASE("classmate layer") {
  BundleBuilder bb;
  bb.address(1, 0, 0);
  for (PersonId p = 1; p <= 20; ++p) bb.person(p, 2010).live(p, kYear, 1).enroll(p, kYear, 1, 1, 4);
  for (PersonId p = 21; p <= 25; ++p) bb.person(p, 2009).live(p, kYear, 1).enroll(p, kYear, 1, 1, 5);
  for (PersonId p = 101; p <= 200; ++p) bb.person(p, 2000).live(p, kYear, 1).enroll(p, kYear, 2, 3, 1);
  auto b = bb.build();
  RegistryIndex index(b);
  ClassIndex classes(b);
  auto s = build_classmate(index, classes, kYear);
  std::size_t grade4 = 0;
  std::size_t large = 0;
  std::size_t cross = 0;
  for (auto [x, y] : s.edges) {
    if (x <= 20 && y <= 20) ++grade4;
    if (x > 100 && y > 100) ++large;
    if (x <= 20 && y > 20 && y <= 25) ++cross;
  }
  CHECK(grade4 == 190);
  CHECK(large == 4950);
  CHECK(cross == 0);
  CHECK(s.memberships.size() == 125);
}

TEST_CASE("generated layers") {
  SynthConfig c;
  c.resize(1500);
  c.start_year = 2010;
  c.end_year = 2012;
  const auto b = generate(c);
  RegistryIndex index(b);
  auto hh = assign_household_years(index, 2010, 2012);
  BuildOptions options;
  options.seed = 4;
  auto slices = build_layers(index, hh, kAllLayersMask, options, 1);
  REQUIRE(slices.size() == 15);

  SUBCASE("endpoints are present persons") {
    for (const auto& s : slices) {
      auto mask = population_mask(b, s.year);
      for (auto [x, y] : s.edges) {
        CHECK(x < y);
        CHECK(std::binary_search(mask.begin(), mask.end(), x));
        CHECK(std::binary_search(mask.begin(), mask.end(), y));
      }
    }
  }
  SUBCASE("thread count does not change the slices") {
    auto again = build_layers(index, hh, kAllLayersMask, options, 3);
    for (std::size_t i = 0; i < slices.size(); ++i) {
      CHECK(again[i].edges == slices[i].edges);
      CHECK(again[i].memberships == slices[i].memberships);
    }
  }
  SUBCASE("projection of the bipartite view gives the unipartite edges") {
    for (const auto& s : slices) {
      if (s.layer == Layer::neighborhood || s.layer == Layer::colleague) continue;
      INFO(layer_name(s.layer) << " " << s.year);
      CHECK(person_pairs(project(bipartite_view(s))) == person_pairs(unipartite_view(s)));
    }
  }
  SUBCASE("uncapped colleagues project exactly") {
    auto s = build_colleague(index, 2011, 4, kNoColleagueCap);
    CHECK(person_pairs(project(bipartite_view(s))) == s.edges);
  }
  SUBCASE("slice files round trip") {
    auto dir = fixtures::scratch("layers_rt");
    for (const auto& s : slices) {
      if (s.year != 2011) continue;
      write_slice(s, dir);
      auto back = read_slice(dir, s.layer, s.year);
      CHECK(back.edges == s.edges);
      CHECK(back.memberships == s.memberships);
      CHECK(back.container_links == s.container_links);
    }
  }
}
