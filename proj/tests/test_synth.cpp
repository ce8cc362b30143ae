#include <doctest.h>

#include <map>

#include "fixtures.hpp"
#include "focinet/errors.hpp"
#include "focinet/synth.hpp"

using namespace focinet;

namespace {

SynthConfig base(std::size_t persons, int first, int last, std::uint64_t seed = 1) {
  SynthConfig c;
  c.resize(persons);
  c.start_year = first;
  c.end_year = last;
  c.seed = seed;
  return c;
}

SynthConfig frozen(SynthConfig c) {
  c.rates = SynthRates{0, 0, 0, 0, 0, 0};
  return c;
}

}  // namespace

TEST_CASE("zero churn keeps residences and employment fixed") {
  const auto b = generate(frozen(base(800, 2010, 2012)));
  std::map<int, std::vector<std::tuple<PersonId, AddressId, int, std::optional<PersonId>>>> res;
  for (const auto& r : b.residences) {
    res[r.year].emplace_back(r.person_id, r.address_id, static_cast<int>(r.marital_status), r.partner_id);
  }
  std::map<int, std::vector<std::tuple<PersonId, WorkplaceId, bool>>> emp;
  for (const auto& e : b.employment) emp[e.year].emplace_back(e.person_id, e.workplace_id, e.fictional);
  REQUIRE(res.size() == 3);
  CHECK(res[2010] == res[2011]);
  CHECK(res[2011] == res[2012]);
  CHECK(emp[2010] == emp[2011]);
  CHECK(emp[2011] == emp[2012]);
}

TEST_CASE("same seed gives identical bundles and files") {
  const auto c = base(700, 2010, 2013, 42);
  const auto a = generate(c);
  const auto b = generate(c);
  CHECK(a == b);
  auto da = fixtures::scratch("synth_det_a");
  auto db = fixtures::scratch("synth_det_b");
  write_registry(a, da);
  write_registry(b, db);
  for (const auto& entry : std::filesystem::directory_iterator(da)) {
    CHECK(fixtures::slurp(entry.path()) == fixtures::slurp(db / entry.path().filename()));
  }
  auto other = c;
  other.seed = 43;
  CHECK_FALSE(generate(other) == a);
}

TEST_CASE("deaths follow the binomial law") {
  auto c = frozen(base(10000, 2010, 2011, 11));
  c.rates.death = 0.01;
  SynthState s(c);
  const double n = static_cast<double>(s.people().size());
  s.evolve_year(2011);
  double deaths = 0;
  for (const auto& p : s.people()) deaths += p.alive ? 0 : 1;
  const double mean = n * 0.01;
  const double sd = std::sqrt(n * 0.01 * 0.99);
  CHECK(std::abs(deaths - mean) < 3 * sd);
}

TEST_CASE("yearly processes") {
  const auto b = generate(base(3000, 2010, 2014, 3));

  SUBCASE("grades advance by one within a program") {
    std::map<std::pair<PersonId, int>, const EnrollmentSpell*> by;
    for (const auto& e : b.enrollment) by[{e.person_id, e.year}] = &e;
    std::size_t checked = 0;
    for (const auto& [key, e] : by) {
      auto next = by.find({key.first, key.second + 1});
      if (next == by.end() || e->program_id >= 10) continue;
      const auto* n = next->second;
      if (n->institution_id != e->institution_id || n->program_id != e->program_id) continue;
      CHECK(n->grade_or_cohort == e->grade_or_cohort + 1);
      ++checked;
    }
    CHECK(checked > 100);
  }

  SUBCASE("newborns are present in their birth year") {
    std::size_t born = 0;
    for (int y = b.start_year + 1; y <= b.end_year; ++y) {
      auto mask = population_mask(b, y);
      for (const auto& p : b.persons) {
        if (p.birth_year != y) continue;
        ++born;
        CHECK(std::binary_search(mask.begin(), mask.end(), p.person_id));
      }
    }
    CHECK(born > 0);
  }

  SUBCASE("movers keep their id and change address") {
    std::map<std::pair<PersonId, int>, AddressId> at;
    for (const auto& r : b.residences) at[{r.person_id, r.year}] = r.address_id;
    std::size_t moves = 0;
    for (const auto& [key, a] : at) {
      auto next = at.find({key.first, key.second + 1});
      if (next != at.end() && next->second != a) ++moves;
    }
    CHECK(moves > 0);
  }

  SUBCASE("workplaces respect the size cap") {
    std::map<std::pair<int, WorkplaceId>, std::size_t> size;
    for (const auto& e : b.employment) ++size[{e.year, e.workplace_id}];
    SynthConfig c;
    for (const auto& [k, n] : size) CHECK(n <= c.workplace_max_size);
  }

  SUBCASE("at most two biological parents and no cycles") {
    CHECK(validate(b).empty());
  }

  SUBCASE("schooling starts the year a child turns six") {
    for (const auto& e : b.enrollment) {
      if (e.program_id != 1) continue;
      auto it = std::lower_bound(b.persons.begin(), b.persons.end(), e.person_id,
                                 [](const PersonRecord& p, PersonId id) { return p.person_id < id; });
      REQUIRE(it != b.persons.end());
      CHECK(e.year - it->birth_year >= 6);
    }
  }
}

TEST_CASE("infeasible configurations are rejected") {
  SynthConfig c;
  c.rates.death = 1.5;
  CHECK_THROWS_AS(c.check(), UsageError);
  SynthConfig d;
  d.n_addresses = 0;
  CHECK_THROWS_AS(d.check(), UsageError);
  SynthConfig e;
  e.start_year = 2020;
  e.end_year = 2019;
  CHECK_THROWS_AS(e.check(), UsageError);
}

TEST_CASE("configuration file") {
  auto dir = fixtures::scratch("synth_cfg");
  {
    std::ofstream out(dir / "cfg.ini");
    out << "[population]\nn_persons = 500\nstart_year = 2000\nend_year = 2003\n"
           "[rates]\ndeath = 0.02\n[income]\nbands = 18:11:0.5,40:12:0.4\n[rng]\nseed = 9\n";
  }
  auto c = load_synth_config(dir / "cfg.ini");
  CHECK(c.n_persons_initial == 500);
  CHECK(c.end_year == 2003);
  CHECK(c.rates.death == doctest::Approx(0.02));
  CHECK(c.income_bands.size() == 2);
  CHECK(c.seed == 9);
  {
    std::ofstream out(dir / "bad.ini");
    out << "[population]\nn_personz = 500\n";
  }
  CHECK_THROWS_AS(load_synth_config(dir / "bad.ini"), UsageError);
}
