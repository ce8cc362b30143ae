#include "focinet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "focinet/errors.hpp"

namespace focinet {

namespace {

constexpr std::uint64_t kSecondaryBase = 1000;
constexpr std::uint64_t kTertiaryBase = 2000;
constexpr std::uint64_t kPrimaryProgram = 1;
constexpr std::uint64_t kSecondaryProgram = 2;
constexpr std::uint64_t kTertiaryProgramBase = 10;

void require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw UsageError(std::string(name) + " must lie in [0, 1]");
}

Sex opposite(Sex s) { return s == Sex::female ? Sex::male : Sex::female; }

}  // namespace

void SynthConfig::resize(std::size_t persons) {
  if (persons == 0 || n_persons_initial == 0) throw UsageError("population must be positive");
  const double ratio = static_cast<double>(persons) / static_cast<double>(n_persons_initial);
  n_addresses = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(static_cast<double>(n_addresses) * ratio)));
  extent_m *= std::sqrt(ratio);
  n_persons_initial = persons;
}

void SynthConfig::check() const {
  require_unit(rates.birth, "rates.birth");
  require_unit(rates.death, "rates.death");
  require_unit(rates.move, "rates.move");
  require_unit(rates.job_change, "rates.job_change");
  require_unit(rates.emigration, "rates.emigration");
  require_unit(rates.immigration, "rates.immigration");
  require_unit(employment_rate, "workplaces.employment_rate");
  require_unit(fictional_share, "workplaces.fictional_share");
  require_unit(secondary_share, "schools.secondary_share");
  require_unit(tertiary_share, "schools.tertiary_share");
  if (start_year > end_year) throw UsageError("population.start_year must not exceed end_year");
  if (n_persons_initial > 0 && n_addresses == 0) throw UsageError("infeasible config: persons but no addresses");
  if (!(extent_m > 0.0)) throw UsageError("space.extent_m must be positive");
  if (workplace_max_size == 0) throw UsageError("workplaces.max_size must be positive");
  if (!(workplace_size_sigma >= 0.0)) throw UsageError("workplaces.size_sigma must be non-negative");
  if (primary_grades < 1 || secondary_grades < 1 || tertiary_years < 1) {
    throw UsageError("school program lengths must be positive");
  }
  if (n_tertiary_institutions == 0 || n_tertiary_programs == 0) throw UsageError("tertiary counts must be positive");
  if (income_bands.empty()) throw UsageError("income.bands must not be empty");
  for (std::size_t i = 1; i < income_bands.size(); ++i) {
    if (income_bands[i].min_age <= income_bands[i - 1].min_age) throw UsageError("income bands must be ordered by age");
  }
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError("cannot read config: " + std::string(e.what()));
  }
  SynthConfig c;
  std::set<std::string> used;
  auto get = [&]<typename T>(const char* key, T& target) {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'))) {
      used.insert(key);
      try {
        target = tree.get<T>(pt::ptree::path_type(key, '.'));
      } catch (const pt::ptree_bad_data&) {
        throw UsageError(std::string("bad value for ") + key + ": '" + *v + "'");
      }
    }
  };
  get("population.n_persons", c.n_persons_initial);
  get("population.start_year", c.start_year);
  get("population.end_year", c.end_year);
  get("rates.birth", c.rates.birth);
  get("rates.death", c.rates.death);
  get("rates.move", c.rates.move);
  get("rates.job_change", c.rates.job_change);
  get("rates.emigration", c.rates.emigration);
  get("rates.immigration", c.rates.immigration);
  get("space.n_addresses", c.n_addresses);
  get("space.extent_m", c.extent_m);
  get("workplaces.size_mu", c.workplace_size_mu);
  get("workplaces.size_sigma", c.workplace_size_sigma);
  get("workplaces.max_size", c.workplace_max_size);
  get("workplaces.employment_rate", c.employment_rate);
  get("workplaces.fictional_share", c.fictional_share);
  get("workplaces.retirement_age", c.retirement_age);
  get("schools.entry_age", c.school_entry_age);
  get("schools.primary_grades", c.primary_grades);
  get("schools.secondary_grades", c.secondary_grades);
  get("schools.tertiary_years", c.tertiary_years);
  get("schools.n_primary", c.n_primary_schools);
  get("schools.n_secondary", c.n_secondary_schools);
  get("schools.n_tertiary", c.n_tertiary_institutions);
  get("schools.tertiary_programs", c.n_tertiary_programs);
  get("schools.secondary_share", c.secondary_share);
  get("schools.tertiary_share", c.tertiary_share);
  get("rng.seed", c.seed);
  if (auto bands = tree.get_optional<std::string>("income.bands")) {
    used.insert("income.bands");
    // min_age:mu:sigma, comma separated
    c.income_bands.clear();
    std::string_view s = *bands;
    while (!s.empty()) {
      auto comma = s.find(',');
      std::string item(s.substr(0, comma));
      IncomeBand band;
      if (std::sscanf(item.c_str(), "%d:%lf:%lf", &band.min_age, &band.mu, &band.sigma) != 3) {
        throw UsageError("bad income band '" + item + "'");
      }
      c.income_bands.push_back(band);
      if (comma == std::string_view::npos) break;
      s.remove_prefix(comma + 1);
    }
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw UsageError("config key outside a section: " + section);
    for (const auto& [key, _] : body) {
      if (!used.contains(section + "." + key)) throw UsageError("unknown config key " + section + "." + key);
    }
  }
  c.check();
  return c;
}

SynthState::SynthState(const SynthConfig& config) : config_(config), year_(config.start_year) {
  config_.check();
  initialize();
}

SynthState::Person& SynthState::add_person(int birth_year, Sex sex) {
  Person p;
  p.id = people_.size() + 1;
  p.birth_year = birth_year;
  p.sex = sex;
  people_.push_back(std::move(p));
  return people_.back();
}

AddressId SynthState::random_address(CounterRng& rng, AddressId avoid) {
  if (addresses_.size() == 1) return addresses_.front().address_id;
  while (true) {
    AddressId a = addresses_[rng.below(addresses_.size())].address_id;
    if (a != avoid) return a;
  }
}

void SynthState::assign_workplace(Person& p, CounterRng& rng) {
  std::size_t occupied = 0;
  std::size_t capacity = 0;
  for (const auto& w : workplaces_) {
    occupied += w.occupied;
    capacity += w.capacity;
  }
  // Keep at least 10% free capacity so switching has somewhere to go.
  while (open_workplaces_.empty() || capacity < occupied + 1 + occupied / 10) {
    double draw = rng.lognormal(config_.workplace_size_mu, config_.workplace_size_sigma);
    auto size = static_cast<std::size_t>(std::llround(draw));
    size = std::clamp<std::size_t>(size, 1, config_.workplace_max_size);
    workplaces_.push_back({size, 0});
    open_workplaces_.push_back(workplaces_.size());
    capacity += size;
  }
  std::size_t slot = rng.below(open_workplaces_.size());
  WorkplaceId wid = open_workplaces_[slot];
  if (wid == p.workplace && open_workplaces_.size() > 1) {
    slot = (slot + 1) % open_workplaces_.size();
    wid = open_workplaces_[slot];
  }
  release_workplace(p);
  auto& w = workplaces_[wid - 1];
  ++w.occupied;
  if (w.occupied == w.capacity) {
    auto it = std::find(open_workplaces_.begin(), open_workplaces_.end(), wid);
    open_workplaces_.erase(it);
  }
  p.workplace = wid;
  p.fictional = rng.bernoulli(config_.fictional_share);
}

void SynthState::release_workplace(Person& p) {
  if (p.workplace == 0) return;
  auto& w = workplaces_[p.workplace - 1];
  if (w.occupied == w.capacity) open_workplaces_.push_back(p.workplace);
  --w.occupied;
  p.workplace = 0;
  p.fictional = false;
}

void SynthState::leave(Person& p) {
  release_workplace(p);
  p.program = Program::none;
  p.income.reset();
  if (p.partner != 0) {
    auto& partner = people_[p.partner - 1];
    partner.partner = 0;
    p.partner = 0;
  }
}

bool SynthState::close_family(const Person& a, const Person& b) const {
  auto has = [](const std::vector<PersonId>& v, PersonId x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  if (has(a.parents, b.id) || has(b.parents, a.id)) return true;
  for (PersonId pa : a.parents) {
    if (has(b.parents, pa)) return true;
  }
  return false;
}

void SynthState::move_group(Person& head, AddressId address) {
  AddressId old = head.address;
  std::vector<std::size_t> group{head.id - 1};
  if (head.partner != 0 && people_[head.partner - 1].address == old) group.push_back(head.partner - 1);
  std::size_t adults = group.size();
  for (std::size_t g = 0; g < adults; ++g) {
    for (PersonId cid : people_[group[g]].children) {
      const auto& c = people_[cid - 1];
      if (c.alive && c.resident && c.address == old && c.partner == 0 && age(c) < 25 &&
          std::find(group.begin(), group.end(), cid - 1) == group.end()) {
        group.push_back(cid - 1);
      }
    }
  }
  for (std::size_t i : group) people_[i].address = address;
}

void SynthState::initialize() {
  CounterRng rng(config_.seed, "synth.init", static_cast<std::uint64_t>(config_.start_year));
  addresses_.reserve(config_.n_addresses);
  for (std::size_t i = 0; i < config_.n_addresses; ++i) {
    double x = rng.uniform() * config_.extent_m;
    double y = rng.uniform() * config_.extent_m;
    addresses_.push_back({i + 1, x, y});
  }
  n_primary_ = config_.n_primary_schools ? config_.n_primary_schools
                                         : std::max<std::size_t>(1, config_.n_persons_initial / 1500);
  n_secondary_ = config_.n_secondary_schools ? config_.n_secondary_schools
                                             : std::max<std::size_t>(1, config_.n_persons_initial / 5000);
  const int y0 = config_.start_year;
  auto random_sex = [&] { return rng.bernoulli(0.5) ? Sex::female : Sex::male; };
  auto couple = [&](Person& a, Person& b, double p_married) {
    a.partner = b.id;
    b.partner = a.id;
    if (rng.bernoulli(p_married)) {
      a.marital = MaritalStatus::married;
      b.marital = MaritalStatus::married;
    }
  };
  auto link = [&](std::size_t child, std::size_t parent) {
    people_[child].parents.push_back(people_[parent].id);
    people_[parent].children.push_back(people_[child].id);
  };

  while (people_.size() < config_.n_persons_initial) {
    if (rng.bernoulli(0.15)) {
      int a = 18 + static_cast<int>(rng.below(73));
      auto& p = add_person(y0 - a, random_sex());
      p.address = random_address(rng, 0);
      if (a > 60 && rng.bernoulli(0.5)) p.marital = MaritalStatus::widowed;
      continue;
    }
    // Three-generation clan: founders, their children, grandchildren.
    AddressId home = random_address(rng, 0);
    int g_age = 55 + static_cast<int>(rng.below(31));
    std::size_t g1 = add_person(y0 - g_age, random_sex()).id - 1;
    people_[g1].address = home;
    std::optional<std::size_t> g2;
    int youngest_founder = g_age;
    if (rng.bernoulli(0.85)) {
      int age2 = std::max(50, g_age + static_cast<int>(rng.below(11)) - 5);
      g2 = add_person(y0 - age2, opposite(people_[g1].sex)).id - 1;
      people_[*g2].address = home;
      couple(people_[g1], people_[*g2], 0.7);
      youngest_founder = std::min(youngest_founder, age2);
    } else {
      people_[g1].marital = rng.bernoulli(0.6) ? MaritalStatus::widowed : MaritalStatus::divorced;
    }
    int n_kids = 1 + static_cast<int>(rng.below(3));
    for (int k = 0; k < n_kids; ++k) {
      int k_age = std::max(0, youngest_founder - 22 - static_cast<int>(rng.below(12)));
      std::size_t kid = add_person(y0 - k_age, random_sex()).id - 1;
      link(kid, g1);
      if (g2) link(kid, *g2);
      if (k_age < 18 || (k_age < 25 && rng.bernoulli(0.6))) {
        people_[kid].address = home;
        continue;
      }
      AddressId own = random_address(rng, home);
      people_[kid].address = own;
      if (k_age >= 20 && rng.bernoulli(0.7)) {
        int p_age = std::max(18, k_age + static_cast<int>(rng.below(13)) - 6);
        std::size_t partner = add_person(y0 - p_age, opposite(people_[kid].sex)).id - 1;
        people_[partner].address = own;
        couple(people_[kid], people_[partner], 0.5);
        int max_child_age = std::min(k_age, p_age) - 20;
        if (max_child_age >= 0) {
          int n_grand = static_cast<int>(rng.below(4));
          for (int g = 0; g < n_grand; ++g) {
            int gc_age = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_child_age) + 1));
            std::size_t gc = add_person(y0 - gc_age, random_sex()).id - 1;
            people_[gc].address = own;
            link(gc, kid);
            link(gc, partner);
          }
        }
      } else if (k_age >= 20 && rng.bernoulli(0.2)) {
        int gc_age = static_cast<int>(rng.below(static_cast<std::uint64_t>(std::min(k_age - 20, 17)) + 1));
        std::size_t gc = add_person(y0 - gc_age, random_sex()).id - 1;
        people_[gc].address = own;
        link(gc, kid);
      }
    }
  }

  const int entry = config_.school_entry_age;
  const int secondary_start = entry + config_.primary_grades;
  const int tertiary_start = secondary_start + config_.secondary_grades;
  for (auto& p : people_) {
    int a = age(p);
    if (a >= entry && a < secondary_start) {
      p.program = Program::primary;
      p.program_id = kPrimaryProgram;
      p.institution = 1 + rng.below(n_primary_);
      p.grade = a - entry + 1;
    } else if (a >= secondary_start && a < tertiary_start && rng.bernoulli(config_.secondary_share)) {
      p.program = Program::secondary;
      p.program_id = kSecondaryProgram;
      p.institution = kSecondaryBase + 1 + rng.below(n_secondary_);
      p.grade = a - secondary_start + 1;
    } else if (a >= tertiary_start && a < tertiary_start + config_.tertiary_years &&
               rng.bernoulli(config_.tertiary_share)) {
      p.program = Program::tertiary;
      p.program_id = kTertiaryProgramBase + rng.below(config_.n_tertiary_programs);
      p.institution = kTertiaryBase + 1 + rng.below(config_.n_tertiary_institutions);
      p.years_in_program = a - tertiary_start + 1;
      p.grade = y0 - p.years_in_program + 1;
    }
  }
  for (auto& p : people_) {
    int a = age(p);
    if (a >= 18 && a < config_.retirement_age && p.program == Program::none &&
        rng.bernoulli(config_.employment_rate)) {
      assign_workplace(p, rng);
    }
  }
  income();
}

void SynthState::deaths() {
  CounterRng rng(config_.seed, "synth.death", static_cast<std::uint64_t>(year_));
  for (auto& p : people_) {
    if (!p.alive || !p.resident) continue;
    if (!rng.bernoulli(config_.rates.death)) continue;
    p.alive = false;
    p.death_year = year_;
    if (p.partner != 0) {
      auto& partner = people_[p.partner - 1];
      if (partner.marital == MaritalStatus::married || partner.marital == MaritalStatus::registered_partnership) {
        partner.marital = MaritalStatus::widowed;
      }
    }
    leave(p);
  }
}

void SynthState::births() {
  CounterRng rng(config_.seed, "synth.birth", static_cast<std::uint64_t>(year_));
  const std::size_t n = people_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mother = people_[i];
    if (!mother.alive || !mother.resident || mother.sex != Sex::female || mother.partner == 0) continue;
    int a = age(mother);
    if (a < 18 || a > 45) continue;
    const auto& father = people_[mother.partner - 1];
    if (!father.alive || !father.resident || father.address != mother.address) continue;
    if (!rng.bernoulli(config_.rates.birth)) continue;
    Sex sex = rng.bernoulli(0.5) ? Sex::female : Sex::male;
    auto& child = add_person(year_, sex);
    auto& m = people_[i];
    auto& f = people_[m.partner - 1];
    child.address = m.address;
    child.parents = {m.id, f.id};
    m.children.push_back(child.id);
    f.children.push_back(child.id);
  }
}

void SynthState::moves() {
  CounterRng rng(config_.seed, "synth.move", static_cast<std::uint64_t>(year_));
  const double rate = config_.rates.move;
  auto lives_with_parent = [&](const Person& p) {
    for (PersonId pid : p.parents) {
      const auto& parent = people_[pid - 1];
      if (parent.alive && parent.resident && parent.address == p.address) return true;
    }
    return false;
  };
  auto active = [](const Person& p) { return p.alive && p.resident; };

  // Household relocation, decided by the lower-id partner.
  for (auto& p : people_) {
    if (!active(p) || age(p) < 18 || lives_with_parent(p)) continue;
    if (p.partner != 0) {
      const auto& q = people_[p.partner - 1];
      if (q.address == p.address && q.id < p.id) continue;
    }
    if (rng.bernoulli(rate)) move_group(p, random_address(rng, p.address));
  }
  // Young adults leaving home.
  for (auto& p : people_) {
    if (!active(p) || p.partner != 0) continue;
    int a = age(p);
    if (a < 18 || a > 29 || !lives_with_parent(p)) continue;
    if (rng.bernoulli(rate)) p.address = random_address(rng, p.address);
  }
  // Pairing of singles.
  std::vector<std::size_t> singles;
  for (std::size_t i = 0; i < people_.size(); ++i) {
    const auto& p = people_[i];
    if (active(p) && p.partner == 0 && age(p) >= 20 && age(p) <= 50) singles.push_back(i);
  }
  for (std::size_t i : singles) {
    auto& p = people_[i];
    if (p.partner != 0 || !rng.bernoulli(rate * 0.3)) continue;
    for (int attempt = 0; attempt < 20; ++attempt) {
      auto& q = people_[singles[rng.below(singles.size())]];
      if (q.partner != 0 || q.sex == p.sex || std::abs(age(q) - age(p)) > 10 || close_family(p, q)) continue;
      p.partner = q.id;
      q.partner = p.id;
      if (rng.bernoulli(0.3)) {
        p.marital = MaritalStatus::married;
        q.marital = MaritalStatus::married;
      }
      AddressId home = random_address(rng, p.address);
      AddressId q_old = q.address;
      q.partner = 0;  // move q's dependants without dragging p along
      move_group(q, home);
      q.partner = p.id;
      (void)q_old;
      p.partner = 0;
      move_group(p, home);
      p.partner = q.id;
      break;
    }
  }
  // Separations: one partner moves out.
  for (auto& p : people_) {
    if (!active(p) || p.partner == 0 || p.partner < p.id) continue;
    auto& q = people_[p.partner - 1];
    if (q.address != p.address || !rng.bernoulli(rate * 0.15)) continue;
    if (p.marital == MaritalStatus::married || p.marital == MaritalStatus::registered_partnership) {
      p.marital = MaritalStatus::divorced;
      q.marital = MaritalStatus::divorced;
    }
    Person& leaver = p.sex == Sex::male ? p : q;
    p.partner = 0;
    q.partner = 0;
    leaver.address = random_address(rng, leaver.address);
  }
}

void SynthState::jobs() {
  CounterRng rng(config_.seed, "synth.job", static_cast<std::uint64_t>(year_));
  for (auto& p : people_) {
    if (!p.alive || !p.resident) continue;
    if (!rng.bernoulli(config_.rates.job_change)) continue;
    int a = age(p);
    if (p.workplace != 0) {
      if (a >= config_.retirement_age) {
        release_workplace(p);
      } else {
        assign_workplace(p, rng);
      }
    } else if (a >= 18 && a < config_.retirement_age && p.program == Program::none) {
      assign_workplace(p, rng);
    }
  }
}

void SynthState::school() {
  CounterRng rng(config_.seed, "synth.school", static_cast<std::uint64_t>(year_));
  for (auto& p : people_) {
    if (!p.alive || !p.resident) continue;
    switch (p.program) {
      case Program::primary:
        if (++p.grade > config_.primary_grades) {
          p.program = Program::none;
          if (rng.bernoulli(config_.secondary_share)) {
            p.program = Program::secondary;
            p.program_id = kSecondaryProgram;
            p.institution = kSecondaryBase + 1 + rng.below(n_secondary_);
            p.grade = 1;
          }
        }
        break;
      case Program::secondary:
        if (++p.grade > config_.secondary_grades) {
          p.program = Program::none;
          if (rng.bernoulli(config_.tertiary_share)) {
            p.program = Program::tertiary;
            p.program_id = kTertiaryProgramBase + rng.below(config_.n_tertiary_programs);
            p.institution = kTertiaryBase + 1 + rng.below(config_.n_tertiary_institutions);
            p.grade = year_;
            p.years_in_program = 1;
          }
        }
        break;
      case Program::tertiary:
        if (++p.years_in_program > config_.tertiary_years) p.program = Program::none;
        break;
      case Program::none:
        if (age(p) == config_.school_entry_age) {
          p.program = Program::primary;
          p.program_id = kPrimaryProgram;
          p.institution = 1 + rng.below(n_primary_);
          p.grade = 1;
        }
        break;
    }
  }
}

void SynthState::migration() {
  CounterRng rng(config_.seed, "synth.migration", static_cast<std::uint64_t>(year_));
  std::size_t residents = 0;
  const std::size_t n = people_.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto& p = people_[i];
    if (!p.alive || !p.resident) continue;
    ++residents;
    if (rng.bernoulli(config_.rates.emigration)) {
      p.resident = false;
      p.migrations.push_back({year_, MigrationDirection::out});
      leave(p);
    }
  }
  std::size_t arrivals = 0;
  for (std::size_t i = 0; i < residents; ++i) arrivals += rng.bernoulli(config_.rates.immigration) ? 1 : 0;
  for (std::size_t i = 0; i < arrivals; ++i) {
    int a = 18 + static_cast<int>(rng.below(28));
    Sex sex = rng.bernoulli(0.5) ? Sex::female : Sex::male;
    auto& p = add_person(year_ - a, sex);
    p.migrations.push_back({year_, MigrationDirection::in});
    p.address = random_address(rng, 0);
  }
}

void SynthState::income() {
  CounterRng rng(config_.seed, "synth.income", static_cast<std::uint64_t>(year_));
  for (auto& p : people_) {
    if (!p.alive || !p.resident || age(p) < 18) {
      p.income.reset();
      continue;
    }
    const IncomeBand* band = &config_.income_bands.front();
    for (const auto& b : config_.income_bands) {
      if (b.min_age <= age(p)) band = &b;
    }
    p.income = std::round(rng.lognormal(band->mu, band->sigma));
  }
}

void SynthState::evolve_year(int year) {
  year_ = year;
  deaths();
  births();
  moves();
  jobs();
  school();
  migration();
  income();
}

std::size_t SynthState::resident_count() const {
  return static_cast<std::size_t>(
      std::count_if(people_.begin(), people_.end(), [](const Person& p) { return p.alive && p.resident; }));
}

void SynthState::record_year(int year, RegistryBundle& b) const {
  for (const auto& p : people_) {
    if (!p.alive || !p.resident) continue;
    ResidenceSpell r{p.id, year, p.address, p.marital, std::nullopt};
    bool formal = p.marital == MaritalStatus::married || p.marital == MaritalStatus::registered_partnership;
    if (formal && p.partner != 0) r.partner_id = p.partner;
    b.residences.push_back(r);
    if (p.workplace != 0) b.employment.push_back({p.id, year, p.workplace, p.fictional});
    if (p.program != Program::none) b.enrollment.push_back({p.id, year, p.institution, p.program_id, p.grade});
    if (p.income) b.income.push_back({p.id, year, *p.income});
  }
}

void SynthState::record_people(RegistryBundle& b) const {
  b.persons.clear();
  b.parent_links.clear();
  for (const auto& p : people_) {
    b.persons.push_back({p.id, p.birth_year, p.sex, p.death_year, p.migrations});
    for (PersonId parent : p.parents) b.parent_links.push_back({p.id, parent, ParentKind::biological});
  }
  b.addresses = addresses_;
}

RegistryBundle generate(const SynthConfig& config) {
  SynthState state(config);
  RegistryBundle bundle;
  state.record_year(config.start_year, bundle);
  for (int y = config.start_year + 1; y <= config.end_year; ++y) {
    state.evolve_year(y);
    state.record_year(y, bundle);
  }
  state.record_people(bundle);
  canonicalize(bundle);
  return bundle;
}

}  // namespace focinet
