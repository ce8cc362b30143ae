#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "focinet/registry.hpp"
#include "focinet/rng.hpp"

namespace focinet {

struct SynthRates {
  double birth = 0.06;        // per co-resident couple with a woman aged 18..45
  double death = 0.008;       // per person
  double move = 0.08;         // per household head; also drives leaving home, pairing, splits
  double job_change = 0.10;   // per person: hire, switch or retire
  double emigration = 0.004;  // per person
  double immigration = 0.005; // arrivals per resident
};

struct IncomeBand {
  int min_age = 18;
  double mu = 12.0;  // log-income mean
  double sigma = 0.5;
};

struct SynthConfig {
  std::size_t n_persons_initial = 10000;
  int start_year = 2008;
  int end_year = 2021;
  SynthRates rates;

  std::size_t n_addresses = 4500;
  double extent_m = 3000.0;  // addresses are uniform on [0, extent]^2

  double workplace_size_mu = 2.0;
  double workplace_size_sigma = 1.2;
  std::size_t workplace_max_size = 1000;
  double employment_rate = 0.8;   // initial share of working-age non-students employed
  double fictional_share = 0.02;  // share of jobs at fictional workplaces
  int retirement_age = 67;

  int school_entry_age = 6;
  int primary_grades = 10;
  int secondary_grades = 3;
  int tertiary_years = 3;
  std::size_t n_primary_schools = 0;  // 0 = one per 1500 initial persons
  std::size_t n_secondary_schools = 0;  // 0 = one per 5000 initial persons
  std::size_t n_tertiary_institutions = 2;
  std::size_t n_tertiary_programs = 5;
  double secondary_share = 0.7;
  double tertiary_share = 0.4;

  std::vector<IncomeBand> income_bands{{18, 11.6, 0.6}, {30, 12.4, 0.5}, {45, 12.6, 0.5}, {60, 12.3, 0.5},
                                       {67, 11.9, 0.4}};

  std::uint64_t seed = 1;

  /// Throws UsageError on an infeasible configuration.
  void check() const;

  /// Sets the initial population and scales the address count and extent so
  /// density stays as configured.
  void resize(std::size_t persons);
};

/// Reads an INI-style configuration; unspecified keys keep their defaults.
/// Sections: [population] [rates] [space] [workplaces] [schools] [income] [rng].
SynthConfig load_synth_config(const std::filesystem::path& path);

/// Mutable simulation state between yearly snapshots.
class SynthState {
 public:
  explicit SynthState(const SynthConfig& config);

  /// Applies one year of events in fixed order: deaths, births, moves, jobs,
  /// school, migration, income. Each subsystem has its own RNG stream keyed by year.
  void evolve_year(int year);

  /// Appends the January 1 snapshot rows (residences, employment, enrollment,
  /// income) for `year` to the bundle.
  void record_year(int year, RegistryBundle& bundle) const;

  /// Person and parent tables as of now.
  void record_people(RegistryBundle& bundle) const;

  std::size_t resident_count() const;
  int current_year() const { return year_; }

  enum class Program : std::uint8_t { none, primary, secondary, tertiary };

  struct Person {
    PersonId id = 0;
    int birth_year = 0;
    Sex sex = Sex::female;
    bool alive = true;
    bool resident = true;
    std::optional<int> death_year;
    std::vector<Migration> migrations;
    std::vector<PersonId> parents;
    std::vector<PersonId> children;
    AddressId address = 0;
    MaritalStatus marital = MaritalStatus::never_married;
    PersonId partner = 0;  // 0 = none; married or cohabiting
    WorkplaceId workplace = 0;
    bool fictional = false;
    Program program = Program::none;
    std::uint64_t institution = 0;
    std::uint64_t program_id = 0;
    std::int64_t grade = 0;  // grade, or start cohort for tertiary
    int years_in_program = 0;
    std::optional<double> income;
  };

  struct Workplace {
    std::size_t capacity = 0;
    std::size_t occupied = 0;
  };

  const std::vector<Person>& people() const { return people_; }
  const std::vector<Workplace>& workplaces() const { return workplaces_; }

 private:
  void initialize();
  Person& add_person(int birth_year, Sex sex);
  void assign_workplace(Person& p, CounterRng& rng);
  void release_workplace(Person& p);
  void leave(Person& p);
  void move_group(Person& head, AddressId address);
  AddressId random_address(CounterRng& rng, AddressId avoid);
  bool close_family(const Person& a, const Person& b) const;
  int age(const Person& p) const { return year_ - p.birth_year; }

  void deaths();
  void births();
  void moves();
  void jobs();
  void school();
  void migration();
  void income();

  SynthConfig config_;
  int year_;
  std::vector<Person> people_;  // index = id - 1
  std::vector<AddressPoint> addresses_;
  std::vector<Workplace> workplaces_;  // index = id - 1
  std::vector<WorkplaceId> open_workplaces_;
  std::size_t n_primary_ = 1;
  std::size_t n_secondary_ = 1;
};

/// Full deterministic run from start_year to end_year.
RegistryBundle generate(const SynthConfig& config);

}  // namespace focinet
