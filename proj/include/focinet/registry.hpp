#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "focinet/ids.hpp"

namespace focinet {

enum class Sex : std::uint8_t { female, male };
enum class ParentKind : std::uint8_t { biological, adoptive };
enum class MaritalStatus : std::uint8_t { never_married, married, registered_partnership, divorced, widowed };
enum class MigrationDirection : std::uint8_t { in, out };

struct Migration {
  int year = 0;
  MigrationDirection direction = MigrationDirection::in;
  auto operator<=>(const Migration&) const = default;
};

struct PersonRecord {
  PersonId person_id = 0;
  int birth_year = 0;
  Sex sex = Sex::female;
  std::optional<int> death_year;
  std::vector<Migration> migrations;  // ordered by year
  auto operator<=>(const PersonRecord&) const = default;
};

struct ParentLink {
  PersonId child_id = 0;
  PersonId parent_id = 0;
  ParentKind kind = ParentKind::biological;
  auto operator<=>(const ParentLink&) const = default;
};

/// Address on January 1 of `year`, plus the marital facts the household
/// engine reads.
struct ResidenceSpell {
  PersonId person_id = 0;
  int year = 0;
  AddressId address_id = 0;
  MaritalStatus marital_status = MaritalStatus::never_married;
  std::optional<PersonId> partner_id;
  auto operator<=>(const ResidenceSpell&) const = default;
};

/// Planar coordinates in meters.
struct AddressPoint {
  AddressId address_id = 0;
  double x = 0.0;
  double y = 0.0;
  auto operator<=>(const AddressPoint&) const = default;
};

struct EmploymentSpell {
  PersonId person_id = 0;
  int year = 0;
  WorkplaceId workplace_id = 0;
  bool fictional = false;  // remote/multi-site workplace: no colleagues
  auto operator<=>(const EmploymentSpell&) const = default;
};

struct EnrollmentSpell {
  PersonId person_id = 0;
  int year = 0;
  std::uint64_t institution_id = 0;
  std::uint64_t program_id = 0;
  std::int64_t grade_or_cohort = 0;
  auto operator<=>(const EnrollmentSpell&) const = default;
};

struct IncomeRecord {
  PersonId person_id = 0;
  int year = 0;
  double income = 0.0;
  auto operator<=>(const IncomeRecord&) const = default;
};

/// All registry tables. Tables are kept in canonical order (see canonicalize).
struct RegistryBundle {
  int start_year = 0;
  int end_year = -1;  // empty span when end < start
  std::vector<PersonRecord> persons;
  std::vector<ParentLink> parent_links;
  std::vector<ResidenceSpell> residences;
  std::vector<AddressPoint> addresses;
  std::vector<EmploymentSpell> employment;
  std::vector<EnrollmentSpell> enrollment;
  std::vector<IncomeRecord> income;

  bool operator==(const RegistryBundle&) const = default;
};

/// Sort every table into canonical order and recompute the year span from the
/// yearly tables.
void canonicalize(RegistryBundle& bundle);

/// Reads the seven tables from `directory`. Throws DataError on a missing file,
/// ParseError on a malformed row, DataError on a dangling id reference.
RegistryBundle load_registry(const std::filesystem::path& directory, bool lax = false);

/// Writes the bundle in canonical order. Byte-stable for equal bundles.
void write_registry(const RegistryBundle& bundle, const std::filesystem::path& directory);

/// True if the person is alive and resident for at least one day of `year`.
bool present_in_year(const PersonRecord& person, int year);

/// Sorted ids of persons present for at least one day of `year`.
/// Throws UsageError if year is outside the bundle span.
std::vector<PersonId> population_mask(const RegistryBundle& bundle, int year);

enum class Severity : std::uint8_t { warning, error };

struct Violation {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool empty() const { return violations.empty(); }
  std::size_t count(std::string_view code) const;
};

ValidationReport validate(const RegistryBundle& bundle);

std::string_view to_string(Sex sex);
std::string_view to_string(ParentKind kind);
std::string_view to_string(MaritalStatus status);

/// Lookup tables over a bundle. Holds references; the bundle must outlive it.
class RegistryIndex {
 public:
  explicit RegistryIndex(const RegistryBundle& bundle);

  const RegistryBundle& bundle() const { return *bundle_; }
  const PersonRecord* person(PersonId id) const;
  const AddressPoint* address(AddressId id) const;

  /// All parents (any kind), sorted and unique.
  std::span<const PersonId> parents(PersonId id) const;
  /// All children (any kind), sorted and unique.
  std::span<const PersonId> children(PersonId id) const;

  /// Residence rows of one year, sorted by person.
  std::span<const ResidenceSpell> residences(int year) const;
  const ResidenceSpell* residence(PersonId id, int year) const;

  /// True if any residence row up to `year` shows a status other than never_married.
  bool ever_married(PersonId id, int year) const;
  /// True if the person has a registered child born in or before `year`.
  bool has_child_by(PersonId id, int year) const;

  std::optional<double> income(PersonId id, int year) const;

 private:
  const RegistryBundle* bundle_;
  std::unordered_map<PersonId, std::size_t> person_pos_;
  std::unordered_map<AddressId, std::size_t> address_pos_;
  std::unordered_map<PersonId, std::vector<PersonId>> parents_;
  std::unordered_map<PersonId, std::vector<PersonId>> children_;
  std::unordered_map<PersonId, int> first_married_year_;
  std::unordered_map<int, std::pair<std::size_t, std::size_t>> residence_range_;
  std::unordered_map<int, std::pair<std::size_t, std::size_t>> income_range_;
};

}  // namespace focinet
