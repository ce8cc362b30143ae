#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "focinet/registry.hpp"

namespace focinet {

/// Ordered by precedence.
enum class CoupleType : std::uint8_t { married, registered_partnership, common_child, cohabiting };

std::string_view to_string(CoupleType type);

struct Household {
  HouseholdId id = 0;
  AddressId address = 0;
  std::vector<PersonId> members;   // sorted
  std::vector<PersonId> heads;     // one person or a couple, sorted
  std::optional<CoupleType> couple;
  std::vector<PersonId> children;  // sorted
};

struct HouseholdAssignment {
  int year = 0;
  std::vector<Household> households;  // sorted by id
  HouseholdId next_id = 1;            // ids below this have been used at some point
  /// Persons who qualified as an attachable child and as half of a couple;
  /// couple formation wins.
  std::vector<PersonId> couple_over_child;

  /// Household of a person, or nullptr when not resident.
  const Household* household_of(PersonId id) const;
  /// (person, household) sorted by person.
  const std::vector<std::pair<PersonId, HouseholdId>>& membership() const { return membership_; }
  const Household* find(HouseholdId id) const;

  void rebuild_index();

 private:
  std::vector<std::pair<PersonId, HouseholdId>> membership_;
};

/// Couple type of two co-resident persons in `year`, or nullopt.
std::optional<CoupleType> classify_couple(const RegistryIndex& index, PersonId a, PersonId b, int year);

/// True if `child` joins a co-resident parent's household in `year`.
/// `in_couple` marks a person already paired as half of a couple.
bool child_attaches(const RegistryIndex& index, PersonId child, int year, bool in_couple = false);

HouseholdAssignment assign_households(const RegistryIndex& index, int year,
                                      const HouseholdAssignment* previous = nullptr);

/// Sequential assignment for every year of the bundle span in [first, last].
std::vector<HouseholdAssignment> assign_household_years(const RegistryIndex& index, int first, int last);

/// Columns: year, person_id, household_id, address_id.
void write_households(const std::vector<HouseholdAssignment>& years, const std::filesystem::path& file);
/// Inverse of write_households. Only ids, addresses and members are restored.
std::vector<HouseholdAssignment> read_households(const std::filesystem::path& file);

}  // namespace focinet
