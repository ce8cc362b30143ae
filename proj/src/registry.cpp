#include "focinet/registry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include "focinet/csv.hpp"
#include "focinet/errors.hpp"

namespace focinet {

std::string_view to_string(Sex sex) { return sex == Sex::female ? "female" : "male"; }

std::string_view to_string(ParentKind kind) { return kind == ParentKind::biological ? "biological" : "adoptive"; }

std::string_view to_string(MaritalStatus status) {
  switch (status) {
    case MaritalStatus::never_married:
      return "never_married";
    case MaritalStatus::married:
      return "married";
    case MaritalStatus::registered_partnership:
      return "registered_partnership";
    case MaritalStatus::divorced:
      return "divorced";
    case MaritalStatus::widowed:
      return "widowed";
  }
  return "never_married";
}

namespace {

std::optional<MaritalStatus> parse_marital(std::string_view s) {
  for (auto st : {MaritalStatus::never_married, MaritalStatus::married, MaritalStatus::registered_partnership,
                  MaritalStatus::divorced, MaritalStatus::widowed}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::string format_migrations(const std::vector<Migration>& migrations) {
  std::string out;
  for (const auto& m : migrations) {
    if (!out.empty()) out += ';';
    out += std::to_string(m.year);
    out += m.direction == MigrationDirection::in ? ":in" : ":out";
  }
  return out;
}

std::vector<Migration> parse_migrations(const CsvReader& r, std::size_t column) {
  std::vector<Migration> out;
  std::string_view s = r.text(column);
  while (!s.empty()) {
    auto semi = s.find(';');
    auto item = s.substr(0, semi);
    auto colon = item.find(':');
    int year = 0;
    if (colon == std::string_view::npos) r.fail(column, "migration entry must be YEAR:in or YEAR:out");
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + colon, year);
    if (ec != std::errc{} || ptr != item.data() + colon) r.fail(column, "bad migration year");
    auto dir = item.substr(colon + 1);
    if (dir == "in") {
      out.push_back({year, MigrationDirection::in});
    } else if (dir == "out") {
      out.push_back({year, MigrationDirection::out});
    } else {
      r.fail(column, "migration direction must be 'in' or 'out'");
    }
    if (semi == std::string_view::npos) break;
    s.remove_prefix(semi + 1);
  }
  if (!std::is_sorted(out.begin(), out.end(), [](auto& a, auto& b) { return a.year < b.year; })) {
    r.fail(column, "migrations must be ordered by year");
  }
  return out;
}

template <typename T, typename Key>
void sort_by(std::vector<T>& v, Key key) {
  std::sort(v.begin(), v.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
}

[[noreturn]] void dangling(const char* file, std::size_t line, const char* column, std::uint64_t id,
                           const char* target) {
  throw DataError(std::string("dangling reference: ") + file + " line " + std::to_string(line) + ": " + column + " " +
                  std::to_string(id) + " not in " + target);
}

}  // namespace

void canonicalize(RegistryBundle& b) {
  sort_by(b.persons, [](const PersonRecord& p) { return p.person_id; });
  std::sort(b.parent_links.begin(), b.parent_links.end());
  sort_by(b.residences, [](const ResidenceSpell& r) { return std::tie(r.year, r.person_id); });
  sort_by(b.addresses, [](const AddressPoint& a) { return a.address_id; });
  sort_by(b.employment, [](const EmploymentSpell& e) { return std::tie(e.year, e.person_id, e.workplace_id); });
  sort_by(b.enrollment, [](const EnrollmentSpell& e) {
    return std::tie(e.year, e.person_id, e.institution_id, e.program_id, e.grade_or_cohort);
  });
  sort_by(b.income, [](const IncomeRecord& r) { return std::tie(r.year, r.person_id); });

  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  auto see = [&](int y) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  };
  for (auto& r : b.residences) see(r.year);
  for (auto& r : b.employment) see(r.year);
  for (auto& r : b.enrollment) see(r.year);
  for (auto& r : b.income) see(r.year);
  if (lo > hi) {
    b.start_year = 0;
    b.end_year = -1;
  } else {
    b.start_year = lo;
    b.end_year = hi;
  }
}

RegistryBundle load_registry(const std::filesystem::path& dir, bool lax) {
  RegistryBundle b;
  {
    CsvReader r(dir / "persons.csv", {"person_id", "birth_year", "sex", "death_year", "migrations"}, lax);
    while (r.next()) {
      PersonRecord p;
      p.person_id = r.u64(0);
      p.birth_year = r.year(1);
      auto sex = r.text(2);
      if (sex == "female") {
        p.sex = Sex::female;
      } else if (sex == "male") {
        p.sex = Sex::male;
      } else {
        r.fail(2, "sex must be 'female' or 'male'");
      }
      if (!r.text(3).empty()) p.death_year = r.year(3);
      p.migrations = parse_migrations(r, 4);
      b.persons.push_back(std::move(p));
    }
  }
  std::unordered_set<PersonId> persons;
  for (auto& p : b.persons) persons.insert(p.person_id);

  {
    CsvReader r(dir / "addresses.csv", {"address_id", "x", "y"}, lax);
    while (r.next()) b.addresses.push_back({r.u64(0), r.f64(1), r.f64(2)});
  }
  std::unordered_set<AddressId> addresses;
  for (auto& a : b.addresses) addresses.insert(a.address_id);

  {
    CsvReader r(dir / "parent_links.csv", {"child_id", "parent_id", "kind"}, lax);
    while (r.next()) {
      ParentLink l{r.u64(0), r.u64(1), ParentKind::biological};
      auto kind = r.text(2);
      if (kind == "adoptive") {
        l.kind = ParentKind::adoptive;
      } else if (kind != "biological") {
        r.fail(2, "kind must be 'biological' or 'adoptive'");
      }
      if (!persons.contains(l.child_id)) dangling("parent_links.csv", r.line(), "child_id", l.child_id, "persons.csv");
      if (!persons.contains(l.parent_id)) {
        dangling("parent_links.csv", r.line(), "parent_id", l.parent_id, "persons.csv");
      }
      b.parent_links.push_back(l);
    }
  }
  {
    CsvReader r(dir / "residences.csv", {"person_id", "year", "address_id", "marital_status", "partner_id"}, lax);
    while (r.next()) {
      ResidenceSpell s;
      s.person_id = r.u64(0);
      s.year = r.year(1);
      s.address_id = r.u64(2);
      auto status = parse_marital(r.text(3));
      if (!status) r.fail(3, "unknown marital_status '" + std::string(r.text(3)) + "'");
      s.marital_status = *status;
      s.partner_id = r.opt_u64(4);
      if (!persons.contains(s.person_id)) dangling("residences.csv", r.line(), "person_id", s.person_id, "persons.csv");
      if (!addresses.contains(s.address_id)) {
        dangling("residences.csv", r.line(), "address_id", s.address_id, "addresses.csv");
      }
      if (s.partner_id && !persons.contains(*s.partner_id)) {
        dangling("residences.csv", r.line(), "partner_id", *s.partner_id, "persons.csv");
      }
      b.residences.push_back(s);
    }
  }
  {
    CsvReader r(dir / "employment.csv", {"person_id", "year", "workplace_id", "fictional"}, lax);
    while (r.next()) {
      EmploymentSpell e{r.u64(0), r.year(1), r.u64(2), false};
      auto f = r.u64(3);
      if (f > 1) r.fail(3, "fictional must be 0 or 1");
      e.fictional = f == 1;
      if (!persons.contains(e.person_id)) dangling("employment.csv", r.line(), "person_id", e.person_id, "persons.csv");
      b.employment.push_back(e);
    }
  }
  {
    CsvReader r(dir / "enrollment.csv", {"person_id", "year", "institution_id", "program_id", "grade"}, lax);
    while (r.next()) {
      EnrollmentSpell e{r.u64(0), r.year(1), r.u64(2), r.u64(3), r.i64(4)};
      if (!persons.contains(e.person_id)) dangling("enrollment.csv", r.line(), "person_id", e.person_id, "persons.csv");
      b.enrollment.push_back(e);
    }
  }
  {
    CsvReader r(dir / "income.csv", {"person_id", "year", "income"}, lax);
    while (r.next()) {
      IncomeRecord i{r.u64(0), r.year(1), r.f64(2)};
      if (!persons.contains(i.person_id)) dangling("income.csv", r.line(), "person_id", i.person_id, "persons.csv");
      b.income.push_back(i);
    }
  }
  canonicalize(b);
  return b;
}

void write_registry(const RegistryBundle& bundle, const std::filesystem::path& dir) {
  RegistryBundle b = bundle;
  canonicalize(b);
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto f = open("persons.csv");
    CsvWriter w(f);
    w.header({"person_id", "birth_year", "sex", "death_year", "migrations"});
    for (auto& p : b.persons) {
      w.field(p.person_id).field(p.birth_year).field(to_string(p.sex));
      if (p.death_year) {
        w.field(*p.death_year);
      } else {
        w.empty();
      }
      w.field(format_migrations(p.migrations)).end_row();
    }
  }
  {
    auto f = open("parent_links.csv");
    CsvWriter w(f);
    w.header({"child_id", "parent_id", "kind"});
    for (auto& l : b.parent_links) w.field(l.child_id).field(l.parent_id).field(to_string(l.kind)).end_row();
  }
  {
    auto f = open("residences.csv");
    CsvWriter w(f);
    w.header({"person_id", "year", "address_id", "marital_status", "partner_id"});
    for (auto& s : b.residences) {
      w.field(s.person_id).field(s.year).field(s.address_id).field(to_string(s.marital_status));
      if (s.partner_id) {
        w.field(*s.partner_id);
      } else {
        w.empty();
      }
      w.end_row();
    }
  }
  {
    auto f = open("addresses.csv");
    CsvWriter w(f);
    w.header({"address_id", "x", "y"});
    for (auto& a : b.addresses) w.field(a.address_id).field(a.x).field(a.y).end_row();
  }
  {
    auto f = open("employment.csv");
    CsvWriter w(f);
    w.header({"person_id", "year", "workplace_id", "fictional"});
    for (auto& e : b.employment) {
      w.field(e.person_id).field(e.year).field(e.workplace_id).field(e.fictional ? 1 : 0).end_row();
    }
  }
  {
    auto f = open("enrollment.csv");
    CsvWriter w(f);
    w.header({"person_id", "year", "institution_id", "program_id", "grade"});
    for (auto& e : b.enrollment) {
      w.field(e.person_id).field(e.year).field(e.institution_id).field(e.program_id).field(e.grade_or_cohort).end_row();
    }
  }
  {
    auto f = open("income.csv");
    CsvWriter w(f);
    w.header({"person_id", "year", "income"});
    for (auto& i : b.income) w.field(i.person_id).field(i.year).field(i.income).end_row();
  }
}

bool present_in_year(const PersonRecord& p, int year) {
  if (year < p.birth_year) return false;
  if (p.death_year && *p.death_year < year) return false;
  // Abroad before the first event if that event is an arrival.
  bool resident = p.migrations.empty() || p.migrations.front().direction == MigrationDirection::out;
  bool arrives = false;
  for (const auto& m : p.migrations) {
    if (m.year < year) {
      resident = m.direction == MigrationDirection::in;
    } else if (m.year == year && m.direction == MigrationDirection::in) {
      arrives = true;
    }
  }
  return resident || arrives;
}

std::vector<PersonId> population_mask(const RegistryBundle& bundle, int year) {
  if (year < bundle.start_year || year > bundle.end_year) {
    throw UsageError("year " + std::to_string(year) + " outside registry span " + std::to_string(bundle.start_year) +
                     ".." + std::to_string(bundle.end_year));
  }
  std::vector<PersonId> out;
  for (const auto& p : bundle.persons) {
    if (present_in_year(p, year)) out.push_back(p.person_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t ValidationReport::count(std::string_view code) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; }));
}

ValidationReport validate(const RegistryBundle& b) {
  ValidationReport report;
  auto add = [&](Severity s, std::string code, std::string msg) {
    report.violations.push_back({s, std::move(code), std::move(msg)});
  };

  std::unordered_set<PersonId> persons;
  for (const auto& p : b.persons) {
    if (!persons.insert(p.person_id).second) {
      add(Severity::error, "duplicate_person", "person " + std::to_string(p.person_id) + " appears more than once");
    }
    if (p.death_year && *p.death_year < p.birth_year) {
      add(Severity::error, "death_before_birth", "person " + std::to_string(p.person_id) + " dies before birth");
    }
  }
  std::unordered_set<AddressId> addresses;
  for (const auto& a : b.addresses) {
    if (!addresses.insert(a.address_id).second) {
      add(Severity::error, "duplicate_address", "address " + std::to_string(a.address_id) + " appears more than once");
    }
    if (!std::isfinite(a.x) || !std::isfinite(a.y)) {
      add(Severity::error, "nonfinite_coordinates", "address " + std::to_string(a.address_id));
    }
  }
  auto need_person = [&](PersonId id, const char* where) {
    if (!persons.contains(id)) {
      add(Severity::error, "dangling_reference", std::string(where) + " references unknown person " + std::to_string(id));
    }
  };

  // Parent links: self-links, per-kind counts, cycles.
  std::map<std::pair<PersonId, ParentKind>, int> per_kind;
  std::unordered_map<PersonId, std::vector<PersonId>> parents_of;
  for (const auto& l : b.parent_links) {
    need_person(l.child_id, "parent_links");
    need_person(l.parent_id, "parent_links");
    if (l.child_id == l.parent_id) {
      add(Severity::error, "self_parent", "person " + std::to_string(l.child_id) + " is their own parent");
      continue;
    }
    if (++per_kind[{l.child_id, l.kind}] == 3) {
      add(Severity::error, "too_many_parents",
          "person " + std::to_string(l.child_id) + " has more than two " + std::string(to_string(l.kind)) + " parents");
    }
    parents_of[l.child_id].push_back(l.parent_id);
  }
  {
    // Iterative DFS; one violation per back edge.
    enum Color : std::uint8_t { white, grey, black };
    std::unordered_map<PersonId, Color> color;
    std::vector<PersonId> roots;
    for (auto& [child, _] : parents_of) roots.push_back(child);
    std::sort(roots.begin(), roots.end());
    for (PersonId root : roots) {
      if (color[root] != white) continue;
      std::vector<std::pair<PersonId, std::size_t>> stack{{root, 0}};
      color[root] = grey;
      while (!stack.empty()) {
        auto& [node, next] = stack.back();
        auto it = parents_of.find(node);
        if (it == parents_of.end() || next >= it->second.size()) {
          color[node] = black;
          stack.pop_back();
          continue;
        }
        PersonId parent = it->second[next++];
        Color c = color[parent];
        if (c == grey) {
          add(Severity::error, "parent_cycle",
              "parent relation has a cycle through persons " + std::to_string(node) + " and " + std::to_string(parent));
        } else if (c == white) {
          color[parent] = grey;
          stack.emplace_back(parent, 0);
        }
      }
    }
  }

  std::set<std::pair<int, PersonId>> seen;
  for (const auto& r : b.residences) {
    need_person(r.person_id, "residences");
    if (!addresses.contains(r.address_id)) {
      add(Severity::error, "dangling_reference", "residence references unknown address " + std::to_string(r.address_id));
    }
    if (r.partner_id) need_person(*r.partner_id, "residences.partner_id");
    if (!seen.insert({r.year, r.person_id}).second) {
      add(Severity::error, "duplicate_residence",
          "person " + std::to_string(r.person_id) + " has several residences in " + std::to_string(r.year));
    }
  }
  for (const auto& e : b.employment) {
    need_person(e.person_id, "employment");
    if (e.workplace_id == 0) {
      add(Severity::error, "invalid_workplace", "person " + std::to_string(e.person_id) + " has an empty workplace id");
    }
  }
  for (const auto& e : b.enrollment) need_person(e.person_id, "enrollment");
  seen.clear();
  for (const auto& i : b.income) {
    need_person(i.person_id, "income");
    if (!seen.insert({i.year, i.person_id}).second) {
      add(Severity::error, "duplicate_income",
          "person " + std::to_string(i.person_id) + " has several income rows in " + std::to_string(i.year));
    }
  }
  return report;
}

RegistryIndex::RegistryIndex(const RegistryBundle& bundle) : bundle_(&bundle) {
  const auto& b = bundle;
  person_pos_.reserve(b.persons.size());
  for (std::size_t i = 0; i < b.persons.size(); ++i) person_pos_.emplace(b.persons[i].person_id, i);
  for (std::size_t i = 0; i < b.addresses.size(); ++i) address_pos_.emplace(b.addresses[i].address_id, i);
  for (const auto& l : b.parent_links) {
    parents_[l.child_id].push_back(l.parent_id);
    children_[l.parent_id].push_back(l.child_id);
  }
  auto tidy = [](auto& map) {
    for (auto& [_, v] : map) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  };
  tidy(parents_);
  tidy(children_);

  for (std::size_t i = 0; i < b.residences.size();) {
    std::size_t j = i;
    while (j < b.residences.size() && b.residences[j].year == b.residences[i].year) ++j;
    residence_range_[b.residences[i].year] = {i, j};
    i = j;
  }
  for (std::size_t i = 0; i < b.income.size();) {
    std::size_t j = i;
    while (j < b.income.size() && b.income[j].year == b.income[i].year) ++j;
    income_range_[b.income[i].year] = {i, j};
    i = j;
  }
  for (const auto& r : b.residences) {
    if (r.marital_status == MaritalStatus::never_married) continue;
    auto [it, inserted] = first_married_year_.emplace(r.person_id, r.year);
    if (!inserted) it->second = std::min(it->second, r.year);
  }
}

const PersonRecord* RegistryIndex::person(PersonId id) const {
  auto it = person_pos_.find(id);
  return it == person_pos_.end() ? nullptr : &bundle_->persons[it->second];
}

const AddressPoint* RegistryIndex::address(AddressId id) const {
  auto it = address_pos_.find(id);
  return it == address_pos_.end() ? nullptr : &bundle_->addresses[it->second];
}

std::span<const PersonId> RegistryIndex::parents(PersonId id) const {
  auto it = parents_.find(id);
  if (it == parents_.end()) return {};
  return it->second;
}

std::span<const PersonId> RegistryIndex::children(PersonId id) const {
  auto it = children_.find(id);
  if (it == children_.end()) return {};
  return it->second;
}

std::span<const ResidenceSpell> RegistryIndex::residences(int year) const {
  auto it = residence_range_.find(year);
  if (it == residence_range_.end()) return {};
  return std::span(bundle_->residences).subspan(it->second.first, it->second.second - it->second.first);
}

const ResidenceSpell* RegistryIndex::residence(PersonId id, int year) const {
  auto rows = residences(year);
  auto it = std::lower_bound(rows.begin(), rows.end(), id,
                             [](const ResidenceSpell& r, PersonId v) { return r.person_id < v; });
  if (it == rows.end() || it->person_id != id) return nullptr;
  return &*it;
}

bool RegistryIndex::ever_married(PersonId id, int year) const {
  auto it = first_married_year_.find(id);
  return it != first_married_year_.end() && it->second <= year;
}

bool RegistryIndex::has_child_by(PersonId id, int year) const {
  for (PersonId child : children(id)) {
    const auto* c = person(child);
    if (c && c->birth_year <= year) return true;
  }
  return false;
}

std::optional<double> RegistryIndex::income(PersonId id, int year) const {
  auto it = income_range_.find(year);
  if (it == income_range_.end()) return std::nullopt;
  auto rows = std::span(bundle_->income).subspan(it->second.first, it->second.second - it->second.first);
  auto pos = std::lower_bound(rows.begin(), rows.end(), id,
                              [](const IncomeRecord& r, PersonId v) { return r.person_id < v; });
  if (pos == rows.end() || pos->person_id != id) return std::nullopt;
  return pos->income;
}

}  // namespace focinet
