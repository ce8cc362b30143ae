#include "focinet/household.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "focinet/csv.hpp"
#include "focinet/errors.hpp"

namespace focinet {

std::string_view to_string(CoupleType type) {
  switch (type) {
    case CoupleType::married:
      return "married";
    case CoupleType::registered_partnership:
      return "registered_partnership";
    case CoupleType::common_child:
      return "common_child";
    case CoupleType::cohabiting:
      return "cohabiting";
  }
  return "married";
}

void HouseholdAssignment::rebuild_index() {
  std::sort(households.begin(), households.end(), [](const Household& a, const Household& b) { return a.id < b.id; });
  membership_.clear();
  for (const auto& h : households) {
    for (PersonId p : h.members) membership_.emplace_back(p, h.id);
  }
  std::sort(membership_.begin(), membership_.end());
}

const Household* HouseholdAssignment::find(HouseholdId id) const {
  auto it = std::lower_bound(households.begin(), households.end(), id,
                             [](const Household& h, HouseholdId v) { return h.id < v; });
  return it != households.end() && it->id == id ? &*it : nullptr;
}

const Household* HouseholdAssignment::household_of(PersonId id) const {
  auto it = std::lower_bound(membership_.begin(), membership_.end(), std::pair<PersonId, HouseholdId>{id, 0});
  if (it == membership_.end() || it->first != id) return nullptr;
  return find(it->second);
}

namespace {

bool contains(std::span<const PersonId> sorted, PersonId id) { return std::binary_search(sorted.begin(), sorted.end(), id); }

bool share_parent(const RegistryIndex& index, PersonId a, PersonId b) {
  auto pa = index.parents(a);
  auto pb = index.parents(b);
  return std::any_of(pa.begin(), pa.end(), [&](PersonId p) { return contains(pb, p); });
}

int age_in(const RegistryIndex& index, PersonId id, int year) { return year - index.person(id)->birth_year; }

bool all_adults(const RegistryIndex& index, std::span<const ResidenceSpell* const> residents, int year) {
  return std::all_of(residents.begin(), residents.end(),
                     [&](const ResidenceSpell* r) { return age_in(index, r->person_id, year) >= 18; });
}

std::optional<CoupleType> classify(const RegistryIndex& index, const ResidenceSpell& ra, const ResidenceSpell& rb,
                                   int year, bool adults_only) {
  const PersonId a = ra.person_id;
  const PersonId b = rb.person_id;
  auto formal = [](const ResidenceSpell& r, PersonId other) -> std::optional<CoupleType> {
    if (r.partner_id != other) return std::nullopt;
    if (r.marital_status == MaritalStatus::married) return CoupleType::married;
    if (r.marital_status == MaritalStatus::registered_partnership) return CoupleType::registered_partnership;
    return std::nullopt;
  };
  auto fa = formal(ra, b);
  auto fb = formal(rb, a);
  if (fa || fb) return std::min(fa.value_or(CoupleType::cohabiting), fb.value_or(CoupleType::cohabiting));

  auto ca = index.children(a);
  auto cb = index.children(b);
  for (PersonId c : ca) {
    if (contains(cb, c) && index.person(c)->birth_year <= year) return CoupleType::common_child;
  }

  const auto& pa = *index.person(a);
  const auto& pb = *index.person(b);
  if (pa.sex == pb.sex) return std::nullopt;
  if (std::abs(pa.birth_year - pb.birth_year) >= 15) return std::nullopt;
  if (index.has_child_by(a, year) || index.has_child_by(b, year)) return std::nullopt;
  if (contains(index.parents(a), b) || contains(index.parents(b), a) || share_parent(index, a, b)) return std::nullopt;
  if (!adults_only) return std::nullopt;
  return CoupleType::cohabiting;
}

std::vector<const ResidenceSpell*> residents_at(const RegistryIndex& index, AddressId address, int year) {
  std::vector<const ResidenceSpell*> out;
  for (const auto& r : index.residences(year)) {
    if (r.address_id == address) out.push_back(&r);
  }
  return out;
}

struct Candidate {
  CoupleType type;
  int gap;
  PersonId a, b;
  bool carried;  // former couple that still lives together
  auto key() const { return std::tuple(carried, type, gap, a, b); }
};

}  // namespace

std::optional<CoupleType> classify_couple(const RegistryIndex& index, PersonId a, PersonId b, int year) {
  const auto* ra = index.residence(a, year);
  const auto* rb = index.residence(b, year);
  if (a == b || !ra || !rb || ra->address_id != rb->address_id) return std::nullopt;
  auto residents = residents_at(index, ra->address_id, year);
  return classify(index, *ra, *rb, year, all_adults(index, residents, year));
}

bool child_attaches(const RegistryIndex& index, PersonId child, int year, bool in_couple) {
  const auto* r = index.residence(child, year);
  if (!r || in_couple) return false;
  bool with_parent = false;
  for (PersonId p : index.parents(child)) {
    const auto* rp = index.residence(p, year);
    if (rp && rp->address_id == r->address_id) with_parent = true;
  }
  return with_parent && age_in(index, child, year) < 25 && !index.ever_married(child, year) &&
         !index.has_child_by(child, year);
}

HouseholdAssignment assign_households(const RegistryIndex& index, int year, const HouseholdAssignment* previous) {
  HouseholdAssignment out;
  out.year = year;
  out.next_id = previous ? previous->next_id : 1;

  std::vector<const ResidenceSpell*> rows;
  for (const auto& r : index.residences(year)) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const ResidenceSpell* x, const ResidenceSpell* y) {
    return std::pair(x->address_id, x->person_id) < std::pair(y->address_id, y->person_id);
  });

  struct Draft {
    AddressId address;
    std::vector<PersonId> heads;
    std::optional<CoupleType> couple;
    std::vector<PersonId> children;
  };
  std::vector<Draft> drafts;

  std::size_t begin = 0;
  while (begin < rows.size()) {
    std::size_t end = begin;
    while (end < rows.size() && rows[end]->address_id == rows[begin]->address_id) ++end;
    std::span<const ResidenceSpell* const> group(rows.data() + begin, end - begin);
    const AddressId address = rows[begin]->address_id;
    const bool adults_only = all_adults(index, group, year);
    auto pos = [&](PersonId id) {
      auto it = std::lower_bound(group.begin(), group.end(), id,
                                 [](const ResidenceSpell* r, PersonId v) { return r->person_id < v; });
      return static_cast<std::size_t>(it - group.begin());
    };

    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        const auto& ra = *group[i];
        const auto& rb = *group[j];
        int gap = std::abs(index.person(ra.person_id)->birth_year - index.person(rb.person_id)->birth_year);
        if (auto t = classify(index, ra, rb, year, adults_only)) {
          candidates.push_back({*t, gap, ra.person_id, rb.person_id, false});
        } else if (previous) {
          const auto* h = previous->household_of(ra.person_id);
          if (h && h->couple && h->heads == std::vector<PersonId>{ra.person_id, rb.person_id}) {
            candidates.push_back({*h->couple, gap, ra.person_id, rb.person_id, true});
          }
        }
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& x, const Candidate& y) { return x.key() < y.key(); });

    std::vector<int> draft_of(group.size(), -1);
    for (const auto& c : candidates) {
      std::size_t ia = pos(c.a);
      std::size_t ib = pos(c.b);
      if (draft_of[ia] >= 0 || draft_of[ib] >= 0) continue;
      for (PersonId p : {c.a, c.b}) {
        if (child_attaches(index, p, year)) out.couple_over_child.push_back(p);
      }
      draft_of[ia] = draft_of[ib] = static_cast<int>(drafts.size());
      drafts.push_back({address, {c.a, c.b}, c.type, {}});
    }

    // Persons with a co-resident child are never attachable themselves, so
    // every parent seen below heads a household once singles are created.
    std::vector<std::size_t> attachable;
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (draft_of[i] >= 0) continue;
      if (child_attaches(index, group[i]->person_id, year)) {
        attachable.push_back(i);
      } else {
        draft_of[i] = static_cast<int>(drafts.size());
        drafts.push_back({address, {group[i]->person_id}, std::nullopt, {}});
      }
    }
    for (std::size_t i : attachable) {
      int best = -1;
      for (PersonId parent : index.parents(group[i]->person_id)) {
        std::size_t ip = pos(parent);
        if (ip == group.size() || group[ip]->person_id != parent || draft_of[ip] < 0) continue;
        int d = draft_of[ip];
        if (drafts[d].children.end() != std::find(drafts[d].children.begin(), drafts[d].children.end(), parent)) continue;
        if (best < 0 || (drafts[d].couple && !drafts[best].couple)) best = d;
      }
      if (best < 0) {
        draft_of[i] = static_cast<int>(drafts.size());
        drafts.push_back({address, {group[i]->person_id}, std::nullopt, {}});
      } else {
        draft_of[i] = best;
        drafts[best].children.push_back(group[i]->person_id);
      }
    }
    begin = end;
  }

  std::map<std::vector<PersonId>, HouseholdId> previous_ids;
  if (previous) {
    for (const auto& h : previous->households) {
      if (!h.heads.empty()) previous_ids.emplace(h.heads, h.id);
    }
  }
  std::sort(drafts.begin(), drafts.end(), [](const Draft& x, const Draft& y) {
    return std::pair(x.address, x.heads.front()) < std::pair(y.address, y.heads.front());
  });
  for (auto& d : drafts) {
    Household h;
    auto it = previous_ids.find(d.heads);
    h.id = it != previous_ids.end() ? it->second : out.next_id++;
    h.address = d.address;
    h.heads = d.heads;
    h.couple = d.couple;
    std::sort(d.children.begin(), d.children.end());
    h.children = d.children;
    h.members = d.heads;
    h.members.insert(h.members.end(), d.children.begin(), d.children.end());
    std::sort(h.members.begin(), h.members.end());
    out.households.push_back(std::move(h));
  }
  std::sort(out.couple_over_child.begin(), out.couple_over_child.end());
  out.rebuild_index();
  return out;
}

std::vector<HouseholdAssignment> assign_household_years(const RegistryIndex& index, int first, int last) {
  std::vector<HouseholdAssignment> years;
  for (int y = first; y <= last; ++y) {
    years.push_back(assign_households(index, y, years.empty() ? nullptr : &years.back()));
  }
  return years;
}

void write_households(const std::vector<HouseholdAssignment>& years, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw DataError("cannot write " + file.string());
  CsvWriter w(out);
  w.header({"year", "person_id", "household_id", "address_id"});
  for (const auto& a : years) {
    for (const auto& [person, hid] : a.membership()) {
      w.field(a.year).field(person).field(hid).field(a.find(hid)->address).end_row();
    }
  }
}

std::vector<HouseholdAssignment> read_households(const std::filesystem::path& file) {
  CsvReader r(file, {"year", "person_id", "household_id", "address_id"});
  std::map<int, std::map<HouseholdId, Household>> by_year;
  std::set<std::pair<int, PersonId>> seen;
  while (r.next()) {
    int year = r.year(0);
    PersonId person = r.u64(1);
    HouseholdId hid = r.u64(2);
    AddressId address = r.u64(3);
    if (!seen.emplace(year, person).second) r.fail(1, "person listed twice in one year");
    auto& h = by_year[year][hid];
    if (h.id == 0) {
      h.id = hid;
      h.address = address;
    } else if (h.address != address) {
      r.fail(3, "household spans two addresses");
    }
    h.members.push_back(person);
  }
  std::vector<HouseholdAssignment> out;
  HouseholdId watermark = 1;
  for (auto& [year, households] : by_year) {
    HouseholdAssignment a;
    a.year = year;
    for (auto& [id, h] : households) {
      std::sort(h.members.begin(), h.members.end());
      watermark = std::max(watermark, id + 1);
      a.households.push_back(std::move(h));
    }
    a.next_id = watermark;
    a.rebuild_index();
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace focinet
