#include "focinet/hocc.hpp"

#include <algorithm>
#include <map>

#include "focinet/errors.hpp"
#include "focinet/parallel.hpp"
#include "focinet/rng.hpp"

namespace focinet {

namespace {

constexpr LayerMask kNeighborhood = layer_bit(Layer::neighborhood);
constexpr std::size_t kInclusionExclusionLimit = 24;

void check_order(int order) {
  if (order < 2) throw UsageError("clique order must be at least 2");
}

std::vector<PersonId> persons_at(const Graph& g, std::uint32_t container, LayerMask bits) {
  std::vector<PersonId> out;
  for (auto [q, e] : g.adjacent(container)) {
    if ((g.mask(e) & bits) && g.node(q).is_person()) out.push_back(g.node(q).id());
  }
  return out;
}

}  // namespace

ContainerNeighborhood container_neighborhood(const Graph& g, PersonId person) {
  auto idx = g.index_of(NodeId::person(person));
  if (!idx) throw DataError("unknown person " + std::to_string(person));
  ContainerNeighborhood n;
  n.person = person;
  for (auto [x, e] : g.adjacent(*idx)) {
    const NodeId node = g.node(x);
    const LayerMask m = g.mask(e);
    if (node.is_person()) {
      n.containers.push_back({node.id()});
      continue;
    }
    if (LayerMask direct = m & ~kNeighborhood) n.containers.push_back(persons_at(g, x, direct));
    if (!(m & kNeighborhood) || node.tag() != NodeTag::household) continue;
    for (auto [a, e2] : g.adjacent(x)) {
      if (!(g.mask(e2) & kNeighborhood) || g.node(a).tag() != NodeTag::address) continue;
      std::vector<PersonId> here;
      std::vector<std::uint32_t> linked;
      for (auto [y, e3] : g.adjacent(a)) {
        if (!(g.mask(e3) & kNeighborhood)) continue;
        if (g.node(y).tag() == NodeTag::household) {
          auto p = persons_at(g, y, kNeighborhood);
          here.insert(here.end(), p.begin(), p.end());
        } else if (g.node(y).tag() == NodeTag::address) {
          linked.push_back(y);
        }
      }
      n.containers.push_back(here);
      for (std::uint32_t other : linked) {
        auto both = here;
        for (auto [h, e4] : g.adjacent(other)) {
          if ((g.mask(e4) & kNeighborhood) && g.node(h).tag() == NodeTag::household) {
            auto p = persons_at(g, h, kNeighborhood);
            both.insert(both.end(), p.begin(), p.end());
          }
        }
        n.containers.push_back(std::move(both));
      }
    }
  }
  for (auto& c : n.containers) std::erase(c, person);
  normalize(n);
  return n;
}

void normalize(ContainerNeighborhood& n) {
  for (auto& c : n.containers) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  std::erase_if(n.containers, [](const auto& c) { return c.empty(); });
  std::sort(n.containers.begin(), n.containers.end(),
            [](const auto& a, const auto& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  n.containers.erase(std::unique(n.containers.begin(), n.containers.end()), n.containers.end());
  std::vector<PersonId> all;
  for (const auto& c : n.containers) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  n.degree = static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
}

CliqueCount binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  CliqueCount r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    CliqueCount next;
    if (__builtin_mul_overflow(r, static_cast<CliqueCount>(n - k + i), &next)) {
      throw DataError("clique count C(" + std::to_string(n) + "," + std::to_string(k) + ") overflows 128 bits");
    }
    r = next / static_cast<CliqueCount>(i);
  }
  return r;
}

CliqueCount container_clique_count(std::size_t others, int order) {
  check_order(order);
  return binomial(others, static_cast<std::uint64_t>(order - 1));
}

CliqueCount clique_count_inclusion_exclusion(const ContainerNeighborhood& n, int order) {
  check_order(order);
  const std::size_t need = static_cast<std::size_t>(order - 1);
  const auto& c = n.containers;
  CliqueCount total = 0;
  std::vector<std::vector<PersonId>> stack(c.size() + 1);
  // Depth-first over subsets in index order; a subset whose intersection has
  // fewer than ℓ-1 alters contributes nothing, and neither do its supersets.
  auto dfs = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    for (std::size_t j = start; j < c.size(); ++j) {
      auto& inter = stack[depth + 1];
      inter.clear();
      if (depth == 0) {
        inter = c[j];
      } else {
        std::set_intersection(stack[depth].begin(), stack[depth].end(), c[j].begin(), c[j].end(),
                              std::back_inserter(inter));
      }
      if (inter.size() < need) continue;
      CliqueCount term = binomial(inter.size(), need);
      total += depth % 2 == 0 ? term : -term;
      self(self, j + 1, depth + 1);
    }
  };
  dfs(dfs, 0, 0);
  return total;
}

CliqueCount clique_count_by_signature(const ContainerNeighborhood& n, int order) {
  check_order(order);
  const std::size_t words = (n.containers.size() + 63) / 64;
  std::map<PersonId, std::vector<std::uint64_t>> signature;
  for (std::size_t i = 0; i < n.containers.size(); ++i) {
    for (PersonId p : n.containers[i]) {
      auto& s = signature[p];
      s.resize(words, 0);
      s[i / 64] |= std::uint64_t{1} << (i % 64);
    }
  }
  std::map<std::vector<std::uint64_t>, std::uint64_t> atoms_by_sig;
  for (auto& [p, s] : signature) ++atoms_by_sig[s];
  std::vector<std::pair<std::vector<std::uint64_t>, std::uint64_t>> atoms(atoms_by_sig.begin(), atoms_by_sig.end());

  CliqueCount total = 0;
  std::vector<std::vector<std::uint64_t>> stack(static_cast<std::size_t>(order) + 1);
  auto dfs = [&](auto&& self, std::size_t start, std::size_t remaining, std::size_t depth, CliqueCount ways) -> void {
    if (remaining == 0) {
      total += ways;
      return;
    }
    for (std::size_t a = start; a < atoms.size(); ++a) {
      auto& inter = stack[depth + 1];
      const auto& sig = atoms[a].first;
      bool any = false;
      inter.resize(words);
      for (std::size_t w = 0; w < words; ++w) {
        inter[w] = depth == 0 ? sig[w] : (stack[depth][w] & sig[w]);
        any = any || inter[w] != 0;
      }
      if (!any) continue;
      for (std::size_t take = 1; take <= std::min<std::uint64_t>(remaining, atoms[a].second); ++take) {
        self(self, a + 1, remaining - take, depth + 1, ways * binomial(atoms[a].second, take));
      }
    }
  };
  dfs(dfs, 0, static_cast<std::size_t>(order - 1), 0, 1);
  return total;
}

CliqueCount clique_count(const ContainerNeighborhood& n, int order) {
  if (n.containers.size() > kInclusionExclusionLimit) return clique_count_by_signature(n, order);
  return clique_count_inclusion_exclusion(n, order);
}

HoccResult local_hocc(const ContainerNeighborhood& n, int order) {
  check_order(order);
  HoccResult r;
  r.person = n.person;
  r.order = order;
  r.degree = n.degree;
  r.k_l = clique_count(n, order);
  r.k_l1 = clique_count(n, order + 1);
  const auto l = static_cast<std::size_t>(order);
  if (n.degree + 1 > l && r.k_l > 0) {
    long double num = static_cast<long double>(order) * static_cast<long double>(r.k_l1);
    long double den = static_cast<long double>(n.degree - l + 1) * static_cast<long double>(r.k_l);
    r.coefficient = static_cast<double>(num / den);
  }
  return r;
}

HoccResult local_hocc(const Graph& g, PersonId person, int order) {
  return local_hocc(container_neighborhood(g, person), order);
}

HoccSummary hocc_distribution(const Graph& g, int order, std::size_t sample, std::uint64_t seed, std::size_t threads,
                              int bins) {
  check_order(order);
  if (sample == 0) throw UsageError("hocc sample size must be at least 1");
  if (bins < 1) throw UsageError("hocc needs at least one bin");
  std::vector<PersonId> people;
  const std::size_t n = g.person_count();
  if (sample >= n) {
    for (NodeId p : g.persons()) people.push_back(p.id());
  } else {
    CounterRng rng(seed, "hocc.sample");
    for (auto k : rng.sample_indices(n, sample)) people.push_back(g.node(static_cast<std::uint32_t>(k)).id());
    std::sort(people.begin(), people.end());
  }
  HoccSummary s;
  s.nodes.resize(people.size());
  parallel_for(people.size(), threads, [&](std::size_t i) { s.nodes[i] = local_hocc(g, people[i], order); });

  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  double sum = 0;
  std::size_t above = 0;
  for (const auto& r : s.nodes) {
    if (!r.coefficient) continue;
    double c = *r.coefficient;
    ++s.defined;
    sum += c;
    above += c > 0.95 ? 1 : 0;
    auto b = static_cast<std::size_t>(std::clamp(c, 0.0, 1.0) * bins);
    ++counts[std::min(b, counts.size() - 1)];
  }
  s.histogram = MetricTable("hocc_histogram", {"bin_low", "bin_high", "count"});
  for (int b = 0; b < bins; ++b) {
    s.histogram.add_row({static_cast<double>(b) / bins, static_cast<double>(b + 1) / bins, counts[static_cast<std::size_t>(b)]});
  }
  if (s.defined > 0) {
    s.share_above_095 = static_cast<double>(above) / static_cast<double>(s.defined);
    s.mean = sum / static_cast<double>(s.defined);
  }
  return s;
}

std::string to_string(CliqueCount value) {
  if (value == 0) return "0";
  bool negative = value < 0;
  unsigned __int128 v = negative ? static_cast<unsigned __int128>(-value) : static_cast<unsigned __int128>(value);
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  if (negative) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

}  // namespace focinet
