#include <doctest.h>

#include <chrono>

#include "fixtures.hpp"
#include "focinet/errors.hpp"
#include "focinet/household.hpp"
#include "focinet/layers.hpp"
#include "focinet/paths.hpp"
#include "focinet/weights.hpp"

using namespace focinet;
using fixtures::BundleBuilder;

namespace {

/// Closed form evaluated independently of the library.
double kregular_oracle(double n, double k, bool base10) {
  auto lg = [&](double v) { return base10 ? std::log10(v) : std::log(v); };
  const double gamma = 0.5772156649;
  return std::max(1.0, (lg(n) - gamma) / lg(k - 1) + 0.5 + lg(1 - 2 / k) / lg(k - 1));
}

double distance(const Graph& weighted, PersonId a, PersonId b) {
  std::vector<PersonId> s{a};
  std::vector<PersonId> t{b};
  auto d = shortest_distances(weighted, s, t);
  return d.distances.empty() ? std::numeric_limits<double>::infinity() : d.distances.front().distance;
}

}  // namespace

TEST_CASE("weight identities") {
  const auto start = std::chrono::steady_clock::now();
  auto w = apply_weights(fixtures::residential_view());
  CHECK(std::abs(distance(w, 1, 2) - 1.0 / 3.0) < 1e-12);
  CHECK(std::abs(distance(w, 1, 3) - 1.0) < 1e-12);
  CHECK(std::abs(distance(w, 1, 4) - 1.5) < 1e-12);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(elapsed < 1.0);
}

TEST_CASE("k-regular distance") {
  WeightParams natural;
  WeightParams ten;
  ten.log_base = LogBase::ten;
  CHECK(std::abs(kregular_distance(500, natural) - 2.3788) < 1e-3);
  CHECK(std::abs(kregular_distance(500, ten) - 2.12) < 0.01);
  CHECK(kregular_distance(2, natural) == 1.0);
  CHECK_THROWS_AS(kregular_distance(1, natural), UsageError);
  for (double n : {2.0, 9.0, 37.0, 500.0, 1e4, 1e6}) {
    CHECK(std::abs(kregular_distance(n, natural) - kregular_oracle(n, 20, false)) < 1e-12);
    CHECK(std::abs(kregular_distance(n, ten) - kregular_oracle(n, 20, true)) < 1e-12);
  }
  double last = 0;
  for (double n = 2; n < 1e5; n *= 1.3) {
    const double d = kregular_distance(n, natural);
    CHECK(d >= 1.0);
    CHECK(d >= last);
    last = d;
  }
}

TEST_CASE("clamp boundary") {
  // Root of the unclamped formula minus one, found numerically.
  auto f = [](double n) {
    const double k = 20;
    return (std::log(n) - 0.5772156649) / std::log(k - 1) + 0.5 + std::log(1 - 2 / k) / std::log(k - 1) - 1.0;
  };
  const double boundary = fixtures::bisect(f, 2, 100);
  CHECK(boundary == doctest::Approx(8.626).epsilon(1e-3));
  for (std::size_t n = 2; n <= 20; ++n) {
    const double d = kregular_distance(static_cast<double>(n));
    if (static_cast<double>(n) <= boundary) {
      CHECK(d == 1.0);
    } else {
      CHECK(d > 1.0);
    }
  }
  // Members of a small workplace are at distance exactly 1.
  std::vector<PersonId> staff{1, 2, 3, 4, 5, 6, 7, 8};
  auto w = apply_weights(fixtures::containers_view({staff}, {}, Layer::colleague));
  CHECK(distance(w, 1, 8) == 1.0);
}

TEST_CASE("container weights") {
  CHECK(container_edge_weight(Layer::household, 4) == 1.0 / 6.0);
  CHECK(container_edge_weight(Layer::colleague, 500) == doctest::Approx(kregular_distance(500) / 2));
  CHECK_THROWS_AS(container_edge_weight(Layer::family, 2), UsageError);
  CHECK_THROWS_AS(container_edge_weight(Layer::neighborhood, 2), UsageError);

  std::vector<PersonId> staff;
  for (PersonId p = 1; p <= 30; ++p) staff.push_back(p);
  auto w = apply_weights(fixtures::containers_view({staff}, {}, Layer::colleague));
  const double expected = kregular_distance(30);
  for (PersonId b = 2; b <= 30; ++b) CHECK(std::abs(distance(w, 1, b) - expected) < 1e-12);

  WeightParams uniform;
  uniform.uniform_container = 0.5;
  auto u = apply_weights(fixtures::containers_view({staff}, {}, Layer::classmate), uniform);
  CHECK(distance(u, 3, 17) == 1.0);

  WeightParams bad;
  bad.k = 2;
  CHECK_THROWS_AS(bad.check(), UsageError);
  WeightParams negative;
  negative.family = -1;
  CHECK_THROWS_AS(negative.check(), UsageError);
}

TEST_CASE("scaling") {
  auto view = fixtures::residential_view();
  auto stacked = view;
  {
    std::vector<PersonId> staff{1, 4, 9, 10, 11};
    auto work = fixtures::containers_view({staff}, {{9, 12}}, Layer::colleague);
    work.set_span(view.span());
    std::vector<const Graph*> parts{&view, &work};
    stacked = stack_layers(parts);
  }
  const std::vector<PersonId> persons{1, 2, 3, 4, 9, 10, 11, 12};
  auto base = apply_weights(stacked);
  auto base_d = shortest_distances(base, persons, persons);

  SUBCASE("doubling every layer doubles every distance") {
    WeightParams twice;
    twice.layer_factor.fill(2.0);
    auto d = shortest_distances(apply_weights(stacked, twice), persons, persons);
    REQUIRE(d.distances.size() == base_d.distances.size());
    for (std::size_t i = 0; i < d.distances.size(); ++i) CHECK(d.distances[i].distance == 2 * base_d.distances[i].distance);
  }
  SUBCASE("doubling the fixed weights doubles residential distances") {
    WeightParams twice;
    twice.family *= 2;
    twice.person_household *= 2;
    twice.household_address *= 2;
    twice.address_address *= 2;
    auto w = apply_weights(view, twice);
    auto w1 = apply_weights(view);
    for (PersonId a : {1, 2, 3}) {
      for (PersonId b : {2, 3, 4}) {
        if (a != b) CHECK(distance(w, a, b) == 2 * distance(w1, a, b));
      }
    }
  }
  SUBCASE("a layer factor only moves paths through that layer") {
    WeightParams p;
    p.layer_factor[static_cast<std::size_t>(Layer::colleague)] = 2.0;
    auto w = apply_weights(stacked, p);
    CHECK(distance(w, 1, 2) == distance(base, 1, 2));
    CHECK(distance(w, 1, 3) == distance(base, 1, 3));
    CHECK(distance(w, 10, 11) == 2 * distance(base, 10, 11));
  }
  SUBCASE("unweighted means unit edges") {
    WeightParams p;
    p.unweighted = true;
    auto w = apply_weights(view, p);
    CHECK(distance(w, 1, 2) == 2.0);
    CHECK(distance(w, 1, 4) == 5.0);
  }
}

TEST_CASE("weights file") {
  auto dir = fixtures::scratch("weights_file");
  {
    std::ofstream out(dir / "w.ini");
    out << "[weights]\nfamily = 2\nlog_base = ten\nfactor_colleague = 0.5\nuniform_container = 0.25\n";
  }
  auto p = load_weight_params(dir / "w.ini");
  CHECK(p.family == 2.0);
  CHECK(p.log_base == LogBase::ten);
  CHECK(p.layer_factor[static_cast<std::size_t>(Layer::colleague)] == 0.5);
  CHECK(p.uniform_container == 0.25);
  {
    std::ofstream out(dir / "bad.ini");
    out << "[weights]\nfamilly = 2\n";
  }
  CHECK_THROWS_AS(load_weight_params(dir / "bad.ini"), UsageError);
}
