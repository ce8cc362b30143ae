#include "focinet/weights.hpp"

#include <cmath>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "focinet/errors.hpp"

namespace focinet {

void WeightParams::check() const {
  for (double w : {family, person_household, household_address, address_address}) {
    if (!(w > 0.0) || !std::isfinite(w)) throw UsageError("edge weights must be positive");
  }
  for (double f : layer_factor) {
    if (!(f > 0.0) || !std::isfinite(f)) throw UsageError("layer factors must be positive");
  }
  if (uniform_container && !(*uniform_container > 0.0)) throw UsageError("uniform_container must be positive");
  if (!(k >= 3.0)) throw UsageError("k must be at least 3");
}

WeightParams load_weight_params(const std::filesystem::path& file) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(file.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError("cannot read weights: " + std::string(e.what()));
  }
  WeightParams p;
  auto section = tree.get_child_optional("weights");
  if (!section) throw UsageError("weights file has no [weights] section");
  for (const auto& [key, node] : tree) {
    if (key != "weights") throw UsageError("unknown section [" + key + "] in weights file");
  }
  for (const auto& [key, node] : *section) {
    const std::string value = node.data();
    auto number = [&] {
      try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw UsageError("bad value for weights." + key + ": '" + value + "'");
      }
    };
    if (key == "family") {
      p.family = number();
    } else if (key == "person_household") {
      p.person_household = number();
    } else if (key == "household_address") {
      p.household_address = number();
    } else if (key == "address_address") {
      p.address_address = number();
    } else if (key == "k") {
      p.k = number();
    } else if (key == "gamma") {
      p.gamma = number();
    } else if (key == "log_base") {
      if (value == "natural") {
        p.log_base = LogBase::natural;
      } else if (value == "ten") {
        p.log_base = LogBase::ten;
      } else {
        throw UsageError("log_base must be natural or ten");
      }
    } else if (key == "uniform_container") {
      p.uniform_container = number();
    } else if (key == "unweighted") {
      if (value != "true" && value != "false") throw UsageError("unweighted must be true or false");
      p.unweighted = value == "true";
    } else if (key.starts_with("factor_")) {
      auto layer = parse_layer(std::string_view(key).substr(7));
      if (!layer) throw UsageError("unknown layer in weights." + key);
      p.layer_factor[static_cast<std::size_t>(*layer)] = number();
    } else {
      throw UsageError("unknown key weights." + key);
    }
  }
  p.check();
  return p;
}

double kregular_distance(double n, const WeightParams& params) {
  if (!(n >= 2.0)) throw UsageError("k-regular distance needs n >= 2");
  auto lg = [&](double x) { return params.log_base == LogBase::ten ? std::log10(x) : std::log(x); };
  const double k = params.k;
  double d = (lg(n) - params.gamma) / lg(k - 1.0) + 0.5 + lg(1.0 - 2.0 / k) / lg(k - 1.0);
  return std::max(1.0, d);
}

double container_edge_weight(Layer layer, std::size_t size, const WeightParams& params) {
  switch (layer) {
    case Layer::household:
      return params.person_household;
    case Layer::colleague:
    case Layer::classmate:
      if (params.uniform_container) return *params.uniform_container;
      return (size < 2 ? 1.0 : kregular_distance(static_cast<double>(size), params)) / 2.0;
    default:
      throw UsageError("layer " + std::string(layer_name(layer)) + " has no container nodes");
  }
}

Graph apply_weights(const Graph& g, const WeightParams& params) {
  params.check();
  if (g.kind() != ViewKind::bipartite) throw UsageError("weights apply to bipartite views");
  auto factor = [&](Layer l) { return params.layer_factor[static_cast<std::size_t>(l)]; };
  std::vector<std::size_t> size(g.node_count(), 0);
  for (std::uint32_t i = 0; i < g.node_count(); ++i) {
    if (g.node(i).is_person()) continue;
    for (auto [q, e] : g.adjacent(i)) size[i] += g.node(q).is_person() ? 1 : 0;
  }
  std::vector<double> w(g.edge_count());
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    if (params.unweighted) {
      w[e] = 1.0;
      continue;
    }
    auto [a, b] = g.endpoints(e);
    NodeId na = g.node(a);
    NodeId nb = g.node(b);
    // Nodes are sorted by tag, so a person endpoint is always `a`.
    if (na.is_person() && nb.is_person()) {
      w[e] = params.family * factor(Layer::family);
    } else if (na.is_person()) {
      switch (nb.tag()) {
        case NodeTag::household:
          w[e] = params.person_household * factor(Layer::household);
          break;
        case NodeTag::workplace:
          w[e] = container_edge_weight(Layer::colleague, size[b], params) * factor(Layer::colleague);
          break;
        case NodeTag::school_class:
          w[e] = container_edge_weight(Layer::classmate, size[b], params) * factor(Layer::classmate);
          break;
        default:
          throw DataError("person linked directly to " + nb.to_string());
      }
    } else if (na.tag() == NodeTag::household && nb.tag() == NodeTag::address) {
      w[e] = params.household_address * factor(Layer::neighborhood);
    } else if (na.tag() == NodeTag::address && nb.tag() == NodeTag::address) {
      w[e] = params.address_address * factor(Layer::neighborhood);
    } else {
      throw DataError("unexpected edge " + na.to_string() + " - " + nb.to_string());
    }
  }
  return g.with_weights(std::move(w));
}

Graph unit_weights(const Graph& g) { return g.with_weights(std::vector<double>(g.edge_count(), 1.0)); }

}  // namespace focinet
