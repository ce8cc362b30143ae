#include "focinet/ids.hpp"

#include <charconv>

#include "focinet/errors.hpp"

namespace focinet {

namespace {

constexpr std::array<std::string_view, 5> kLayerNames{"family", "household", "neighborhood", "colleague",
                                                      "classmate"};
constexpr std::array<std::string_view, 5> kTagNames{"person", "household", "workplace", "class", "address"};

}  // namespace

std::string_view layer_name(Layer layer) { return kLayerNames.at(static_cast<std::size_t>(layer)); }

std::optional<Layer> parse_layer(std::string_view name) {
  for (std::size_t i = 0; i < kLayerNames.size(); ++i) {
    if (kLayerNames[i] == name) return static_cast<Layer>(i);
  }
  return std::nullopt;
}

std::string mask_to_string(LayerMask mask) {
  std::string out;
  for (Layer layer : kAllLayers) {
    if (!has_layer(mask, layer)) continue;
    if (!out.empty()) out += '|';
    out += layer_name(layer);
  }
  return out;
}

LayerMask parse_layer_list(std::string_view list) {
  if (list == "all") return kAllLayersMask;
  LayerMask mask = 0;
  while (!list.empty()) {
    auto comma = list.find_first_of(",|");
    auto item = list.substr(0, comma);
    auto layer = parse_layer(item);
    if (!layer) throw UsageError("unknown layer '" + std::string(item) + "'");
    mask |= layer_bit(*layer);
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return mask;
}

NodeId::NodeId(NodeTag tag, std::uint64_t id) {
  if (id > kIdMask) throw DataError("node id " + std::to_string(id) + " exceeds the 61-bit id range");
  raw_ = (static_cast<std::uint64_t>(tag) << kTagShift) | id;
}

NodeId NodeId::container(Layer layer, ContainerId id) {
  switch (layer) {
    case Layer::household:
      return NodeId(NodeTag::household, id);
    case Layer::colleague:
      return NodeId(NodeTag::workplace, id);
    case Layer::classmate:
      return NodeId(NodeTag::school_class, id);
    default:
      throw DataError("layer '" + std::string(layer_name(layer)) + "' has no container nodes");
  }
}

std::optional<Layer> NodeId::container_layer() const {
  switch (tag()) {
    case NodeTag::household:
      return Layer::household;
    case NodeTag::workplace:
      return Layer::colleague;
    case NodeTag::school_class:
      return Layer::classmate;
    default:
      return std::nullopt;
  }
}

std::string NodeId::to_string() const {
  std::string out(kTagNames.at(static_cast<std::size_t>(tag())));
  out += ':';
  out += std::to_string(id());
  return out;
}

NodeId NodeId::parse(std::string_view text) {
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DataError("malformed node id '" + std::string(text) + "'");
  auto tag_name = text.substr(0, colon);
  auto digits = text.substr(colon + 1);
  std::uint64_t id = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw DataError("malformed node id '" + std::string(text) + "'");
  }
  for (std::size_t i = 0; i < kTagNames.size(); ++i) {
    if (kTagNames[i] == tag_name) return NodeId(static_cast<NodeTag>(i), id);
  }
  throw DataError("unknown node tag '" + std::string(tag_name) + "'");
}

ParseError::ParseError(std::string file, std::size_t line, std::size_t column, const std::string& what)
    : DataError(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      file_(std::move(file)),
      line_(line),
      column_(column) {}

}  // namespace focinet
