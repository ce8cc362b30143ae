#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace focinet {

using PersonId = std::uint64_t;
using AddressId = std::uint64_t;
using HouseholdId = std::uint64_t;
using WorkplaceId = std::uint64_t;
using ContainerId = std::uint64_t;

enum class Layer : std::uint8_t { family = 0, household = 1, neighborhood = 2, colleague = 3, classmate = 4 };

inline constexpr std::array<Layer, 5> kAllLayers{Layer::family, Layer::household, Layer::neighborhood,
                                                 Layer::colleague, Layer::classmate};

std::string_view layer_name(Layer layer);
std::optional<Layer> parse_layer(std::string_view name);

/// Bit set over layers; bit i is Layer(i).
using LayerMask = std::uint8_t;

constexpr LayerMask layer_bit(Layer layer) { return static_cast<LayerMask>(1u << static_cast<unsigned>(layer)); }
constexpr LayerMask kAllLayersMask = 0x1f;
constexpr bool has_layer(LayerMask mask, Layer layer) { return (mask & layer_bit(layer)) != 0; }

std::string mask_to_string(LayerMask mask);  // "household|neighborhood"
LayerMask parse_layer_list(std::string_view list);  // comma separated, "all" accepted

/// Node tag. Containers carry the layer they belong to; addresses are shared
/// by the neighborhood layer only.
enum class NodeTag : std::uint8_t { person = 0, household = 1, workplace = 2, school_class = 3, address = 4 };

/// Tagged node id packed into 64 bits: 3 tag bits on top, 61 id bits below.
/// Ordering sorts persons first, then containers by tag, then by id.
class NodeId {
 public:
  static constexpr unsigned kTagShift = 61;
  static constexpr std::uint64_t kIdMask = (std::uint64_t{1} << kTagShift) - 1;

  constexpr NodeId() = default;

  static NodeId person(PersonId id) { return NodeId(NodeTag::person, id); }
  static NodeId address(AddressId id) { return NodeId(NodeTag::address, id); }
  static NodeId container(Layer layer, ContainerId id);
  static NodeId from_raw(std::uint64_t raw) {
    NodeId n;
    n.raw_ = raw;
    return n;
  }

  constexpr NodeTag tag() const { return static_cast<NodeTag>(raw_ >> kTagShift); }
  constexpr std::uint64_t id() const { return raw_ & kIdMask; }
  constexpr std::uint64_t raw() const { return raw_; }
  constexpr bool is_person() const { return tag() == NodeTag::person; }

  /// Layer owning a container node; nullopt for persons and addresses.
  std::optional<Layer> container_layer() const;

  std::string to_string() const;  // "person:12", "workplace:7", ...
  static NodeId parse(std::string_view text);

  constexpr auto operator<=>(const NodeId&) const = default;

 private:
  NodeId(NodeTag tag, std::uint64_t id);
  std::uint64_t raw_ = 0;
};

/// Years anchor-span .. anchor, inclusive.
struct TimeSpan {
  int anchor_year = 0;
  int span = 0;

  constexpr int first_year() const { return anchor_year - span; }
  constexpr bool contains(int year) const { return year >= first_year() && year <= anchor_year; }
  constexpr auto operator<=>(const TimeSpan&) const = default;
};

}  // namespace focinet
