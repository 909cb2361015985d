#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace rftr {

template <typename Tag, typename Rep = std::uint32_t>
struct StrongId {
  Rep value{};

  constexpr StrongId() = default;
  constexpr explicit StrongId(Rep v) : value(v) {}

  constexpr auto operator<=>(const StrongId&) const = default;

  friend std::ostream& operator<<(std::ostream& os, StrongId id) {
    return os << id.value;
  }
};

using NodeId = StrongId<struct NodeTag>;
using LinkId = StrongId<struct LinkTag>;
using Wavelength = StrongId<struct WavelengthTag>;
using LightpathId = StrongId<struct LightpathTag, std::uint64_t>;
using ConnectionId = StrongId<struct ConnectionTag, std::uint64_t>;

}  // namespace rftr

template <typename Tag, typename Rep>
struct std::hash<rftr::StrongId<Tag, Rep>> {
  std::size_t operator()(rftr::StrongId<Tag, Rep> id) const noexcept {
    return std::hash<Rep>{}(id.value);
  }
};
