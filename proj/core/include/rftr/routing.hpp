#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "rftr/ids.hpp"
#include "rftr/topology.hpp"

namespace rftr {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

struct CostParams {
  double load_threshold = 0.3;

  // Throws kRange unless 0 < load_threshold < 1.
  void validate() const;

  bool operator==(const CostParams&) const = default;
};

// Piecewise link cost over the load index LI (fraction of free channels):
//   1 - LI   if LI > LT
//   1 + LI   if 0 < LI <= LT
//   inf      if LI == 0
double link_cost(double load_index, const CostParams& params);

enum class ConversionMode : std::uint8_t { kNone, kFull };
enum class RouterKind : std::uint8_t { kRftr, kBaseline };
enum class PathRole : std::uint8_t { kPrimary, kBackup };

const char* to_string(RouterKind kind);
const char* to_string(ConversionMode mode);

// A loop-free walk; links[k] joins nodes[k] and nodes[k + 1].
struct Path {
  std::vector<NodeId> nodes;
  std::vector<LinkId> links;

  std::size_t hops() const { return links.size(); }
  bool empty() const { return links.empty(); }
  Direction direction(const Topology& topo, std::size_t hop) const {
    return topo.link(links[hop]).direction_from(nodes[hop]);
  }
  bool uses(LinkId l) const;
  double propagation_delay(const Topology& topo) const;

  bool operator==(const Path&) const = default;
};

// Fewer hops first, then lexicographically smaller node sequence.
bool hop_order_less(const Path& x, const Path& y);

struct CostedPath {
  Path path;
  double cost = 0.0;
};

using LinkCostFn = std::function<double(LinkId, Direction)>;

struct SearchExclusions {
  std::vector<bool> links;  // indexed by LinkId; empty means none banned
  std::vector<bool> nodes;  // indexed by NodeId; empty means none banned
};

// Label-setting shortest path over a total order on paths: lower summed
// cost, then fewer hops, then lexicographically smaller node sequence. Links
// whose cost is infinite are never traversed. nullopt when dst is unreachable.
std::optional<CostedPath> least_cost_path(const Topology& topo, NodeId src,
                                          NodeId dst, const LinkCostFn& cost,
                                          const SearchExclusions* exclude = nullptr);

// Least-cost path under the load-balancing cost evaluated on the current
// channel state. nullopt means the demand is blocked. Throws kNoSuchNode.
std::optional<CostedPath> compute_primary(const Topology& topo, NodeId src,
                                          NodeId dst, const CostParams& params);

// Baseline: unit cost per usable link (saturated or down links are infinite).
std::optional<CostedPath> compute_shortest_hop(const Topology& topo, NodeId src,
                                               NodeId dst);

// First-fit assignment. Without conversion every hop gets the lowest index
// free on all hops; with full conversion each hop takes its own lowest free
// index. nullopt when no assignment exists. Throws kLinkDown if a hop is down.
std::optional<std::vector<Wavelength>> assign_wavelength(const Topology& topo,
                                                         const Path& path,
                                                         ConversionMode mode);

std::uint32_t wavelength_changes(const std::vector<Wavelength>& wavelengths);

struct Lightpath {
  LightpathId id;
  Path path;
  std::vector<Wavelength> wavelengths;
  PathRole role = PathRole::kPrimary;

  bool operator==(const Lightpath&) const = default;
};

// Sum of hop delays plus one conversion time per wavelength change.
double lightpath_delay(const Topology& topo, const Lightpath& lp,
                       double conversion_time);

struct RouteResult {
  std::optional<Lightpath> lightpath;  // nullopt when blocked
  double total_cost = kInfiniteCost;
  double setup_delay = 0.0;

  bool blocked() const { return !lightpath.has_value(); }
};

// Occupies one channel per hop for an already chosen path, all or nothing.
// nullopt (and no state change) when a hop is down or no wavelength fits.
std::optional<Lightpath> establish_on_path(Topology& topo, const Path& path,
                                           ConversionMode mode, LightpathId id,
                                           PathRole role);

void release_lightpath(Topology& topo, const Lightpath& lp);

// Everything needed to route a demand; RFTR and the baseline share all of it
// except the link cost.
struct Router {
  RouterKind kind = RouterKind::kRftr;
  CostParams cost;
  ConversionMode mode = ConversionMode::kNone;
  double conversion_time = 0.024;

  std::optional<CostedPath> compute(const Topology& topo, NodeId src,
                                    NodeId dst) const;

  // Computes the least-cost path, assigns wavelengths, and occupies channels
  // atomically. A blocked result leaves the topology untouched.
  RouteResult establish(Topology& topo, NodeId src, NodeId dst,
                        LightpathId id) const;

  bool operator==(const Router&) const = default;
};

inline RouteResult establish_primary(Topology& topo, NodeId src, NodeId dst,
                                     const CostParams& params, ConversionMode mode,
                                     LightpathId id, double conversion_time = 0.024) {
  return Router{RouterKind::kRftr, params, mode, conversion_time}.establish(
      topo, src, dst, id);
}

}  // namespace rftr
