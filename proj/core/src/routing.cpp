#include "rftr/routing.hpp"

#include <algorithm>
#include <cmath>

#include "rftr/error.hpp"

namespace rftr {

void CostParams::validate() const {
  if (!(load_threshold > 0.0 && load_threshold < 1.0)) {
    throw Error(ErrorCode::kRange, "load_threshold must lie in (0, 1), got " +
                                       std::to_string(load_threshold));
  }
}

double link_cost(double load_index, const CostParams& params) {
  const double lt = params.load_threshold;
  if (load_index > lt) return 1.0 - load_index;
  if (load_index > 0.0 && load_index <= lt) return 1.0 + load_index;
  return kInfiniteCost;
}

const char* to_string(RouterKind kind) {
  return kind == RouterKind::kRftr ? "rftr" : "baseline";
}

const char* to_string(ConversionMode mode) {
  return mode == ConversionMode::kNone ? "none" : "full";
}

bool Path::uses(LinkId l) const {
  return std::find(links.begin(), links.end(), l) != links.end();
}

double Path::propagation_delay(const Topology& topo) const {
  double d = 0.0;
  for (LinkId l : links) d += topo.link(l).delay;
  return d;
}

bool hop_order_less(const Path& x, const Path& y) {
  if (x.hops() != y.hops()) return x.hops() < y.hops();
  return x.nodes < y.nodes;
}

namespace {

struct Label {
  double cost = kInfiniteCost;
  std::vector<NodeId> nodes;
  std::vector<LinkId> links;
  bool settled = false;

  bool reached() const { return !nodes.empty(); }
};

bool better(double cost, const std::vector<NodeId>& nodes, const Label& than) {
  if (!than.reached()) return true;
  if (cost != than.cost) return cost < than.cost;
  if (nodes.size() != than.nodes.size()) return nodes.size() < than.nodes.size();
  return nodes < than.nodes;
}

}  // namespace

std::optional<CostedPath> least_cost_path(const Topology& topo, NodeId src,
                                          NodeId dst, const LinkCostFn& cost,
                                          const SearchExclusions* exclude) {
  if (!topo.has_node(src)) {
    throw Error(ErrorCode::kNoSuchNode, "no such node " + std::to_string(src.value));
  }
  if (!topo.has_node(dst)) {
    throw Error(ErrorCode::kNoSuchNode, "no such node " + std::to_string(dst.value));
  }
  auto link_banned = [&](LinkId l) {
    return exclude && !exclude->links.empty() && exclude->links[l.value];
  };
  auto node_banned = [&](NodeId n) {
    return exclude && !exclude->nodes.empty() && exclude->nodes[n.value];
  };
  if (src == dst || node_banned(src) || node_banned(dst)) return std::nullopt;

  const std::uint32_t n = topo.node_count();
  std::vector<Label> labels(n);
  labels[src.value].cost = 0.0;
  labels[src.value].nodes = {src};

  for (;;) {
    // O(V^2) selection keeps the tie-break comparison in one place.
    std::optional<std::uint32_t> pick;
    for (std::uint32_t v = 0; v < n; ++v) {
      const Label& lv = labels[v];
      if (lv.settled || !lv.reached()) continue;
      if (!pick || better(lv.cost, lv.nodes, labels[*pick])) pick = v;
    }
    if (!pick) return std::nullopt;
    Label& cur = labels[*pick];
    cur.settled = true;
    if (NodeId(*pick) == dst) {
      return CostedPath{Path{cur.nodes, cur.links}, cur.cost};
    }
    for (LinkId l : topo.incident(NodeId(*pick))) {
      if (link_banned(l)) continue;
      const Link& lk = topo.link(l);
      NodeId next = lk.other(NodeId(*pick));
      if (node_banned(next)) continue;
      Label& nl = labels[next.value];
      if (nl.settled) continue;
      double c = cost(l, lk.direction_from(NodeId(*pick)));
      if (std::isinf(c)) continue;
      double total = cur.cost + c;
      std::vector<NodeId> nodes = cur.nodes;
      nodes.push_back(next);
      if (better(total, nodes, nl)) {
        nl.cost = total;
        nl.nodes = std::move(nodes);
        nl.links = cur.links;
        nl.links.push_back(l);
      }
    }
  }
}

std::optional<CostedPath> compute_primary(const Topology& topo, NodeId src,
                                          NodeId dst, const CostParams& params) {
  return least_cost_path(topo, src, dst, [&](LinkId l, Direction d) {
    return link_cost(topo.load_index(l, d), params);
  });
}

std::optional<CostedPath> compute_shortest_hop(const Topology& topo, NodeId src,
                                               NodeId dst) {
  return least_cost_path(topo, src, dst, [&](LinkId l, Direction d) {
    return topo.load_index(l, d) > 0.0 ? 1.0 : kInfiniteCost;
  });
}

std::optional<std::vector<Wavelength>> assign_wavelength(const Topology& topo,
                                                         const Path& path,
                                                         ConversionMode mode) {
  for (LinkId l : path.links) {
    if (!topo.link(l).up) {
      throw Error(ErrorCode::kLinkDown,
                  "link " + std::to_string(l.value) + " is down");
    }
  }
  const std::size_t hops = path.hops();
  std::vector<Wavelength> out;
  out.reserve(hops);
  if (mode == ConversionMode::kFull) {
    for (std::size_t k = 0; k < hops; ++k) {
      const Link& lk = topo.link(path.links[k]);
      const auto& slots = lk.occupancy[static_cast<int>(path.direction(topo, k))];
      auto it = std::find(slots.begin(), slots.end(), std::nullopt);
      if (it == slots.end()) return std::nullopt;
      out.emplace_back(static_cast<std::uint32_t>(it - slots.begin()));
    }
    return out;
  }
  std::uint32_t common = std::numeric_limits<std::uint32_t>::max();
  for (LinkId l : path.links) common = std::min(common, topo.link(l).channels);
  for (std::uint32_t w = 0; w < common; ++w) {
    bool fits = true;
    for (std::size_t k = 0; k < hops && fits; ++k) {
      fits = topo.is_free(path.links[k], path.direction(topo, k), Wavelength(w));
    }
    if (fits) {
      out.assign(hops, Wavelength(w));
      return out;
    }
  }
  return std::nullopt;
}

std::uint32_t wavelength_changes(const std::vector<Wavelength>& wavelengths) {
  std::uint32_t changes = 0;
  for (std::size_t k = 1; k < wavelengths.size(); ++k) {
    if (wavelengths[k] != wavelengths[k - 1]) ++changes;
  }
  return changes;
}

double lightpath_delay(const Topology& topo, const Lightpath& lp,
                       double conversion_time) {
  return lp.path.propagation_delay(topo) +
         conversion_time * wavelength_changes(lp.wavelengths);
}

std::optional<Lightpath> establish_on_path(Topology& topo, const Path& path,
                                           ConversionMode mode, LightpathId id,
                                           PathRole role) {
  for (LinkId l : path.links) {
    if (!topo.link(l).up) return std::nullopt;
  }
  auto wavelengths = assign_wavelength(topo, path, mode);
  if (!wavelengths) return std::nullopt;
  for (std::size_t k = 0; k < path.hops(); ++k) {
    topo.occupy(path.links[k], path.direction(topo, k), (*wavelengths)[k], id);
  }
  return Lightpath{id, path, std::move(*wavelengths), role};
}

void release_lightpath(Topology& topo, const Lightpath& lp) {
  for (std::size_t k = 0; k < lp.path.hops(); ++k) {
    topo.release(lp.path.links[k], lp.path.direction(topo, k), lp.wavelengths[k],
                 lp.id);
  }
}

std::optional<CostedPath> Router::compute(const Topology& topo, NodeId src,
                                          NodeId dst) const {
  return kind == RouterKind::kRftr ? compute_primary(topo, src, dst, cost)
                                   : compute_shortest_hop(topo, src, dst);
}

RouteResult Router::establish(Topology& topo, NodeId src, NodeId dst,
                              LightpathId id) const {
  RouteResult result;
  auto best = compute(topo, src, dst);
  if (!best) return result;
  result.total_cost = best->cost;
  result.lightpath = establish_on_path(topo, best->path, mode, id, PathRole::kPrimary);
  if (result.lightpath) {
    result.setup_delay = lightpath_delay(topo, *result.lightpath, conversion_time);
  }
  return result;
}

}  // namespace rftr
