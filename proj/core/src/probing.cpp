#include "rftr/probing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rftr/error.hpp"

namespace rftr {

namespace {

struct HopOrder {
  bool operator()(const Path& x, const Path& y) const { return hop_order_less(x, y); }
};

}  // namespace

CandidateSet candidate_paths(const Topology& topo, NodeId src, NodeId dst,
                             const Path& primary, std::size_t k) {
  CandidateSet out{src, dst, {}};
  if (k == 0 || src == dst) return out;

  SearchExclusions base;
  base.links.assign(topo.link_count(), false);
  for (LinkId l : primary.links) base.links[l.value] = true;
  const LinkCostFn unit = [](LinkId, Direction) { return 1.0; };

  auto first = least_cost_path(topo, src, dst, unit, &base);
  if (!first) return out;
  out.paths.push_back(std::move(first->path));

  std::set<Path, HopOrder> pending;
  while (out.paths.size() < k) {
    const Path prev = out.paths.back();
    for (std::size_t spur = 0; spur < prev.hops(); ++spur) {
      SearchExclusions ex = base;
      ex.nodes.assign(topo.node_count(), false);
      for (std::size_t i = 0; i < spur; ++i) ex.nodes[prev.nodes[i].value] = true;
      // Ban the next link of every accepted path that shares this root.
      for (const Path& p : out.paths) {
        if (p.hops() > spur &&
            std::equal(p.nodes.begin(), p.nodes.begin() + spur + 1,
                       prev.nodes.begin())) {
          ex.links[p.links[spur].value] = true;
        }
      }
      auto tail = least_cost_path(topo, prev.nodes[spur], dst, unit, &ex);
      if (!tail) continue;
      Path joined;
      joined.nodes.assign(prev.nodes.begin(), prev.nodes.begin() + spur);
      joined.links.assign(prev.links.begin(), prev.links.begin() + spur);
      joined.nodes.insert(joined.nodes.end(), tail->path.nodes.begin(),
                          tail->path.nodes.end());
      joined.links.insert(joined.links.end(), tail->path.links.begin(),
                          tail->path.links.end());
      if (std::find(out.paths.begin(), out.paths.end(), joined) == out.paths.end()) {
        pending.insert(std::move(joined));
      }
    }
    if (pending.empty()) break;
    out.paths.push_back(*pending.begin());
    pending.erase(pending.begin());
  }
  return out;
}

void ProbePolicy::validate() const {
  if (probes_per_interval == 0) {
    throw Error(ErrorCode::kRange, "probes_per_interval must be positive");
  }
  if (!(update_interval > 0.0)) {
    throw Error(ErrorCode::kRange, "probe_interval must be positive");
  }
  if (!(adaptive_scale >= 0.0)) {
    throw Error(ErrorCode::kRange, "probe_adaptive_scale must be non-negative");
  }
}

std::uint32_t ProbePolicy::effective_count(double arrival_rate) const {
  double scaled = std::floor(static_cast<double>(probes_per_interval) /
                             (1.0 + adaptive_scale * arrival_rate));
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(scaled));
}

ProbeOutcome probe_outcome(const Topology& topo, const Path& path,
                           ConversionMode mode) {
  for (LinkId l : path.links) {
    if (!topo.link(l).up) return ProbeOutcome::kNack;
  }
  return assign_wavelength(topo, path, mode) ? ProbeOutcome::kPack
                                             : ProbeOutcome::kNack;
}

std::uint64_t ProbeWindow::issue() {
  state_.push_back(Slot::kPending);
  return state_.size() - 1;
}

void ProbeWindow::record(std::uint64_t seq, ProbeOutcome outcome) {
  if (!issued(seq)) {
    throw Error(ErrorCode::kUnknownSequence,
                "sequence " + std::to_string(seq) + " was not issued in this window");
  }
  Slot& slot = state_[seq];
  if (slot != Slot::kPending) {
    throw Error(ErrorCode::kDuplicateFeedback,
                "sequence " + std::to_string(seq) + " already has feedback");
  }
  if (outcome == ProbeOutcome::kPack) {
    slot = Slot::kAcked;
    ++acked_;
  } else {
    slot = Slot::kNacked;
    ++nacked_;
  }
}

std::vector<ScheduledProbe> emit_probes(ProbeWindow& window,
                                        const ProbePolicy& policy,
                                        double arrival_rate, double now) {
  const std::uint32_t count = policy.effective_count(arrival_rate);
  const double spacing = policy.update_interval / count;
  std::vector<ScheduledProbe> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    out.push_back({now + spacing * i, window.path_index(), window.epoch(),
                   window.issue()});
  }
  return out;
}

BlockingEstimate blocking_probability(const ProbeWindow& window) {
  const std::uint64_t resolved = window.acked() + window.nacked();
  BlockingEstimate est;
  est.path_index = window.path_index();
  est.sample_size = resolved;
  est.bp = resolved == 0 ? 1.0
                         : static_cast<double>(window.nacked()) /
                               static_cast<double>(resolved);
  return est;
}

std::vector<RankedPath> rank_and_select(std::span<const BlockingEstimate> estimates,
                                        const CandidateSet& candidates,
                                        std::size_t m) {
  std::vector<RankedPath> ranked;
  ranked.reserve(candidates.paths.size());
  for (std::size_t i = 0; i < candidates.paths.size(); ++i) {
    double bp = 1.0;
    for (const BlockingEstimate& e : estimates) {
      if (e.path_index == i) bp = e.bp;
    }
    ranked.push_back({i, candidates.paths[i], bp});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedPath& x, const RankedPath& y) {
                     if (x.bp != y.bp) return x.bp < y.bp;
                     return hop_order_less(x.path, y.path);
                   });
  if (ranked.size() > m) ranked.resize(m);
  return ranked;
}

std::vector<RankedPath> hop_order_ranking(const CandidateSet& candidates,
                                          std::size_t m) {
  return rank_and_select({}, candidates, m);
}

std::optional<Lightpath> reroute(Topology& topo, const Router& router, NodeId src,
                                 NodeId dst, std::span<const RankedPath> backups,
                                 LightpathId id) {
  for (const RankedPath& b : backups) {
    auto lp = establish_on_path(topo, b.path, router.mode, id, PathRole::kBackup);
    if (lp) return lp;
  }
  auto fresh = router.establish(topo, src, dst, id);
  if (fresh.lightpath) fresh.lightpath->role = PathRole::kBackup;
  return fresh.lightpath;
}

}  // namespace rftr
