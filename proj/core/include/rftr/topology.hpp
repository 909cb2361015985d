#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rftr/ids.hpp"

namespace rftr {

// A link joins endpoints a and b. Each travel direction has its own pool of
// `channels` wavelengths, so a lightpath going a->b holds a slot in the
// forward pool and one going b->a holds a slot in the reverse pool.
enum class Direction : std::uint8_t { kForward = 0, kReverse = 1 };

struct Link {
  LinkId id;
  NodeId a;
  NodeId b;
  double delay = 0.0;  // seconds
  std::uint32_t channels = 0;
  bool up = true;
  // occupancy[dir][w] holds the owning lightpath, or nullopt when free.
  std::vector<std::optional<LightpathId>> occupancy[2];

  NodeId other(NodeId n) const { return n == a ? b : a; }
  bool touches(NodeId n) const { return n == a || n == b; }
  Direction direction_from(NodeId from) const {
    return from == a ? Direction::kForward : Direction::kReverse;
  }

  std::uint32_t free_count(Direction d) const;
  std::uint32_t occupied_count(Direction d) const {
    return channels - free_count(d);
  }

  bool operator==(const Link&) const = default;
};

class Topology {
 public:
  Topology() = default;
  explicit Topology(std::uint32_t node_count);

  // Adds a link with all channels free. Throws kValidation on self-loops,
  // duplicate node pairs, dangling node references, non-positive delay or
  // zero channels.
  LinkId add_link(NodeId a, NodeId b, double delay, std::uint32_t channels);

  std::uint32_t node_count() const { return node_count_; }
  std::size_t link_count() const { return links_.size(); }
  bool has_node(NodeId n) const { return n.value < node_count_; }
  bool has_link(LinkId l) const { return l.value < links_.size(); }

  const Link& link(LinkId l) const;
  std::span<const Link> links() const { return links_; }
  std::span<const LinkId> incident(NodeId n) const;
  std::optional<LinkId> find_link(NodeId a, NodeId b) const;

  // Fraction of free channels C_f / C_n in one travel direction. A down link
  // reports 0 so the routing cost treats it as unusable.
  double load_index(LinkId l, Direction d) const;

  bool is_free(LinkId l, Direction d, Wavelength w) const;
  std::optional<LightpathId> owner(LinkId l, Direction d, Wavelength w) const;

  // Throws kLinkDown, kChannelBusy, or kRange for an out-of-range wavelength.
  void occupy(LinkId l, Direction d, Wavelength w, LightpathId owner);
  // Throws kAlreadyFree or kNotOwner. Works on down links, which is how the
  // simulator tears down lightpaths over a failed link.
  void release(LinkId l, Direction d, Wavelength w, LightpathId owner);

  // Idempotent; occupancy is left untouched.
  void set_link_state(LinkId l, bool up);

  // Occupied / total directed channels over links that are up; 0 when none are.
  double utilization() const;
  std::uint64_t occupied_channels() const;

  bool connected() const;

  bool operator==(const Topology&) const = default;

 private:
  Link& mutable_link(LinkId l);
  void check_wavelength(const Link& link, Wavelength w) const;

  std::uint32_t node_count_ = 0;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> adjacency_;
};

// Parses the line-oriented topology format:
//
//   # comment
//   nodes <count>
//   link <a> <b> <delay_ms> <channels>
//
// Tokens are whitespace-separated, node ids 0-based, `nodes` must appear
// exactly once and before any link. Errors carry the 1-based line number.
Topology parse_topology(std::string_view text);
Topology load_topology(const std::filesystem::path& path);
std::string format_topology(const Topology& topology);

// The 8-node stand-in mesh: ring i <-> i+1 (mod 8) plus chords 0-4, 1-5, 2-6.
Topology default_topology(std::uint32_t channels = 8, double delay = 0.010);

}  // namespace rftr
