#include "rftr/topology.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "rftr/error.hpp"

namespace rftr {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse error";
    case ErrorCode::kValidation: return "validation error";
    case ErrorCode::kRange: return "range error";
    case ErrorCode::kNoSuchNode: return "no such node";
    case ErrorCode::kChannelBusy: return "channel busy";
    case ErrorCode::kLinkDown: return "link down";
    case ErrorCode::kNotOwner: return "not owner";
    case ErrorCode::kAlreadyFree: return "already free";
    case ErrorCode::kUnknownSequence: return "unknown sequence";
    case ErrorCode::kDuplicateFeedback: return "duplicate feedback";
    case ErrorCode::kUndefinedMetric: return "undefined metric";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

std::uint32_t Link::free_count(Direction d) const {
  const auto& slots = occupancy[static_cast<int>(d)];
  return static_cast<std::uint32_t>(
      std::count(slots.begin(), slots.end(), std::nullopt));
}

Topology::Topology(std::uint32_t node_count)
    : node_count_(node_count), adjacency_(node_count) {}

LinkId Topology::add_link(NodeId a, NodeId b, double delay,
                          std::uint32_t channels) {
  if (!has_node(a) || !has_node(b)) {
    throw Error(ErrorCode::kValidation,
                "dangling node reference: link " + std::to_string(a.value) +
                    "-" + std::to_string(b.value) + " in a " +
                    std::to_string(node_count_) + "-node network");
  }
  if (a == b) {
    throw Error(ErrorCode::kValidation,
                "self-loop on node " + std::to_string(a.value));
  }
  if (find_link(a, b)) {
    throw Error(ErrorCode::kValidation,
                "duplicate link " + std::to_string(a.value) + "-" +
                    std::to_string(b.value));
  }
  if (!(delay > 0.0)) {
    throw Error(ErrorCode::kValidation, "link delay must be positive");
  }
  if (channels == 0) {
    throw Error(ErrorCode::kValidation, "link needs at least one channel");
  }
  Link link;
  link.id = LinkId(static_cast<std::uint32_t>(links_.size()));
  link.a = a;
  link.b = b;
  link.delay = delay;
  link.channels = channels;
  link.occupancy[0].assign(channels, std::nullopt);
  link.occupancy[1].assign(channels, std::nullopt);
  links_.push_back(std::move(link));
  adjacency_[a.value].push_back(links_.back().id);
  adjacency_[b.value].push_back(links_.back().id);
  return links_.back().id;
}

const Link& Topology::link(LinkId l) const {
  if (!has_link(l)) {
    throw Error(ErrorCode::kRange, "unknown link " + std::to_string(l.value));
  }
  return links_[l.value];
}

Link& Topology::mutable_link(LinkId l) {
  if (!has_link(l)) {
    throw Error(ErrorCode::kRange, "unknown link " + std::to_string(l.value));
  }
  return links_[l.value];
}

std::span<const LinkId> Topology::incident(NodeId n) const {
  if (!has_node(n)) {
    throw Error(ErrorCode::kNoSuchNode, "no such node " + std::to_string(n.value));
  }
  return adjacency_[n.value];
}

std::optional<LinkId> Topology::find_link(NodeId a, NodeId b) const {
  if (!has_node(a) || !has_node(b)) return std::nullopt;
  for (LinkId l : adjacency_[a.value]) {
    if (links_[l.value].touches(b) && a != b) return l;
  }
  return std::nullopt;
}

double Topology::load_index(LinkId l, Direction d) const {
  const Link& lk = link(l);
  if (!lk.up) return 0.0;
  return static_cast<double>(lk.free_count(d)) /
         static_cast<double>(lk.channels);
}

void Topology::check_wavelength(const Link& lk, Wavelength w) const {
  if (w.value >= lk.channels) {
    throw Error(ErrorCode::kRange,
                "wavelength " + std::to_string(w.value) + " out of range on link " +
                    std::to_string(lk.id.value));
  }
}

bool Topology::is_free(LinkId l, Direction d, Wavelength w) const {
  const Link& lk = link(l);
  check_wavelength(lk, w);
  return !lk.occupancy[static_cast<int>(d)][w.value].has_value();
}

std::optional<LightpathId> Topology::owner(LinkId l, Direction d,
                                           Wavelength w) const {
  const Link& lk = link(l);
  check_wavelength(lk, w);
  return lk.occupancy[static_cast<int>(d)][w.value];
}

void Topology::occupy(LinkId l, Direction d, Wavelength w, LightpathId owner) {
  Link& lk = mutable_link(l);
  check_wavelength(lk, w);
  if (!lk.up) {
    throw Error(ErrorCode::kLinkDown,
                "link " + std::to_string(l.value) + " is down");
  }
  auto& slot = lk.occupancy[static_cast<int>(d)][w.value];
  if (slot) {
    throw Error(ErrorCode::kChannelBusy,
                "channel " + std::to_string(w.value) + " on link " +
                    std::to_string(l.value) + " is owned by lightpath " +
                    std::to_string(slot->value));
  }
  slot = owner;
}

void Topology::release(LinkId l, Direction d, Wavelength w, LightpathId owner) {
  Link& lk = mutable_link(l);
  check_wavelength(lk, w);
  auto& slot = lk.occupancy[static_cast<int>(d)][w.value];
  if (!slot) {
    throw Error(ErrorCode::kAlreadyFree,
                "channel " + std::to_string(w.value) + " on link " +
                    std::to_string(l.value) + " is already free");
  }
  if (*slot != owner) {
    throw Error(ErrorCode::kNotOwner,
                "lightpath " + std::to_string(owner.value) + " does not own channel " +
                    std::to_string(w.value) + " on link " + std::to_string(l.value));
  }
  slot.reset();
}

void Topology::set_link_state(LinkId l, bool up) { mutable_link(l).up = up; }

std::uint64_t Topology::occupied_channels() const {
  std::uint64_t n = 0;
  for (const Link& lk : links_) {
    n += lk.occupied_count(Direction::kForward) +
         lk.occupied_count(Direction::kReverse);
  }
  return n;
}

double Topology::utilization() const {
  std::uint64_t occupied = 0;
  std::uint64_t total = 0;
  for (const Link& lk : links_) {
    if (!lk.up) continue;
    occupied += lk.occupied_count(Direction::kForward) +
                lk.occupied_count(Direction::kReverse);
    total += 2ull * lk.channels;
  }
  return total == 0 ? 0.0 : static_cast<double>(occupied) / static_cast<double>(total);
}

bool Topology::connected() const {
  if (node_count_ == 0) return true;
  std::vector<bool> seen(node_count_, false);
  std::vector<std::uint32_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    for (LinkId l : adjacency_[n]) {
      std::uint32_t m = links_[l.value].other(NodeId(n)).value;
      if (!seen[m]) {
        seen[m] = true;
        stack.push_back(m);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& msg) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + msg);
}

template <typename T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    parse_fail(line, std::string("bad ") + what + " '" + std::string(tok) + "'");
  }
  return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Topology parse_topology(std::string_view text) {
  std::optional<Topology> topo;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto toks = split_ws(line);
    if (toks.empty()) continue;

    if (toks[0] == "nodes") {
      if (topo) parse_fail(line_no, "duplicate 'nodes' header");
      if (toks.size() != 2) parse_fail(line_no, "expected 'nodes <count>'");
      topo.emplace(parse_number<std::uint32_t>(toks[1], line_no, "node count"));
    } else if (toks[0] == "link") {
      if (!topo) parse_fail(line_no, "'link' before 'nodes' header");
      if (toks.size() != 5) {
        parse_fail(line_no, "expected 'link <a> <b> <delay_ms> <channels>'");
      }
      auto a = parse_number<std::uint32_t>(toks[1], line_no, "node id");
      auto b = parse_number<std::uint32_t>(toks[2], line_no, "node id");
      auto delay_ms = parse_number<double>(toks[3], line_no, "delay");
      auto channels = parse_number<std::uint32_t>(toks[4], line_no, "channel count");
      try {
        topo->add_link(NodeId(a), NodeId(b), delay_ms / 1000.0, channels);
      } catch (const Error& e) {
        throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
      }
    } else {
      parse_fail(line_no, "unknown directive '" + std::string(toks[0]) + "'");
    }
  }
  if (!topo) parse_fail(line_no, "missing 'nodes' header");
  return std::move(*topo);
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open topology file " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_topology(ss.str());
}

std::string format_topology(const Topology& topology) {
  std::ostringstream out;
  out << "nodes " << topology.node_count() << '\n';
  for (const Link& lk : topology.links()) {
    out << "link " << lk.a << ' ' << lk.b << ' ' << lk.delay * 1000.0 << ' '
        << lk.channels << '\n';
  }
  return out.str();
}

Topology default_topology(std::uint32_t channels, double delay) {
  Topology topo(8);
  for (std::uint32_t i = 0; i < 8; ++i) {
    topo.add_link(NodeId(i), NodeId((i + 1) % 8), delay, channels);
  }
  topo.add_link(NodeId(0), NodeId(4), delay, channels);
  topo.add_link(NodeId(1), NodeId(5), delay, channels);
  topo.add_link(NodeId(2), NodeId(6), delay, channels);
  return topo;
}

}  // namespace rftr
