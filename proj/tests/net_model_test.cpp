#include <gtest/gtest.h>

#include <random>

#include "rftr/error.hpp"
#include "rftr/topology.hpp"

namespace rftr {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected rftr::Error";
  return ErrorCode::kIo;
}

TEST(TopologyParse, SmallestNetwork) {
  Topology t = parse_topology("nodes 2\nlink 0 1 10 8\n");
  EXPECT_EQ(t.node_count(), 2u);
  ASSERT_EQ(t.link_count(), 1u);
  EXPECT_DOUBLE_EQ(t.link(LinkId(0)).delay, 0.010);
  EXPECT_EQ(t.link(LinkId(0)).free_count(Direction::kForward), 8u);
  EXPECT_EQ(t.link(LinkId(0)).free_count(Direction::kReverse), 8u);
  EXPECT_TRUE(t.link(LinkId(0)).up);
}

TEST(TopologyParse, CommentsAndWhitespace) {
  Topology t = parse_topology(
      "# header comment\n\n  nodes   3 # trailing\n"
      "link 0 1 10 8\r\n\tlink 1 2 5.5 4\n");
  EXPECT_EQ(t.link_count(), 2u);
  EXPECT_DOUBLE_EQ(t.link(LinkId(1)).delay, 0.0055);
  EXPECT_EQ(t.link(LinkId(1)).channels, 4u);
}

TEST(TopologyParse, ShippedDefaultMatchesBuiltIn) {
  Topology t = load_topology(RFTR_DATA_DIR "/default_8node.topo");
  EXPECT_EQ(t.node_count(), 8u);
  EXPECT_EQ(t.link_count(), 11u);
  for (const Link& lk : t.links()) {
    EXPECT_EQ(lk.channels, 8u);
    EXPECT_DOUBLE_EQ(lk.delay, 0.010);
  }
  EXPECT_EQ(t, default_topology());
  EXPECT_TRUE(t.connected());
}

TEST(TopologyParse, DanglingNodeReference) {
  try {
    parse_topology("nodes 8\nlink 0 9 10 8\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kValidation);
    EXPECT_NE(std::string(e.what()).find("dangling node reference"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(TopologyParse, RejectsSelfLoopAndDuplicate) {
  EXPECT_EQ(code_of([] { parse_topology("nodes 3\nlink 1 1 10 8\n"); }),
            ErrorCode::kValidation);
  EXPECT_EQ(code_of([] { parse_topology("nodes 3\nlink 0 1 10 8\nlink 1 0 10 8\n"); }),
            ErrorCode::kValidation);
  EXPECT_EQ(code_of([] { parse_topology("nodes 3\nlink 0 1 0 8\n"); }),
            ErrorCode::kValidation);
  EXPECT_EQ(code_of([] { parse_topology("nodes 3\nlink 0 1 10 0\n"); }),
            ErrorCode::kValidation);
}

TEST(TopologyParse, SyntaxErrorsCarryLineNumbers) {
  try {
    parse_topology("nodes 3\n\nlink 0 x 10 8\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_EQ(code_of([] { parse_topology("link 0 1 10 8\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_topology(""); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_topology("nodes 2\nnodes 2\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_topology("nodes 2\nedge 0 1\n"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { parse_topology("nodes 2\nlink 0 1 10\n"); }), ErrorCode::kParse);
}

TEST(TopologyParse, FormatRoundTrip) {
  Topology t = default_topology(16, 0.005);
  EXPECT_EQ(parse_topology(format_topology(t)), t);
}

TEST(Topology, AdjacencyListsEachLinkTwice) {
  Topology t = default_topology();
  std::size_t total = 0;
  for (std::uint32_t n = 0; n < t.node_count(); ++n) total += t.incident(NodeId(n)).size();
  EXPECT_EQ(total, 2 * t.link_count());
  EXPECT_TRUE(t.find_link(NodeId(4), NodeId(0)).has_value());
  EXPECT_FALSE(t.find_link(NodeId(3), NodeId(7)).has_value());
}

TEST(LoadIndex, FractionOfFreeChannels) {
  Topology t = parse_topology("nodes 2\nlink 0 1 10 8\n");
  const LinkId l(0);
  EXPECT_EQ(t.load_index(l, Direction::kForward), 1.0);
  for (std::uint32_t w = 0; w < 4; ++w) {
    t.occupy(l, Direction::kForward, Wavelength(w), LightpathId(w + 1));
  }
  EXPECT_EQ(t.load_index(l, Direction::kForward), 0.5);
  EXPECT_EQ(t.load_index(l, Direction::kReverse), 1.0);
  for (std::uint32_t w = 4; w < 8; ++w) {
    t.occupy(l, Direction::kForward, Wavelength(w), LightpathId(w + 1));
  }
  EXPECT_EQ(t.load_index(l, Direction::kForward), 0.0);
}

TEST(Occupy, DropsLoadIndexByOneChannel) {
  Topology t = parse_topology("nodes 2\nlink 0 1 10 8\n");
  t.occupy(LinkId(0), Direction::kForward, Wavelength(0), LightpathId(7));
  EXPECT_EQ(t.load_index(LinkId(0), Direction::kForward), 0.875);
  EXPECT_EQ(t.owner(LinkId(0), Direction::kForward, Wavelength(0)), LightpathId(7));
}

TEST(Occupy, ErrorPaths) {
  Topology t = parse_topology("nodes 2\nlink 0 1 10 8\n");
  t.occupy(LinkId(0), Direction::kForward, Wavelength(0), LightpathId(1));
  EXPECT_EQ(code_of([&] {
              t.occupy(LinkId(0), Direction::kForward, Wavelength(0), LightpathId(2));
            }),
            ErrorCode::kChannelBusy);
  EXPECT_EQ(code_of([&] {
              t.occupy(LinkId(0), Direction::kForward, Wavelength(8), LightpathId(2));
            }),
            ErrorCode::kRange);
  t.set_link_state(LinkId(0), false);
  EXPECT_EQ(code_of([&] {
              t.occupy(LinkId(0), Direction::kForward, Wavelength(1), LightpathId(2));
            }),
            ErrorCode::kLinkDown);
}

TEST(Release, RestoresPriorState) {
  Topology t = default_topology();
  const Topology before = t;
  t.occupy(LinkId(3), Direction::kReverse, Wavelength(5), LightpathId(9));
  EXPECT_NE(t, before);
  t.release(LinkId(3), Direction::kReverse, Wavelength(5), LightpathId(9));
  EXPECT_EQ(t, before);
}

TEST(Release, ErrorPaths) {
  Topology t = default_topology();
  EXPECT_EQ(code_of([&] {
              t.release(LinkId(0), Direction::kForward, Wavelength(0), LightpathId(1));
            }),
            ErrorCode::kAlreadyFree);
  t.occupy(LinkId(0), Direction::kForward, Wavelength(0), LightpathId(1));
  EXPECT_EQ(code_of([&] {
              t.release(LinkId(0), Direction::kForward, Wavelength(0), LightpathId(2));
            }),
            ErrorCode::kNotOwner);
}

TEST(LinkState, FailAndRestore) {
  Topology t = default_topology();
  t.occupy(LinkId(0), Direction::kForward, Wavelength(0), LightpathId(1));
  t.set_link_state(LinkId(0), false);
  EXPECT_FALSE(t.link(LinkId(0)).up);
  EXPECT_EQ(t.load_index(LinkId(0), Direction::kForward), 0.0);
  EXPECT_EQ(t.load_index(LinkId(0), Direction::kReverse), 0.0);

  const Topology failed = t;
  t.set_link_state(LinkId(0), false);
  EXPECT_EQ(t, failed);

  t.set_link_state(LinkId(0), true);
  EXPECT_TRUE(t.link(LinkId(0)).up);
  EXPECT_EQ(t.owner(LinkId(0), Direction::kForward, Wavelength(0)), LightpathId(1));
  EXPECT_EQ(t.load_index(LinkId(0), Direction::kForward), 0.875);
}

TEST(Utilization, CountsDirectedChannelsOnUpLinks) {
  Topology t(9);
  for (std::uint32_t i = 0; i < 8; ++i) t.add_link(NodeId(i), NodeId(i + 1), 0.01, 8);
  EXPECT_EQ(t.utilization(), 0.0);
  // 16 channels per travel direction across 8 links of 8 channels.
  for (std::uint32_t i = 0; i < 8; ++i) {
    for (std::uint32_t w = 0; w < 2; ++w) {
      t.occupy(LinkId(i), Direction::kForward, Wavelength(w), LightpathId(100 + i * 2 + w));
      t.occupy(LinkId(i), Direction::kReverse, Wavelength(w), LightpathId(200 + i * 2 + w));
    }
  }
  EXPECT_EQ(t.utilization(), 0.25);
  t.set_link_state(LinkId(0), false);
  EXPECT_EQ(t.utilization(), 28.0 / 112.0);
}

// Random occupy/release interleavings: exclusivity, conservation, range.
TEST(NetModelProperty, RandomInterleavings) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    Topology t = parse_topology("nodes 2\nlink 0 1 10 8\n");
    const LinkId l(0);
    std::vector<std::optional<std::uint64_t>> shadow(8);
    int occupies = 0, releases = 0;
    for (int op = 0; op < 100; ++op) {
      std::uint32_t w = std::uniform_int_distribution<std::uint32_t>(0, 7)(rng);
      std::uint64_t owner = std::uniform_int_distribution<std::uint64_t>(1, 4)(rng);
      if (std::bernoulli_distribution(0.5)(rng)) {
        try {
          t.occupy(l, Direction::kForward, Wavelength(w), LightpathId(owner));
          ASSERT_FALSE(shadow[w].has_value());
          shadow[w] = owner;
          ++occupies;
        } catch (const Error& e) {
          ASSERT_EQ(e.code(), ErrorCode::kChannelBusy);
          ASSERT_TRUE(shadow[w].has_value());
        }
      } else {
        try {
          t.release(l, Direction::kForward, Wavelength(w), LightpathId(owner));
          ASSERT_EQ(shadow[w], owner);
          shadow[w].reset();
          ++releases;
        } catch (const Error& e) {
          ASSERT_NE(shadow[w], std::optional<std::uint64_t>(owner));
        }
      }
      const double li = t.load_index(l, Direction::kForward);
      ASSERT_GE(li, 0.0);
      ASSERT_LE(li, 1.0);
      ASSERT_EQ(t.link(l).free_count(Direction::kForward),
                8u - static_cast<std::uint32_t>(occupies) + static_cast<std::uint32_t>(releases));
      ASSERT_EQ(t.link(l).free_count(Direction::kForward) +
                    t.link(l).occupied_count(Direction::kForward),
                8u);
    }
  }
}

}  // namespace
}  // namespace rftr
