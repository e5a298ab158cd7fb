#include <gtest/gtest.h>

#include <sstream>

#include "gbandit/generators.hpp"
#include "gbandit/graph.hpp"
#include "oracles.hpp"

namespace gbandit {
namespace {

TEST(Graph, RejectsSelfLoopsDuplicatesAndDisconnection) {
    EXPECT_THROW(Graph(2, {{0, 0}}), ValidationError);
    EXPECT_THROW(Graph(2, {{0, 1}, {1, 0}}), ValidationError);
    EXPECT_THROW(Graph(3, {{0, 1}}), ModelError);
    EXPECT_THROW(Graph(2, {{0, 2}}), ValidationError);
    EXPECT_THROW(Graph(0, {}), ValidationError);
    EXPECT_NO_THROW(Graph(1, {}));
}

TEST(Graph, FromAdjacencyKeepsNeighborOrder) {
    auto g = Graph::from_adjacency({{2, 1}, {0}, {0}});
    EXPECT_EQ(g.neighbors(0), (std::vector<Node>{2, 1}));
    EXPECT_EQ(g.edge_count(), 2u);
    EXPECT_THROW(Graph::from_adjacency({{1}, {}}), ValidationError);
    EXPECT_THROW(Graph::from_adjacency({{0}}), ValidationError);
}

TEST(Graph, EdgeLookupIsSymmetric) {
    auto g = line_graph(4);
    EXPECT_TRUE(g.adjacent(1, 2));
    EXPECT_TRUE(g.adjacent(2, 1));
    EXPECT_FALSE(g.adjacent(0, 2));
    EXPECT_EQ(g.edge_index(2, 1), g.edge_index(1, 2));
    EXPECT_THROW(g.require_edge(0, 3), ModelError);
}

TEST(Graph, PathValidation) {
    auto g = line_graph(3);
    EXPECT_NO_THROW(validate_path(g, Path{{0, 1, 2}}));
    EXPECT_NO_THROW(validate_path(g, Path{{1}}));
    EXPECT_THROW(validate_path(g, Path{{0, 2}}), ModelError);
    EXPECT_THROW(validate_path(g, Path{}), ModelError);
    EXPECT_EQ(Path{{1}}.length(), 0u);
}

TEST(Graph, EdgeListRoundTripAndComments) {
    std::istringstream in("# header\n1 2\n\n2 3  # trailing\n3 1\n");
    auto g = read_edge_list(in);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_EQ(g.edge_count(), 3u);
    std::ostringstream out;
    write_edge_list(out, g);
    std::istringstream again(out.str());
    EXPECT_EQ(read_edge_list(again).edges(), g.edges());
}

TEST(Graph, EdgeListErrors) {
    std::istringstream zero("0 1\n");
    EXPECT_THROW(read_edge_list(zero), ValidationError);
    std::istringstream three("1 2 3\n");
    EXPECT_THROW(read_edge_list(three), ValidationError);
    std::istringstream empty("# nothing\n");
    EXPECT_THROW(read_edge_list(empty), ValidationError);
    std::istringstream disconnected("1 2\n3 4\n");
    EXPECT_THROW(read_edge_list(disconnected), ModelError);
}

TEST(Graph, DiameterMatchesFloydWarshall) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto g = erdos_renyi_connected(5 + seed % 20, 0.3, seed);
        EXPECT_EQ(graph_diameter(g), oracle::diameter(g)) << "seed " << seed;
    }
}

TEST(Graph, TreeAndPathPredicates) {
    EXPECT_TRUE(is_path_graph(line_graph(5)));
    EXPECT_TRUE(is_tree(star_graph(5)));
    EXPECT_FALSE(is_path_graph(star_graph(5)));
    EXPECT_FALSE(is_tree(cycle_graph(5)));
}

}  // namespace
}  // namespace gbandit
