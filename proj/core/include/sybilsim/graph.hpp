#pragma once

#include "sybilsim/node.hpp"
#include "sybilsim/rng.hpp"
#include "sybilsim/types.hpp"

#include <deque>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sybilsim::inline SYBILSIM_ABI
{

using Edge = std::pair<NodeId, NodeId>;

/// The live trust graph: typed vertices and undirected simple edges.
///
/// Adjacency lists are kept sorted so every traversal order is a pure
/// function of the node ids. The class enforces simplicity (no loops, no
/// parallel edges) but deliberately accepts honest-sybil edges so that
/// loaded graphs can be validated; see checkGraphInvariants.
class CommunityGraph
{
  public:
    void addNode(NodeId id, NodeType type);
    /// Drops the node and all incident edges. Returns false if absent.
    bool removeNode(NodeId id);

    /// Returns false for an existing edge. Throws on loops or unknown nodes.
    bool addEdge(NodeId a, NodeId b);
    bool removeEdge(NodeId a, NodeId b);
    bool hasEdge(NodeId a, NodeId b) const;

    bool
    contains(NodeId id) const
    {
        return vertices_.contains(id);
    }
    NodeType typeOf(NodeId id) const;
    std::span<NodeId const> neighbors(NodeId id) const;
    std::size_t degree(NodeId id) const;

    std::size_t
    nodeCount() const
    {
        return vertices_.size();
    }
    std::size_t edgeCount() const;

    /// Sorted ascending.
    std::vector<NodeId> nodes() const;
    /// Each edge once as (smaller, larger), sorted.
    std::vector<Edge> edges() const;
    TypeCounts typeCounts() const;

    bool isConnected() const;

    bool operator==(CommunityGraph const&) const = default;

  private:
    struct Vertex
    {
        NodeType type;
        std::vector<NodeId> adj;

        bool operator==(Vertex const&) const = default;
    };
    std::map<NodeId, Vertex> vertices_;

    Vertex& at(NodeId id);
    Vertex const& at(NodeId id) const;
};

/// Append-only per-round adjacency snapshots (compressed rows).
///
/// Snapshots live in a deque so references handed out for sealed rounds stay
/// valid while later rounds are appended.
class HistoryStore
{
  public:
    /// Records the graph as the snapshot for round t; t must equal
    /// roundCount().
    void seal(Round t, CommunityGraph const& g);

    Round
    roundCount() const
    {
        return static_cast<Round>(rounds_.size());
    }
    bool contains(NodeId v, Round t) const;
    /// Throws QueryError for an unknown round or a node absent at t.
    std::span<NodeId const> neighborsAt(NodeId v, Round t) const;
    /// Members of G_t, sorted.
    std::span<NodeId const> membersAt(Round t) const;

  private:
    struct Snapshot
    {
        std::vector<NodeId> ids;
        std::vector<std::uint32_t> offsets;
        std::vector<NodeId> adj;
    };
    std::deque<Snapshot> rounds_;

    Snapshot const& round(Round t) const;
};

/// Nodes that currently participate (alive, unexposed) and are reachable
/// from u in G_{t2} through a path whose interior nodes are all currently
/// exposed. u itself is excluded. Result is sorted.
///
/// Dead unexposed nodes are neither endpoints nor passable intermediates.
std::vector<NodeId> conditionalBoundary(HistoryStore const& history,
                                        NodeTable const& status, NodeId u,
                                        Round t2);

/// Same query on the live graph (used by the static protocol).
std::vector<NodeId> conditionalBoundary(CommunityGraph const& g,
                                        NodeTable const& status, NodeId u);

inline constexpr std::size_t kExactExpansionCap = 16;

struct ExpansionResult
{
    Amount phi{};
    /// phi = boundary / size for the minimising subset.
    std::uint64_t boundary = 0;
    std::uint64_t size = 1;
    bool exact = true;
    /// Number of subsets evaluated.
    std::uint64_t subsets = 0;
};

/// Inner boundary vertex expansion by exhaustive subset enumeration.
/// Throws ExpansionCapExceeded above cap nodes and QueryError below 2 nodes.
ExpansionResult vertexExpansion(CommunityGraph const& g,
                                std::size_t cap = kExactExpansionCap);

/// Sampled estimate: minimum over random connected subsets and random
/// arbitrary subsets with |A| <= |V|/2. Every sampled subset is feasible, so
/// the value never lies below the true expansion. Labeled exact = false.
ExpansionResult sampledVertexExpansion(CommunityGraph const& g,
                                       std::uint64_t samples, Rng& rng);

struct GraphCheckOptions
{
    /// When set, every degree must lie in [degree - 1, degree].
    std::optional<std::uint32_t> degree;
    /// When set, type counts must be proportional to sybil:corrupt:honest.
    std::optional<TypeCounts> ratio;
};

struct GraphReport
{
    bool connected = false;
    std::vector<Edge> honestSybilEdges;
    std::size_t minDegree = 0;
    std::size_t maxDegree = 0;
    std::optional<bool> degreeOk;
    TypeCounts counts;
    std::optional<bool> ratioOk;

    bool
    ok() const
    {
        return connected && honestSybilEdges.empty() && degreeOk.value_or(true) &&
               ratioOk.value_or(true);
    }
};

GraphReport checkGraphInvariants(CommunityGraph const& g,
                                 GraphCheckOptions const& opts = {});

std::ostream& operator<<(std::ostream& os, GraphReport const& r);

/// Graph dump: node table lines "id type birth" (type H/C/S), then edge lines
/// "u v". '#' starts a comment. Edge endpoints missing from the node table
/// are added as honest nodes born at round 0.
struct GraphDump
{
    CommunityGraph graph;
    std::map<NodeId, Round> birth;
};

void writeGraphDump(std::ostream& os, CommunityGraph const& g,
                    NodeTable const* nodes = nullptr);
void writeGraphDump(std::filesystem::path const& path, CommunityGraph const& g,
                    NodeTable const* nodes = nullptr);
GraphDump readGraphDump(std::istream& is);
GraphDump readGraphDump(std::filesystem::path const& path);

} // namespace sybilsim::inline SYBILSIM_ABI
