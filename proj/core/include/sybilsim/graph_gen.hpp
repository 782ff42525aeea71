#pragma once

#include "sybilsim/graph.hpp"
#include "sybilsim/rng.hpp"
#include "sybilsim/types.hpp"

#include <functional>
#include <set>
#include <vector>

namespace sybilsim::inline SYBILSIM_ABI
{

struct GenParams
{
    std::uint32_t degree = 6;
    TypeCounts counts{60, 40, 20};
    /// Enforce sybil fraction <= gamma/phi - gamma with gamma = 1/3 and
    /// phi = 2/3, i.e. at most one sybil in six.
    bool ratioCheck = false;
    /// Consecutive picks with an empty candidate set before a restart;
    /// 0 means 64 * node count.
    std::uint64_t stallBudget = 0;
    std::uint32_t restartBudget = 32;
};

/// Throws ConfigError on an unusable parameter set.
void validate(GenParams const& p);

/// Issues a fresh id for a node of the given type. The simulator wires this
/// to its node table; standalone callers can use SequentialIds.
using NodeFactory = std::function<NodeId(NodeType)>;

class SequentialIds
{
  public:
    explicit SequentialIds(std::uint32_t first = 0) : next_(first)
    {
    }
    NodeId
    operator()(NodeType)
    {
        return NodeId{next_++};
    }

  private:
    std::uint32_t next_;
};

/// Randomized near-regular construction.
///
/// Tops the graph up to the configured type counts with fresh nodes, then
/// repeatedly links a random node of degree < d-1 to a random eligible node
/// of degree < d (never honest-sybil, never a duplicate edge), removing an
/// edge whenever both its endpoints reach degree d. Ends when every degree is
/// in [d-1, d]. A stalled or disconnected attempt restarts from the topped-up
/// input; after restartBudget restarts, throws ConstructionError.
CommunityGraph randomGraphGen(CommunityGraph g, GenParams const& p, Rng& rng,
                              NodeFactory const& fresh);

struct TransitionResult
{
    CommunityGraph graph;
    /// Replacement nodes, in creation order.
    std::vector<NodeId> added;
};

/// Removes the given nodes with their edges, adds one fresh node of the same
/// type for each, and repairs degrees with randomGraphGen. Surviving nodes
/// keep their ids; unaffected edges are kept.
TransitionResult transition(CommunityGraph const& g,
                            std::set<NodeId> const& removals,
                            GenParams const& p, Rng& rng,
                            NodeFactory const& fresh);

} // namespace sybilsim::inline SYBILSIM_ABI
