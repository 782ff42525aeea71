#include "sybilsim/graph_gen.hpp"

#include "sybilsim/errors.hpp"

#include <algorithm>
#include <string>

namespace sybilsim::inline SYBILSIM_ABI
{

void
validate(GenParams const& p)
{
    auto const& c = p.counts;
    if (p.degree < 2)
        throw ConfigError("degree must be at least 2");
    if (c.total() < 2)
        throw ConfigError("population must have at least 2 nodes");
    if (p.degree - 1 > c.total() - 1)
        throw ConfigError("degree " + std::to_string(p.degree) +
                          " unreachable with " + std::to_string(c.total()) +
                          " nodes");
    if (c.sybil > 0 && c.honest > 0 && c.corrupt == 0)
        throw ConfigError(
            "sybils and honest nodes without corrupt nodes cannot be connected");
    if (p.ratioCheck)
    {
        // sigma <= gamma/phi - gamma = 1/6 and corrupt share <= gamma = 1/3
        if (6ULL * c.sybil > c.total())
            throw ConfigError("sybil share exceeds 1/6");
        if (3ULL * c.corrupt > c.total())
            throw ConfigError("corrupt share exceeds 1/3");
    }
}

namespace
{

enum class Attempt
{
    Done,
    Stalled
};

bool
eligible(NodeType from, NodeType to)
{
    return !forbiddenPair(from, to);
}

// One pass of the method's while loop on g (mutated in place).
Attempt
growOnce(CommunityGraph& g, GenParams const& p, Rng& rng)
{
    auto const d = static_cast<std::size_t>(p.degree);
    auto const ids = g.nodes();
    std::uint64_t const stallBudget =
        p.stallBudget ? p.stallBudget : 64ULL * std::max<std::size_t>(ids.size(), 1);
    std::uint64_t stalls = 0;

    std::vector<NodeId> deficient;
    std::vector<NodeId> candidates;
    while (true)
    {
        deficient.clear();
        for (NodeId id : ids)
        {
            if (g.degree(id) + 1 < d)
                deficient.push_back(id);
        }
        if (deficient.empty())
            return Attempt::Done;

        NodeId const v = deficient[rng.index(deficient.size())];
        NodeType const vt = g.typeOf(v);
        candidates.clear();
        for (NodeId u : ids)
        {
            if (u == v || g.degree(u) >= d || g.hasEdge(v, u) ||
                !eligible(vt, g.typeOf(u)))
                continue;
            candidates.push_back(u);
        }
        if (candidates.empty())
        {
            if (++stalls > stallBudget)
                return Attempt::Stalled;
            continue;
        }
        stalls = 0;
        NodeId const u = candidates[rng.index(candidates.size())];
        g.addEdge(v, u);

        // Drop edges whose endpoints both sit at the target degree. Removal
        // is sequential: each removal lowers both endpoints to d-1.
        for (NodeId x : ids)
        {
            if (g.degree(x) != d)
                continue;
            auto const nb = g.neighbors(x);
            std::vector<NodeId> adj(nb.begin(), nb.end());
            for (NodeId y : adj)
            {
                if (x < y && g.degree(x) == d && g.degree(y) == d)
                    g.removeEdge(x, y);
            }
        }
    }
}

} // namespace

CommunityGraph
randomGraphGen(CommunityGraph g, GenParams const& p, Rng& rng,
               NodeFactory const& fresh)
{
    validate(p);

    auto have = g.typeCounts();
    for (NodeType t : {NodeType::Honest, NodeType::Corrupt, NodeType::Sybil})
    {
        if (have.of(t) > p.counts.of(t))
        {
            throw ConfigError("input graph has more " + std::string(typeName(t)) +
                              " nodes than requested");
        }
        for (auto k = have.of(t); k < p.counts.of(t); ++k)
            g.addNode(fresh(t), t);
    }

    for (std::uint32_t attempt = 0; attempt <= p.restartBudget; ++attempt)
    {
        CommunityGraph work = g;
        if (growOnce(work, p, rng) == Attempt::Done && work.isConnected())
            return work;
    }
    throw ConstructionError("random graph generation failed after " +
                            std::to_string(p.restartBudget) + " restarts");
}

TransitionResult
transition(CommunityGraph const& g, std::set<NodeId> const& removals,
           GenParams const& p, Rng& rng, NodeFactory const& fresh)
{
    CommunityGraph next = g;
    for (NodeId id : removals)
    {
        if (!next.removeNode(id))
            throw QueryError("transition: node " + std::to_string(id.value) +
                             " not in graph");
    }
    std::vector<NodeId> added;
    auto recording = [&](NodeType t) {
        NodeId id = fresh(t);
        added.push_back(id);
        return id;
    };
    TransitionResult r{randomGraphGen(std::move(next), p, rng, recording),
                       std::move(added)};
    return r;
}

} // namespace sybilsim::inline SYBILSIM_ABI
