#include "sybilsim/graph.hpp"

#include "sybilsim/errors.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sybilsim::inline SYBILSIM_ABI
{

namespace
{

std::string
nodeStr(NodeId id)
{
    return std::to_string(id.value);
}

bool
insertSorted(std::vector<NodeId>& v, NodeId x)
{
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x)
        return false;
    v.insert(it, x);
    return true;
}

bool
eraseSorted(std::vector<NodeId>& v, NodeId x)
{
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x)
        return false;
    v.erase(it);
    return true;
}

} // namespace

// ---------------------------------------------------------------------------
// CommunityGraph

CommunityGraph::Vertex&
CommunityGraph::at(NodeId id)
{
    auto it = vertices_.find(id);
    if (it == vertices_.end())
        throw QueryError("node " + nodeStr(id) + " not in graph");
    return it->second;
}

CommunityGraph::Vertex const&
CommunityGraph::at(NodeId id) const
{
    auto it = vertices_.find(id);
    if (it == vertices_.end())
        throw QueryError("node " + nodeStr(id) + " not in graph");
    return it->second;
}

void
CommunityGraph::addNode(NodeId id, NodeType type)
{
    auto [it, inserted] = vertices_.try_emplace(id, Vertex{type, {}});
    if (!inserted && it->second.type != type)
        throw std::invalid_argument("node " + nodeStr(id) +
                                    " re-added with another type");
}

bool
CommunityGraph::removeNode(NodeId id)
{
    auto it = vertices_.find(id);
    if (it == vertices_.end())
        return false;
    for (NodeId n : it->second.adj)
        eraseSorted(vertices_.at(n).adj, id);
    vertices_.erase(it);
    return true;
}

bool
CommunityGraph::addEdge(NodeId a, NodeId b)
{
    if (a == b)
        throw std::invalid_argument("self-loop on node " + nodeStr(a));
    auto& va = at(a);
    auto& vb = at(b);
    if (!insertSorted(va.adj, b))
        return false;
    insertSorted(vb.adj, a);
    return true;
}

bool
CommunityGraph::removeEdge(NodeId a, NodeId b)
{
    if (!contains(a) || !contains(b))
        return false;
    if (!eraseSorted(at(a).adj, b))
        return false;
    eraseSorted(at(b).adj, a);
    return true;
}

bool
CommunityGraph::hasEdge(NodeId a, NodeId b) const
{
    auto it = vertices_.find(a);
    if (it == vertices_.end())
        return false;
    return std::binary_search(it->second.adj.begin(), it->second.adj.end(), b);
}

NodeType
CommunityGraph::typeOf(NodeId id) const
{
    return at(id).type;
}

std::span<NodeId const>
CommunityGraph::neighbors(NodeId id) const
{
    return at(id).adj;
}

std::size_t
CommunityGraph::degree(NodeId id) const
{
    return at(id).adj.size();
}

std::size_t
CommunityGraph::edgeCount() const
{
    std::size_t sum = 0;
    for (auto const& [_, v] : vertices_)
        sum += v.adj.size();
    return sum / 2;
}

std::vector<NodeId>
CommunityGraph::nodes() const
{
    std::vector<NodeId> out;
    out.reserve(vertices_.size());
    for (auto const& [id, _] : vertices_)
        out.push_back(id);
    return out;
}

std::vector<Edge>
CommunityGraph::edges() const
{
    std::vector<Edge> out;
    for (auto const& [id, v] : vertices_)
    {
        for (NodeId n : v.adj)
        {
            if (id < n)
                out.emplace_back(id, n);
        }
    }
    return out;
}

TypeCounts
CommunityGraph::typeCounts() const
{
    TypeCounts c;
    for (auto const& [_, v] : vertices_)
        ++c.of(v.type);
    return c;
}

bool
CommunityGraph::isConnected() const
{
    if (vertices_.empty())
        return true;
    std::map<NodeId, bool> seen;
    std::vector<NodeId> stack{vertices_.begin()->first};
    seen[stack.back()] = true;
    std::size_t reached = 1;
    while (!stack.empty())
    {
        NodeId x = stack.back();
        stack.pop_back();
        for (NodeId n : vertices_.at(x).adj)
        {
            if (!seen[n])
            {
                seen[n] = true;
                ++reached;
                stack.push_back(n);
            }
        }
    }
    return reached == vertices_.size();
}

// ---------------------------------------------------------------------------
// HistoryStore

void
HistoryStore::seal(Round t, CommunityGraph const& g)
{
    if (t != roundCount())
    {
        throw std::logic_error("history: sealing round " + std::to_string(t) +
                               " but next round is " +
                               std::to_string(roundCount()));
    }
    Snapshot s;
    s.ids = g.nodes();
    s.offsets.reserve(s.ids.size() + 1);
    s.offsets.push_back(0);
    for (NodeId id : s.ids)
    {
        auto nb = g.neighbors(id);
        s.adj.insert(s.adj.end(), nb.begin(), nb.end());
        s.offsets.push_back(static_cast<std::uint32_t>(s.adj.size()));
    }
    rounds_.push_back(std::move(s));
}

HistoryStore::Snapshot const&
HistoryStore::round(Round t) const
{
    if (t >= rounds_.size())
        throw QueryError("history: no snapshot for round " + std::to_string(t));
    return rounds_[t];
}

bool
HistoryStore::contains(NodeId v, Round t) const
{
    if (t >= rounds_.size())
        return false;
    auto const& ids = rounds_[t].ids;
    return std::binary_search(ids.begin(), ids.end(), v);
}

std::span<NodeId const>
HistoryStore::neighborsAt(NodeId v, Round t) const
{
    auto const& s = round(t);
    auto it = std::lower_bound(s.ids.begin(), s.ids.end(), v);
    if (it == s.ids.end() || *it != v)
    {
        throw QueryError("history: node " + nodeStr(v) + " absent at round " +
                         std::to_string(t));
    }
    auto const i = static_cast<std::size_t>(it - s.ids.begin());
    return std::span<NodeId const>(s.adj).subspan(
        s.offsets[i], s.offsets[i + 1] - s.offsets[i]);
}

std::span<NodeId const>
HistoryStore::membersAt(Round t) const
{
    return round(t).ids;
}

// ---------------------------------------------------------------------------
// Conditional boundary

namespace
{

template <typename Neighbors>
std::vector<NodeId>
boundaryBfs(Neighbors&& neighborsOf, NodeTable const& status, NodeId u)
{
    std::vector<NodeId> result;
    std::vector<NodeId> frontier{u};
    std::vector<NodeId> seen{u};
    while (!frontier.empty())
    {
        NodeId x = frontier.back();
        frontier.pop_back();
        for (NodeId w : neighborsOf(x))
        {
            if (!insertSorted(seen, w))
                continue;
            auto const& rec = status[w];
            if (rec.participating())
                result.push_back(w);
            else if (rec.exposed)
                frontier.push_back(w);
            // dead and unexposed: blocks the path
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

} // namespace

std::vector<NodeId>
conditionalBoundary(HistoryStore const& history, NodeTable const& status,
                    NodeId u, Round t2)
{
    if (!status.contains(u))
        throw QueryError("conditional boundary: unknown node " + nodeStr(u));
    // Validates (u, t2) up front so the error names the query, not a hop.
    (void)history.neighborsAt(u, t2);
    return boundaryBfs(
        [&](NodeId x) { return history.neighborsAt(x, t2); }, status, u);
}

std::vector<NodeId>
conditionalBoundary(CommunityGraph const& g, NodeTable const& status, NodeId u)
{
    if (!status.contains(u) || !g.contains(u))
        throw QueryError("conditional boundary: unknown node " + nodeStr(u));
    return boundaryBfs([&](NodeId x) { return g.neighbors(x); }, status, u);
}

// ---------------------------------------------------------------------------
// Vertex expansion

namespace
{

// b1/a1 < b2/a2 with positive denominators
bool
lessFrac(std::uint64_t b1, std::uint64_t a1, std::uint64_t b2, std::uint64_t a2)
{
    return b1 * a2 < b2 * a1;
}

struct MaskGraph
{
    std::vector<NodeId> ids;
    std::vector<std::uint32_t> nbr;
};

MaskGraph
toMasks(CommunityGraph const& g)
{
    MaskGraph m;
    m.ids = g.nodes();
    m.nbr.assign(m.ids.size(), 0);
    for (std::size_t i = 0; i < m.ids.size(); ++i)
    {
        for (NodeId n : g.neighbors(m.ids[i]))
        {
            auto j = std::lower_bound(m.ids.begin(), m.ids.end(), n) -
                     m.ids.begin();
            m.nbr[i] |= 1u << j;
        }
    }
    return m;
}

} // namespace

ExpansionResult
vertexExpansion(CommunityGraph const& g, std::size_t cap)
{
    auto const n = g.nodeCount();
    if (n > cap || n > 31)
    {
        throw ExpansionCapExceeded("exact vertex expansion refused: " +
                                   std::to_string(n) + " nodes exceeds cap " +
                                   std::to_string(std::min<std::size_t>(cap, 31)));
    }
    if (n < 2)
        throw QueryError("vertex expansion needs at least 2 nodes");

    auto const m = toMasks(g);
    std::uint32_t const full = (n == 32) ? ~0u : ((1u << n) - 1);
    std::uint64_t bestB = 1, bestA = 0;
    ExpansionResult r;
    for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask)
    {
        auto const size = static_cast<std::uint64_t>(std::popcount(mask));
        if (2 * size > n)
            continue;
        ++r.subsets;
        std::uint64_t boundary = 0;
        for (std::uint32_t rest = mask; rest; rest &= rest - 1)
        {
            auto const i = std::countr_zero(rest);
            if (m.nbr[i] & ~mask & full)
                ++boundary;
        }
        if (bestA == 0 || lessFrac(boundary, size, bestB, bestA))
        {
            bestB = boundary;
            bestA = size;
        }
    }
    r.boundary = bestB;
    r.size = bestA;
    r.phi = makeAmount(static_cast<long>(bestB), static_cast<long>(bestA));
    r.exact = true;
    return r;
}

ExpansionResult
sampledVertexExpansion(CommunityGraph const& g, std::uint64_t samples, Rng& rng)
{
    auto const ids = g.nodes();
    auto const n = ids.size();
    if (n < 2)
        throw QueryError("vertex expansion needs at least 2 nodes");

    auto indexOf = [&](NodeId id) {
        return static_cast<std::size_t>(
            std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
    };

    std::uint64_t bestB = 0, bestA = 0;
    std::vector<char> in(n);
    std::vector<std::size_t> members;
    auto evaluate = [&] {
        std::uint64_t boundary = 0;
        for (auto i : members)
        {
            for (NodeId nb : g.neighbors(ids[i]))
            {
                if (!in[indexOf(nb)])
                {
                    ++boundary;
                    break;
                }
            }
        }
        std::uint64_t size = members.size();
        if (bestA == 0 || lessFrac(boundary, size, bestB, bestA))
        {
            bestB = boundary;
            bestA = size;
        }
    };

    for (std::uint64_t s = 0; s < samples; ++s)
    {
        std::fill(in.begin(), in.end(), 0);
        members.clear();
        auto const target = 1 + rng.index(n / 2);
        if (s % 2 == 0)
        {
            // grow a connected blob from a random seed
            std::vector<std::size_t> frontier{rng.index(n)};
            in[frontier.back()] = 1;
            members.push_back(frontier.back());
            while (members.size() < target && !frontier.empty())
            {
                auto const pos = rng.index(frontier.size());
                auto const x = frontier[pos];
                std::vector<std::size_t> fresh;
                for (NodeId nb : g.neighbors(ids[x]))
                {
                    auto j = indexOf(nb);
                    if (!in[j])
                        fresh.push_back(j);
                }
                if (fresh.empty())
                {
                    frontier.erase(frontier.begin() +
                                   static_cast<std::ptrdiff_t>(pos));
                    continue;
                }
                auto const j = fresh[rng.index(fresh.size())];
                in[j] = 1;
                members.push_back(j);
                frontier.push_back(j);
            }
        }
        else
        {
            std::vector<std::size_t> order(n);
            for (std::size_t i = 0; i < n; ++i)
                order[i] = i;
            rng.shuffle(std::span<std::size_t>(order));
            for (std::size_t k = 0; k < target; ++k)
            {
                in[order[k]] = 1;
                members.push_back(order[k]);
            }
        }
        evaluate();
    }

    ExpansionResult r;
    r.boundary = bestB;
    r.size = bestA == 0 ? 1 : bestA;
    r.phi = makeAmount(static_cast<long>(r.boundary), static_cast<long>(r.size));
    r.exact = false;
    r.subsets = samples;
    return r;
}

// ---------------------------------------------------------------------------
// Invariant report

GraphReport
checkGraphInvariants(CommunityGraph const& g, GraphCheckOptions const& opts)
{
    GraphReport r;
    r.connected = g.isConnected();
    r.counts = g.typeCounts();
    bool first = true;
    for (NodeId id : g.nodes())
    {
        auto const d = g.degree(id);
        if (first)
        {
            r.minDegree = r.maxDegree = d;
            first = false;
        }
        r.minDegree = std::min(r.minDegree, d);
        r.maxDegree = std::max(r.maxDegree, d);
    }
    for (auto const& [a, b] : g.edges())
    {
        if (forbiddenPair(g.typeOf(a), g.typeOf(b)))
            r.honestSybilEdges.emplace_back(a, b);
    }
    if (opts.degree)
    {
        auto const d = static_cast<std::size_t>(*opts.degree);
        r.degreeOk = g.nodeCount() == 0 || (r.minDegree + 1 >= d && r.maxDegree <= d);
    }
    if (opts.ratio)
    {
        // counts proportional to the configured ratio, compared by cross
        // products to stay exact
        auto const& want = *opts.ratio;
        auto const& got = r.counts;
        auto const wt = static_cast<std::uint64_t>(want.total());
        auto const gt = static_cast<std::uint64_t>(got.total());
        auto prop = [&](std::uint32_t w, std::uint32_t x) {
            return static_cast<std::uint64_t>(x) * wt ==
                   static_cast<std::uint64_t>(w) * gt;
        };
        r.ratioOk = wt > 0 && prop(want.honest, got.honest) &&
                    prop(want.corrupt, got.corrupt) &&
                    prop(want.sybil, got.sybil);
    }
    return r;
}

std::ostream&
operator<<(std::ostream& os, GraphReport const& r)
{
    auto mark = [](bool ok) { return ok ? "ok" : "FAIL"; };
    os << "nodes: " << r.counts.total() << " (honest " << r.counts.honest
       << ", corrupt " << r.counts.corrupt << ", sybil " << r.counts.sybil
       << ")\n";
    os << "connected: " << mark(r.connected) << "\n";
    os << "honest-sybil edges: " << r.honestSybilEdges.size() << " "
       << mark(r.honestSybilEdges.empty()) << "\n";
    for (auto const& [a, b] : r.honestSybilEdges)
        os << "  violation: " << a << " - " << b << "\n";
    os << "degree range: [" << r.minDegree << ", " << r.maxDegree << "]";
    if (r.degreeOk)
        os << " " << mark(*r.degreeOk);
    os << "\n";
    if (r.ratioOk)
        os << "type ratio: " << mark(*r.ratioOk) << "\n";
    return os;
}

// ---------------------------------------------------------------------------
// Dump format

void
writeGraphDump(std::ostream& os, CommunityGraph const& g, NodeTable const* nodes)
{
    os << "# id type birth\n";
    for (NodeId id : g.nodes())
    {
        Round birth = 0;
        if (nodes && nodes->contains(id))
            birth = (*nodes)[id].birth;
        os << id.value << ' ' << typeLetter(g.typeOf(id)) << ' ' << birth
           << '\n';
    }
    os << "# u v\n";
    for (auto const& [a, b] : g.edges())
        os << a.value << ' ' << b.value << '\n';
}

void
writeGraphDump(std::filesystem::path const& path, CommunityGraph const& g,
               NodeTable const* nodes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    writeGraphDump(out, g, nodes);
    if (!out)
        throw IoError("write failed: " + path.string());
}

GraphDump
readGraphDump(std::istream& is)
{
    GraphDump dump;
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineNo = 0;
    auto fail = [&](std::string const& why) {
        return std::invalid_argument("graph dump line " +
                                     std::to_string(lineNo) + ": " + why);
    };
    auto parseId = [&](std::string const& tok) {
        try
        {
            std::size_t used = 0;
            auto v = std::stoul(tok, &used);
            if (used != tok.size())
                throw fail("bad node id '" + tok + "'");
            return NodeId{static_cast<std::uint32_t>(v)};
        }
        catch (std::logic_error const&)
        {
            throw fail("bad node id '" + tok + "'");
        }
    };
    while (std::getline(is, line))
    {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        if (tok.size() == 3)
        {
            NodeId id = parseId(tok[0]);
            NodeType type;
            try
            {
                type = parseTypeLetter(tok[1]);
            }
            catch (std::invalid_argument const& e)
            {
                throw fail(e.what());
            }
            Round birth = static_cast<Round>(parseId(tok[2]).value);
            dump.graph.addNode(id, type);
            dump.birth[id] = birth;
        }
        else if (tok.size() == 2)
        {
            edges.emplace_back(parseId(tok[0]), parseId(tok[1]));
        }
        else
        {
            throw fail("expected 'id type birth' or 'u v'");
        }
    }
    for (auto const& [a, b] : edges)
    {
        for (NodeId x : {a, b})
        {
            if (!dump.graph.contains(x))
            {
                dump.graph.addNode(x, NodeType::Honest);
                dump.birth[x] = 0;
            }
        }
        if (a == b)
            throw std::invalid_argument("graph dump: self-loop on node " +
                                        nodeStr(a));
        dump.graph.addEdge(a, b);
    }
    return dump;
}

GraphDump
readGraphDump(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    return readGraphDump(in);
}

} // namespace sybilsim::inline SYBILSIM_ABI
