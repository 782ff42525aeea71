#include "sybilsim/simulator.hpp"

#include "sybilsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace sybilsim::inline SYBILSIM_ABI
{

std::string_view
exposureName(ExposureMode m)
{
    switch (m)
    {
    case ExposureMode::RoundRobin:
        return "round-robin";
    case ExposureMode::Bernoulli:
        return "bernoulli";
    case ExposureMode::UniformPick:
        return "uniform-pick";
    }
    return "?";
}

ExposureMode
parseExposure(std::string_view s)
{
    for (auto m : {ExposureMode::RoundRobin, ExposureMode::Bernoulli,
                   ExposureMode::UniformPick})
    {
        if (exposureName(m) == s)
            return m;
    }
    throw std::invalid_argument("unknown exposure mode '" + std::string(s) +
                                "'");
}

GenParams
SimConfig::genParams() const
{
    GenParams g;
    g.degree = degree;
    g.counts = counts;
    return g;
}

void
validate(SimConfig const& cfg)
{
    validate(cfg.genParams());
    if (cfg.variant.alpha < 1)
        throw ConfigError("alpha must be at least 1");
    auto probability = [](double x) {
        return std::isfinite(x) && x >= 0.0 && x <= 1.0;
    };
    if (!probability(cfg.p))
        throw ConfigError("p must lie in [0, 1]");
    if (!probability(cfg.q))
        throw ConfigError("q must lie in [0, 1]");
    if (cfg.variant.kind == Variant::Probabilistic && cfg.q > cfg.p)
        throw ConfigError("probabilistic runs require q <= p");
    if (cfg.ratioCheck)
    {
        if (sign(cfg.phi) <= 0 || sign(cfg.gamma) < 0)
            throw ConfigError("gamma and phi must be positive");
        Amount const total = cfg.counts.total();
        Amount const sigma = Amount(cfg.counts.sybil) / total;
        Amount const corrupt = Amount(cfg.counts.corrupt) / total;
        Amount const sigmaBound = cfg.gamma / cfg.phi - cfg.gamma;
        if (sigma > sigmaBound && !approxEqual(sigma, sigmaBound))
            throw ConfigError("sybil share " + formatAmount(sigma) +
                              " exceeds gamma/phi - gamma = " +
                              formatAmount(sigmaBound));
        if (corrupt > cfg.gamma && !approxEqual(corrupt, cfg.gamma))
            throw ConfigError("corrupt share " + formatAmount(corrupt) +
                              " exceeds gamma = " + formatAmount(cfg.gamma));
    }
}

// ---------------------------------------------------------------------------
// Oracles

ExposureOracle::ExposureOracle(ExposureMode mode, double p) : mode_(mode), p_(p)
{
}

void
ExposureOracle::start(std::vector<NodeId> members, Rng& rng)
{
    slots_.clear();
    cursor_ = 0;
    if (mode_ != ExposureMode::RoundRobin)
        return;
    slots_ = std::move(members);
    rng.shuffle(std::span<NodeId>(slots_));
}

std::vector<NodeId>
ExposureOracle::step(CommunityGraph const& g, NodeTable const& nodes, Rng& rng)
{
    auto isTarget = [&](NodeId id) {
        auto const& rec = nodes[id];
        return rec.type == NodeType::Sybil && rec.participating();
    };
    std::vector<NodeId> out;
    switch (mode_)
    {
    case ExposureMode::RoundRobin:
    {
        if (slots_.empty())
            break;
        NodeId const candidate = slots_[cursor_];
        cursor_ = (cursor_ + 1) % slots_.size();
        if (g.contains(candidate) && isTarget(candidate))
            out.push_back(candidate);
        break;
    }
    case ExposureMode::UniformPick:
    {
        auto const members = g.nodes();
        if (members.empty())
            break;
        NodeId const candidate = members[rng.index(members.size())];
        if (isTarget(candidate))
            out.push_back(candidate);
        break;
    }
    case ExposureMode::Bernoulli:
        for (NodeId id : g.nodes())
        {
            if (isTarget(id) && rng.bernoulli(p_))
                out.push_back(id);
        }
        break;
    }
    return out;
}

void
ExposureOracle::replace(NodeId old, NodeId fresh)
{
    auto it = std::find(slots_.begin(), slots_.end(), old);
    if (it != slots_.end())
        *it = fresh;
}

std::vector<NodeId>
exposureStep(ExposureOracle& oracle, CommunityGraph const& g,
             NodeTable const& nodes, Rng& rng)
{
    return oracle.step(g, nodes, rng);
}

std::vector<NodeId>
deathStep(CommunityGraph const& g, NodeTable const& nodes, double q, Rng& rng)
{
    std::vector<NodeId> out;
    if (q <= 0.0)
        return out;
    for (NodeId id : g.nodes())
    {
        auto const& rec = nodes[id];
        if (isGenuine(rec.type) && rec.alive() && rng.bernoulli(q))
            out.push_back(id);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Simulation

Simulation::Simulation(SimConfig cfg)
    : cfg_(std::move(cfg))
    , rng_(cfg_.seed)
    , economy_((validate(cfg_), cfg_.variant))
    , oracle_(cfg_.exposure, cfg_.p)
{
    graph_ = randomGraphGen(CommunityGraph{}, cfg_.genParams(), rng_,
                            [this](NodeType t) { return nodes_.create(t, 0); });
    oracle_.start(graph_.nodes(), rng_);
}

void
Simulation::step()
{
    if (done())
        throw std::logic_error("simulation already finished");
    Round const t = round_;
    bool const isStatic = cfg_.variant.kind == Variant::Static;

    history_.seal(t, graph_);

    for (NodeId id : graph_.nodes())
    {
        auto& rec = nodes_[id];
        if (!rec.participating())
            continue;
        auto const mint = economy_.mintAndPay(rec, t);
        if (observer_)
            observer_->onMint(rec, t, mint);
    }

    lastExposed_ = exposureStep(oracle_, graph_, nodes_, rng_);
    for (NodeId u : lastExposed_)
    {
        auto const fine = isStatic
                              ? economy_.imposeFineStatic(u, graph_, nodes_)
                              : economy_.imposeFinePerRound(u, t, history_, nodes_);
        if (observer_)
            observer_->onFine(t, fine);
    }
    cumulativeExposed_ += lastExposed_.size();

    lastDeaths_.clear();
    if (cfg_.variant.kind == Variant::Probabilistic)
    {
        lastDeaths_ = deathStep(graph_, nodes_, cfg_.q, rng_);
        for (NodeId d : lastDeaths_)
        {
            auto& rec = nodes_[d];
            auto const lost = economy_.forfeit(rec);
            rec.death = t;
            if (observer_)
                observer_->onForfeit(rec, t, lost);
        }
    }

    series_.push_back(collectRound(economy_, graph_, nodes_, t,
                                   static_cast<std::uint32_t>(lastExposed_.size()),
                                   cumulativeExposed_));
    if (observer_)
        observer_->onRoundEnd(series_.back());

    if (round_ + 1 == cfg_.rounds)
        roundGraph_ = graph_;

    if (!isStatic && (!lastExposed_.empty() || !lastDeaths_.empty()))
    {
        std::set<NodeId> removals(lastDeaths_.begin(), lastDeaths_.end());
        for (NodeId u : lastExposed_)
        {
            nodes_[u].death = t;
            removals.insert(u);
        }
        auto next = transition(graph_, removals, cfg_.genParams(), rng_,
                               [this, t](NodeType type) {
                                   return nodes_.create(type, t + 1);
                               });

        // pair removed and added nodes of the same type for the schedule
        std::map<NodeType, std::vector<NodeId>> fresh;
        for (NodeId id : next.added)
            fresh[nodes_[id].type].push_back(id);
        std::map<NodeType, std::size_t> used;
        for (NodeId old : removals)
        {
            auto const type = nodes_[old].type;
            oracle_.replace(old, fresh.at(type).at(used[type]++));
        }
        graph_ = std::move(next.graph);
    }
    ++round_;
}

RunResult
Simulation::finish() &&
{
    while (!done())
        step();

    RunResult r;
    r.config = cfg_;
    if (cfg_.rounds > 0)
        r.perMintRound =
            perMintRound(economy_, roundGraph_, nodes_, cfg_.rounds - 1);
    r.final = economy_.state();
    r.nodesCreated = nodes_.size();
    std::optional<Round> zeroFrom;
    for (auto it = series_.rbegin(); it != series_.rend(); ++it)
    {
        if (sign(it->excess) != 0)
            break;
        zeroFrom = it->round;
    }
    r.excessZeroFrom = zeroFrom;
    r.series = std::move(series_);
    return r;
}

RunResult
runSimulation(SimConfig const& cfg)
{
    return Simulation(cfg).finish();
}

} // namespace sybilsim::inline SYBILSIM_ABI
