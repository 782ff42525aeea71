#pragma once

#include "sybilsim/economy.hpp"
#include "sybilsim/graph.hpp"
#include "sybilsim/graph_gen.hpp"
#include "sybilsim/metrics.hpp"
#include "sybilsim/node.hpp"
#include "sybilsim/rng.hpp"

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

namespace sybilsim::inline SYBILSIM_ABI
{

enum class ExposureMode
{
    /// One member tested per round along a fixed seeded cyclic order of n
    /// slots; a replacement inherits the slot of the node it replaces.
    RoundRobin,
    /// Every participating sybil exposed independently with probability p.
    Bernoulli,
    /// One uniformly random member tested per round (i.i.d.).
    UniformPick
};

std::string_view exposureName(ExposureMode m);
ExposureMode parseExposure(std::string_view s);

struct SimConfig
{
    TypeCounts counts{60, 40, 20};
    std::uint32_t degree = 6;
    Round rounds = 500;
    ProtocolVariant variant;
    ExposureMode exposure = ExposureMode::RoundRobin;
    /// Per-sybil, per-round exposure probability (Bernoulli mode).
    double p = 0.034;
    /// Per-genuine, per-round death probability (probabilistic variant).
    double q = 0.0017;
    std::uint64_t seed = 1;
    /// Enforce sybil share <= gamma/phi - gamma and corrupt share <= gamma.
    bool ratioCheck = true;
    Amount gamma = makeAmount(1, 3);
    Amount phi = makeAmount(2, 3);

    GenParams genParams() const;
};

/// Throws ConfigError describing the first problem found.
void validate(SimConfig const& cfg);

class ExposureOracle
{
  public:
    ExposureOracle(ExposureMode mode, double p);

    /// Seeds the round-robin schedule with the initial members.
    void start(std::vector<NodeId> members, Rng& rng);

    /// Sybils to expose at round t, sorted.
    std::vector<NodeId> step(CommunityGraph const& g, NodeTable const& nodes,
                             Rng& rng);

    /// `fresh` takes over the schedule slot of `old`.
    void replace(NodeId old, NodeId fresh);

    ExposureMode
    mode() const
    {
        return mode_;
    }
    std::vector<NodeId> const&
    schedule() const
    {
        return slots_;
    }

  private:
    ExposureMode mode_;
    double p_;
    std::vector<NodeId> slots_;
    std::size_t cursor_ = 0;
};

std::vector<NodeId> exposureStep(ExposureOracle& oracle, CommunityGraph const& g,
                                 NodeTable const& nodes, Rng& rng);

/// Alive genuine members that cease this round, each with probability q.
std::vector<NodeId> deathStep(CommunityGraph const& g, NodeTable const& nodes,
                              double q, Rng& rng);

struct RunResult
{
    SimConfig config;
    std::vector<RoundMetrics> series;
    PerMintRoundReport perMintRound;
    EconomyState final;
    /// First round from which excess stays zero through the end of the run.
    std::optional<Round> excessZeroFrom;
    std::size_t nodesCreated = 0;
};

/// Receives every accounting event of a run, in execution order.
class SimulationObserver
{
  public:
    virtual ~SimulationObserver() = default;
    virtual void
    onMint(NodeRecord const&, Round, MintReport const&)
    {
    }
    virtual void
    onFine(Round, FineReport const&)
    {
    }
    virtual void
    onForfeit(NodeRecord const&, Round, Amount const&)
    {
    }
    virtual void
    onRoundEnd(RoundMetrics const&)
    {
    }
};

/// One community run, stepped round by round.
///
/// Each round: seal the G_t snapshot; every participating node mints and
/// pays; the oracle exposes sybils and their fines are imposed; in the
/// probabilistic variant genuine nodes die and forfeit their debt; metrics
/// are recorded; finally, except in the static variant, exposed and dead
/// nodes are replaced and the graph repaired to form G_{t+1}.
class Simulation
{
  public:
    explicit Simulation(SimConfig cfg);

    void step();
    bool
    done() const
    {
        return round_ >= cfg_.rounds;
    }
    /// Index of the next round to execute.
    Round
    round() const
    {
        return round_;
    }

    SimConfig const&
    config() const
    {
        return cfg_;
    }
    NodeTable const&
    nodes() const
    {
        return nodes_;
    }
    CommunityGraph const&
    graph() const
    {
        return graph_;
    }
    HistoryStore const&
    history() const
    {
        return history_;
    }
    Economy const&
    economy() const
    {
        return economy_;
    }
    ExposureOracle const&
    oracle() const
    {
        return oracle_;
    }
    std::vector<RoundMetrics> const&
    series() const
    {
        return series_;
    }
    /// Nodes exposed in the most recent round.
    std::vector<NodeId> const&
    lastExposed() const
    {
        return lastExposed_;
    }
    std::vector<NodeId> const&
    lastDeaths() const
    {
        return lastDeaths_;
    }

    /// Not owned; may be null.
    void
    setObserver(SimulationObserver* o)
    {
        observer_ = o;
    }

    RunResult finish() &&;

  private:
    SimConfig cfg_;
    Rng rng_;
    NodeTable nodes_;
    CommunityGraph graph_;
    CommunityGraph roundGraph_;
    HistoryStore history_;
    Economy economy_;
    ExposureOracle oracle_;
    std::vector<RoundMetrics> series_;
    std::vector<NodeId> lastExposed_;
    std::vector<NodeId> lastDeaths_;
    Round round_ = 0;
    std::uint64_t cumulativeExposed_ = 0;
    SimulationObserver* observer_ = nullptr;
};

RunResult runSimulation(SimConfig const& cfg);

} // namespace sybilsim::inline SYBILSIM_ABI
