#include "oracles.hpp"

#include "sybilsim/simulator.hpp"

#include <doctest.h>

using namespace sybilsim;

namespace
{

SimConfig
smallConfig(Variant kind, ExposureMode mode, std::uint64_t seed)
{
    SimConfig c;
    c.counts = {12, 8, 4};
    c.degree = 4;
    c.rounds = 60;
    c.variant.kind = kind;
    c.exposure = mode;
    c.p = 0.1;
    c.q = 0.02;
    c.seed = seed;
    return c;
}

void
replay(SimConfig const& cfg)
{
    oracle::LedgerReplay oracle(cfg.variant);
    Simulation sim(cfg);
    sim.setObserver(&oracle);
    while (!sim.done())
    {
        sim.step();
        if (!oracle.mismatches().empty())
            break;
    }
    oracle.compare(sim.nodes(), sim.economy().state());
    for (auto const& m : oracle.mismatches())
        FAIL_CHECK(m);
    std::string why;
    CHECK_MESSAGE(oracle.roundIdentityHolds(sim.nodes(), sim.economy(),
                                            cfg.rounds, &why),
                  why);
}

} // namespace

TEST_CASE("ledger replay agrees with the library")
{
    struct Case
    {
        Variant kind;
        ExposureMode mode;
    };
    for (auto c : {Case{Variant::Static, ExposureMode::RoundRobin},
                   Case{Variant::Regenerating, ExposureMode::RoundRobin},
                   Case{Variant::Regenerating, ExposureMode::UniformPick},
                   Case{Variant::RegeneratingModified, ExposureMode::RoundRobin},
                   Case{Variant::Probabilistic, ExposureMode::Bernoulli}})
    {
        for (std::uint64_t seed = 1; seed <= 4; ++seed)
        {
            auto cfg = smallConfig(c.kind, c.mode, seed);
            CAPTURE(variantName(c.kind));
            CAPTURE(exposureName(c.mode));
            CAPTURE(seed);
            replay(cfg);
        }
    }
}

TEST_CASE("ledger replay with alpha above two")
{
    auto cfg = smallConfig(Variant::Regenerating, ExposureMode::RoundRobin, 9);
    cfg.variant.alpha = makeAmount(7, 2);
    replay(cfg);
    cfg.variant.kind = Variant::RegeneratingModified;
    replay(cfg);
}

TEST_CASE("ledger replay catches a tampered payment")
{
    oracle::LedgerReplay oracle(ProtocolVariant{});
    NodeTable t;
    auto const id = t.create(NodeType::Honest, 0);
    MintReport wrong;
    wrong.paid = 1;
    oracle.onMint(t[id], 0, wrong);
    CHECK_FALSE(oracle.mismatches().empty());
}
