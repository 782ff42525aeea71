#include "sybilsim/cli/backend.hpp"

#include "sybilsim/errors.hpp"
#include "sybilsim/simulator.hpp"

#include <chrono>
#include <fstream>
#include <system_error>

namespace sybilsim::cli::SYBILSIM_ABI
{

namespace
{

Amount
rational(std::string const& field, std::string const& text)
{
    try
    {
        return parseAmount(text);
    }
    catch (std::invalid_argument const&)
    {
        throw ConfigError(field + ": malformed number '" + text + "'");
    }
}

SimConfig
toSimConfig(RunConfig const& c)
{
    SimConfig s;
    s.counts = {c.honest, c.corrupt, c.sybil};
    s.degree = c.degree;
    s.rounds = c.rounds;
    try
    {
        s.variant.kind = parseVariant(c.variant);
        s.exposure = parseExposure(c.exposure);
    }
    catch (std::invalid_argument const& e)
    {
        throw ConfigError(e.what());
    }
    s.variant.alpha = rational("alpha", c.alpha);
    s.p = c.p;
    s.q = c.q;
    s.seed = c.seed;
    s.ratioCheck = c.ratioCheck;
    s.gamma = rational("gamma", c.gamma);
    s.phi = rational("phi", c.phi);
    return s;
}

nlohmann::json
amounts(EconomyState const& s, Amount const& unpaid, bool decimal)
{
    auto put = [decimal](Amount const& a) -> nlohmann::json {
        if (decimal)
            return toDouble(a);
        return formatAmount(a);
    };
    return {
        {"minted_genuine", put(s.genuineMinted)},
        {"minted_sybil", put(s.sybilMinted)},
        {"in_circulation", put(s.inCirculation)},
        {"tax_collected", put(s.taxCollected)},
        {"burned", put(s.burned)},
        {"excess", put(s.excess())},
        {"lost_fine", put(s.lostFine)},
        {"unpaid_fine", put(unpaid)},
        {"circulation_plus_tax", put(s.inCirculation + s.taxCollected)},
    };
}

} // namespace

void
checkConfig(RunConfig const& c)
{
    validate(toSimConfig(c));
}

nlohmann::json
runToDirectory(RunConfig const& c, std::filesystem::path const& dir,
               RunOptions const& opts)
{
    SimConfig const cfg = toSimConfig(c);
    validate(cfg);

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create " + dir.string() + ": " + ec.message());

    auto const t0 = std::chrono::steady_clock::now();
    Simulation sim(cfg);
    while (!sim.done())
        sim.step();
    Amount const unpaid = sim.economy().unpaidTotal();
    std::uint64_t const exposed =
        sim.series().empty() ? 0 : sim.series().back().cumulativeExposed;
    RunResult result = std::move(sim).finish();
    double const seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    auto const fmt = opts.decimal ? NumberFormat::Decimal : NumberFormat::Exact;
    writeSeries(dir / kSeriesFile, result.series, fmt);
    writePerMintRound(dir / kPerMintRoundFile, result.perMintRound, fmt);

    nlohmann::json summary;
    summary["config"] = toJson(c);
    summary["seed"] = c.seed;
    summary["arithmetic"] = kExactArithmetic ? "exact" : "float";
    summary["rounds_completed"] = result.series.size();
    summary["final"] = amounts(result.final, unpaid, false);
    summary["final_decimal"] = amounts(result.final, unpaid, true);
    if (result.excessZeroFrom)
        summary["excess_zero_from"] = *result.excessZeroFrom;
    else
        summary["excess_zero_from"] = nullptr;
    summary["cumulative_exposed"] = exposed;
    summary["nodes_created"] = result.nodesCreated;
    summary["checks_passed"] = true;
    summary["wall_clock_seconds"] = seconds;

    std::ofstream out(dir / kSummaryFile, std::ios::binary);
    out << summary.dump(2) << '\n';
    if (!out.flush())
        throw IoError("write failed: " + (dir / kSummaryFile).string());
    return summary;
}

} // namespace sybilsim::cli::SYBILSIM_ABI
