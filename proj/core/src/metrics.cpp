#include "sybilsim/metrics.hpp"

#include "sybilsim/errors.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace sybilsim::inline SYBILSIM_ABI
{

RoundMetrics
collectRound(Economy const& economy, CommunityGraph const& g,
             NodeTable const& nodes, Round t, std::uint32_t exposedThisRound,
             std::uint64_t cumulativeExposed)
{
    auto const& s = economy.state();
    RoundMetrics m;
    m.round = t;
    m.mintedGenuine = s.genuineMinted;
    m.mintedSybil = s.sybilMinted;
    m.inCirculation = s.inCirculation;
    m.taxCollected = s.taxCollected;
    m.burned = s.burned;
    m.excess = s.excess();
    m.lostFine = s.lostFine;
    m.unpaidFine = economy.unpaidTotal();
    m.exposedThisRound = exposedThisRound;
    m.cumulativeExposed = cumulativeExposed;

    Amount ledgerSum{};
    for (NodeId id : g.nodes())
    {
        auto const& rec = nodes[id];
        if (rec.type == NodeType::Sybil && rec.participating())
            ++m.aliveSybils;
        ledgerSum += rec.fines.total();
    }

    auto fail = [t](std::string const& what) {
        return InvariantViolation("round " + std::to_string(t) + ": " + what);
    };
    if (!economy.conserves())
        throw fail("coin conservation violated");
    if (!approxEqual(m.excess, m.inCirculation + m.taxCollected - m.mintedGenuine))
        throw fail("excess != C + X - genuine minted");
    if (!approxEqual(ledgerSum, m.unpaidFine))
        throw fail("unpaid fine index disagrees with node ledgers");
    for (Amount const* a : {&m.inCirculation, &m.taxCollected, &m.burned,
                            &m.excess, &m.lostFine, &m.unpaidFine})
    {
        if (*a < 0 && !approxEqual(*a, 0))
            throw fail("negative amount");
    }
    return m;
}

PerMintRoundReport
perMintRound(Economy const& economy, CommunityGraph const& g,
             NodeTable const& nodes, Round t)
{
    std::vector<Round> births;
    for (NodeId id : g.nodes())
    {
        auto const& rec = nodes[id];
        if (rec.type == NodeType::Sybil && rec.participating())
            births.push_back(rec.birth);
    }
    std::sort(births.begin(), births.end());

    PerMintRoundReport out;
    out.reserve(static_cast<std::size_t>(t) + 1);
    for (Round t2 = 0; t2 <= t; ++t2)
    {
        PerMintRoundRow row;
        row.mintRound = t2;
        row.unpaidFine = economy.unpaidAt(t2);
        row.unexposedSybilMinters = static_cast<std::uint32_t>(
            std::upper_bound(births.begin(), births.end(), t2) - births.begin());
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::optional<Amount>>
excessToTaxRatio(std::span<RoundMetrics const> series)
{
    std::vector<std::optional<Amount>> out;
    out.reserve(series.size());
    for (auto const& m : series)
    {
        if (sign(m.taxCollected) > 0)
            out.emplace_back(Amount(m.excess / m.taxCollected));
        else
            out.emplace_back(std::nullopt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace
{

std::string
fmtAmount(Amount const& a, NumberFormat fmt)
{
    return fmt == NumberFormat::Exact ? formatAmount(a) : formatAmountDecimal(a);
}

std::vector<std::string>
splitCsv(std::string const& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

template <typename T>
T
parseUnsigned(std::string const& s)
{
    std::size_t used = 0;
    auto v = std::stoull(s, &used);
    if (used != s.size())
        throw std::invalid_argument("bad integer '" + s + "'");
    return static_cast<T>(v);
}

std::ofstream
openOut(std::filesystem::path const& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream
openIn(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    return in;
}

void
expectHeader(std::istream& is, std::string_view header)
{
    std::string line;
    if (!std::getline(is, line) || line != header)
    {
        throw std::invalid_argument("unexpected CSV header: '" + line + "'");
    }
}

} // namespace

void
writeSeries(std::ostream& os, std::span<RoundMetrics const> series,
            NumberFormat fmt)
{
    os << kSeriesHeader << '\n';
    for (auto const& m : series)
    {
        os << m.round << ',' << fmtAmount(m.mintedGenuine, fmt) << ','
           << fmtAmount(m.mintedSybil, fmt) << ','
           << fmtAmount(m.inCirculation, fmt) << ','
           << fmtAmount(m.taxCollected, fmt) << ','
           << fmtAmount(m.burned, fmt) << ',' << fmtAmount(m.excess, fmt)
           << ',' << fmtAmount(m.lostFine, fmt) << ','
           << fmtAmount(m.unpaidFine, fmt) << ',' << m.aliveSybils << ','
           << m.exposedThisRound << ',' << m.cumulativeExposed << '\n';
    }
}

void
writeSeries(std::filesystem::path const& path,
            std::span<RoundMetrics const> series, NumberFormat fmt)
{
    auto out = openOut(path);
    writeSeries(out, series, fmt);
    if (!out.flush())
        throw IoError("write failed: " + path.string());
}

std::vector<RoundMetrics>
readSeries(std::istream& is)
{
    expectHeader(is, kSeriesHeader);
    std::vector<RoundMetrics> out;
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        auto c = splitCsv(line);
        if (c.size() != 12)
            throw std::invalid_argument("series row has " +
                                        std::to_string(c.size()) + " columns");
        RoundMetrics m;
        m.round = parseUnsigned<Round>(c[0]);
        m.mintedGenuine = parseAmount(c[1]);
        m.mintedSybil = parseAmount(c[2]);
        m.inCirculation = parseAmount(c[3]);
        m.taxCollected = parseAmount(c[4]);
        m.burned = parseAmount(c[5]);
        m.excess = parseAmount(c[6]);
        m.lostFine = parseAmount(c[7]);
        m.unpaidFine = parseAmount(c[8]);
        m.aliveSybils = parseUnsigned<std::uint32_t>(c[9]);
        m.exposedThisRound = parseUnsigned<std::uint32_t>(c[10]);
        m.cumulativeExposed = parseUnsigned<std::uint64_t>(c[11]);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<RoundMetrics>
readSeries(std::filesystem::path const& path)
{
    auto in = openIn(path);
    return readSeries(in);
}

void
writePerMintRound(std::ostream& os, PerMintRoundReport const& report,
                  NumberFormat fmt)
{
    os << kPerMintRoundHeader << '\n';
    for (auto const& r : report)
    {
        os << r.mintRound << ',' << fmtAmount(r.unpaidFine, fmt) << ','
           << r.unexposedSybilMinters << '\n';
    }
}

void
writePerMintRound(std::filesystem::path const& path,
                  PerMintRoundReport const& report, NumberFormat fmt)
{
    auto out = openOut(path);
    writePerMintRound(out, report, fmt);
    if (!out.flush())
        throw IoError("write failed: " + path.string());
}

PerMintRoundReport
readPerMintRound(std::istream& is)
{
    expectHeader(is, kPerMintRoundHeader);
    PerMintRoundReport out;
    std::string line;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        auto c = splitCsv(line);
        if (c.size() != 3)
            throw std::invalid_argument("per-mint-round row has " +
                                        std::to_string(c.size()) + " columns");
        PerMintRoundRow r;
        r.mintRound = parseUnsigned<Round>(c[0]);
        r.unpaidFine = parseAmount(c[1]);
        r.unexposedSybilMinters = parseUnsigned<std::uint32_t>(c[2]);
        out.push_back(std::move(r));
    }
    return out;
}

PerMintRoundReport
readPerMintRound(std::filesystem::path const& path)
{
    auto in = openIn(path);
    return readPerMintRound(in);
}

} // namespace sybilsim::inline SYBILSIM_ABI
