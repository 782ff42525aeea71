#pragma once

#include "sybilsim/economy.hpp"
#include "sybilsim/graph.hpp"
#include "sybilsim/node.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sybilsim::inline SYBILSIM_ABI
{

/// One row of the main series. Minted amounts are cumulative.
struct RoundMetrics
{
    Round round = 0;
    Amount mintedGenuine{};
    Amount mintedSybil{};
    Amount inCirculation{};
    Amount taxCollected{};
    Amount burned{};
    Amount excess{};
    Amount lostFine{};
    Amount unpaidFine{};
    std::uint32_t aliveSybils = 0;
    std::uint32_t exposedThisRound = 0;
    std::uint64_t cumulativeExposed = 0;

    bool operator==(RoundMetrics const&) const = default;
};

struct PerMintRoundRow
{
    Round mintRound = 0;
    Amount unpaidFine{};
    std::uint32_t unexposedSybilMinters = 0;

    bool operator==(PerMintRoundRow const&) const = default;
};

using PerMintRoundReport = std::vector<PerMintRoundRow>;

inline constexpr std::string_view kSeriesHeader =
    "round,minted_genuine,minted_sybil,in_circulation,tax_collected,burned,"
    "excess,lost_fine,unpaid_fine,alive_sybils,exposed_this_round,"
    "cumulative_exposed";
inline constexpr std::string_view kPerMintRoundHeader =
    "mint_round,unpaid_fine,unexposed_sybil_minters";

/// Snapshot of the economy at the end of round t. `g` is the round's graph
/// before replacements are added. Throws InvariantViolation if any
/// accounting identity fails.
RoundMetrics collectRound(Economy const& economy, CommunityGraph const& g,
                          NodeTable const& nodes, Round t,
                          std::uint32_t exposedThisRound,
                          std::uint64_t cumulativeExposed);

/// Rows for mint rounds 0..t.
PerMintRoundReport perMintRound(Economy const& economy, CommunityGraph const& g,
                                NodeTable const& nodes, Round t);

/// excess / tax per round; nullopt where no tax has been collected yet.
std::vector<std::optional<Amount>>
excessToTaxRatio(std::span<RoundMetrics const> series);

enum class NumberFormat
{
    /// "num/den", lossless
    Exact,
    /// shortest round-tripping double
    Decimal
};

void writeSeries(std::ostream& os, std::span<RoundMetrics const> series,
                 NumberFormat fmt = NumberFormat::Exact);
void writeSeries(std::filesystem::path const& path,
                 std::span<RoundMetrics const> series,
                 NumberFormat fmt = NumberFormat::Exact);
std::vector<RoundMetrics> readSeries(std::istream& is);
std::vector<RoundMetrics> readSeries(std::filesystem::path const& path);

void writePerMintRound(std::ostream& os, PerMintRoundReport const& report,
                       NumberFormat fmt = NumberFormat::Exact);
void writePerMintRound(std::filesystem::path const& path,
                       PerMintRoundReport const& report,
                       NumberFormat fmt = NumberFormat::Exact);
PerMintRoundReport readPerMintRound(std::istream& is);
PerMintRoundReport readPerMintRound(std::filesystem::path const& path);

} // namespace sybilsim::inline SYBILSIM_ABI
