#pragma once

#include "sybilsim/cli/config.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace sybilsim::cli
{

struct RunOptions
{
    /// Emit decimals instead of exact fractions in the CSVs.
    bool decimal = false;
};

// One definition per arithmetic backend; backend.cpp is compiled twice.
#define SYBILSIM_CLI_BACKEND_API                                               \
    void checkConfig(RunConfig const& c);                                      \
    nlohmann::json runToDirectory(RunConfig const& c,                          \
                                  std::filesystem::path const& dir,            \
                                  RunOptions const& opts);

namespace exact
{
SYBILSIM_CLI_BACKEND_API
}
namespace fp
{
SYBILSIM_CLI_BACKEND_API
}

#undef SYBILSIM_CLI_BACKEND_API

/// Runs one simulation and writes series.csv, per_mint_round.csv and
/// summary.json into dir (created if needed). Returns the summary.
/// Throws ConfigError, IoError or InvariantViolation.
nlohmann::json runToDirectory(RunConfig const& c,
                              std::filesystem::path const& dir,
                              RunOptions const& opts = {});

inline constexpr char const* kSeriesFile = "series.csv";
inline constexpr char const* kPerMintRoundFile = "per_mint_round.csv";
inline constexpr char const* kSummaryFile = "summary.json";

} // namespace sybilsim::cli
