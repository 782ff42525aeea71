#pragma once

#include "sybilsim/cli/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sybilsim::cli
{

/// Environment variable naming the default output root.
inline constexpr char const* kOutputRootEnv = "SYBILSIM_OUTPUT_ROOT";

/// $SYBILSIM_OUTPUT_ROOT (or "runs") / leaf.
std::filesystem::path outputRoot();

inline constexpr char const* kAggregateFile = "aggregate.csv";
inline constexpr char const* kAggregateHeader =
    "q,final_excess,final_tax,ratio,ratio_max,replicates";

struct SweepOptions
{
    SweepSpec spec;
    unsigned jobs = 1;
    bool decimal = false;
};

/// Runs every (q, replicate) point under dir/q_<q>/rep_<r> and writes
/// dir/aggregate.csv for the points that completed. Replicate r uses seed
/// base.seed + r. Returns the number of failed points.
std::size_t runSweep(RunConfig const& base, SweepOptions const& opts,
                     std::filesystem::path const& dir, std::ostream& log);

/// Entry point shared by the executable and the tests. args excludes the
/// program name. Returns the process exit status.
int runCli(std::vector<std::string> const& args, std::ostream& out,
           std::ostream& err);

enum ExitCode : int
{
    kExitOk = 0,
    kExitFailure = 1,
    kExitConfig = 2,
    kExitIo = 3,
    kExitInvariant = 4,
};

} // namespace sybilsim::cli
