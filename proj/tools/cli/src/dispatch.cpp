#include "sybilsim/cli/backend.hpp"

namespace sybilsim::cli
{

nlohmann::json
runToDirectory(RunConfig const& c, std::filesystem::path const& dir,
               RunOptions const& opts)
{
    if (c.arithmetic == Arithmetic::Exact)
        return exact::runToDirectory(c, dir, opts);
    return fp::runToDirectory(c, dir, opts);
}

} // namespace sybilsim::cli
