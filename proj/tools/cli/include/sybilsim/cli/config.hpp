#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sybilsim::cli
{

enum class Arithmetic
{
    Exact,
    Float
};

std::string_view arithmeticName(Arithmetic a);
Arithmetic parseArithmetic(std::string_view s);

/// Backend-neutral run configuration. Rational parameters are kept as text
/// ("2", "1/3", "0.5") and converted by the selected arithmetic backend.
struct RunConfig
{
    std::string name = "run";
    std::uint32_t honest = 60;
    std::uint32_t corrupt = 40;
    std::uint32_t sybil = 20;
    std::uint32_t degree = 6;
    std::uint32_t rounds = 500;
    std::string variant = "static";
    std::string exposure = "round-robin";
    std::string alpha = "2";
    double p = 0.034;
    double q = 0.0017;
    std::uint64_t seed = 1;
    bool ratioCheck = true;
    std::string gamma = "1/3";
    std::string phi = "2/3";
    Arithmetic arithmetic = Arithmetic::Exact;

    bool operator==(RunConfig const&) const = default;
};

nlohmann::json toJson(RunConfig const& c);

/// Overlays the keys present in j onto base. Unknown keys and ill-typed
/// values throw ConfigError.
RunConfig fromJson(nlohmann::json const& j, RunConfig base = {});

/// Checks names and rational fields, then the simulator's own validation.
void validate(RunConfig const& c);

struct SweepSpec
{
    std::vector<double> qs;
    std::uint32_t replicates = 1;
};

struct Preset
{
    std::string name;
    std::string description;
    RunConfig config;
    std::optional<SweepSpec> sweep;
};

std::vector<Preset> const& presets();

/// Throws ConfigError for unknown names.
Preset const& findPreset(std::string_view name);

} // namespace sybilsim::cli
