#include "sybilsim/cli/config.hpp"

#include "sybilsim/cli/backend.hpp"
#include "sybilsim/errors.hpp"

#include <set>

namespace sybilsim::cli
{

std::string_view
arithmeticName(Arithmetic a)
{
    return a == Arithmetic::Exact ? "exact" : "float";
}

Arithmetic
parseArithmetic(std::string_view s)
{
    if (s == "exact")
        return Arithmetic::Exact;
    if (s == "float")
        return Arithmetic::Float;
    throw ConfigError("unknown arithmetic '" + std::string(s) +
                      "' (expected exact or float)");
}

nlohmann::json
toJson(RunConfig const& c)
{
    return {
        {"name", c.name},
        {"honest", c.honest},
        {"corrupt", c.corrupt},
        {"sybil", c.sybil},
        {"degree", c.degree},
        {"rounds", c.rounds},
        {"variant", c.variant},
        {"exposure", c.exposure},
        {"alpha", c.alpha},
        {"p", c.p},
        {"q", c.q},
        {"seed", c.seed},
        {"ratio_check", c.ratioCheck},
        {"gamma", c.gamma},
        {"phi", c.phi},
        {"arithmetic", arithmeticName(c.arithmetic)},
    };
}

namespace
{

template <typename T>
T
get(nlohmann::json const& j, char const* key)
{
    try
    {
        return j.at(key).get<T>();
    }
    catch (nlohmann::json::exception const& e)
    {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

std::uint32_t
getCount(nlohmann::json const& j, char const* key)
{
    auto const& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(std::string("config field '") + key +
                          "' must be a non-negative integer");
    auto x = v.get<std::uint64_t>();
    if (x > 0xffffffffULL)
        throw ConfigError(std::string("config field '") + key + "' too large");
    return static_cast<std::uint32_t>(x);
}

// Rationals may be given as strings ("1/3") or plain numbers.
std::string
getRational(nlohmann::json const& j, char const* key)
{
    auto const& v = j.at(key);
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_number())
        return v.dump();
    throw ConfigError(std::string("config field '") + key +
                      "' must be a string or number");
}

} // namespace

RunConfig
fromJson(nlohmann::json const& j, RunConfig c)
{
    if (!j.is_object())
        throw ConfigError("config must be a JSON object");
    static std::set<std::string> const known{
        "name",  "honest", "corrupt", "sybil",       "degree", "rounds",
        "variant", "exposure", "alpha", "p",         "q",      "seed",
        "ratio_check", "gamma", "phi", "arithmetic", "$schema"};
    for (auto const& [k, _] : j.items())
    {
        if (!known.count(k))
            throw ConfigError("unknown config field '" + k + "'");
    }
    if (j.contains("name"))
        c.name = get<std::string>(j, "name");
    if (j.contains("honest"))
        c.honest = getCount(j, "honest");
    if (j.contains("corrupt"))
        c.corrupt = getCount(j, "corrupt");
    if (j.contains("sybil"))
        c.sybil = getCount(j, "sybil");
    if (j.contains("degree"))
        c.degree = getCount(j, "degree");
    if (j.contains("rounds"))
        c.rounds = getCount(j, "rounds");
    if (j.contains("variant"))
        c.variant = get<std::string>(j, "variant");
    if (j.contains("exposure"))
        c.exposure = get<std::string>(j, "exposure");
    if (j.contains("alpha"))
        c.alpha = getRational(j, "alpha");
    if (j.contains("p"))
        c.p = get<double>(j, "p");
    if (j.contains("q"))
        c.q = get<double>(j, "q");
    if (j.contains("seed"))
        c.seed = get<std::uint64_t>(j, "seed");
    if (j.contains("ratio_check"))
        c.ratioCheck = get<bool>(j, "ratio_check");
    if (j.contains("gamma"))
        c.gamma = getRational(j, "gamma");
    if (j.contains("phi"))
        c.phi = getRational(j, "phi");
    if (j.contains("arithmetic"))
        c.arithmetic = parseArithmetic(get<std::string>(j, "arithmetic"));
    return c;
}

void
validate(RunConfig const& c)
{
    if (c.arithmetic == Arithmetic::Exact)
        exact::checkConfig(c);
    else
        fp::checkConfig(c);
}

// ---------------------------------------------------------------------------
// Presets

std::vector<Preset> const&
presets()
{
    static std::vector<Preset> const all = [] {
        std::vector<Preset> v;

        RunConfig s;
        s.name = "static-paper";
        s.rounds = 500;
        s.variant = "static";
        s.exposure = "round-robin";
        s.arithmetic = Arithmetic::Exact;
        v.push_back({s.name,
                     "static community, 60/40/20, d=6, 500 rounds, exact arithmetic",
                     s, std::nullopt});

        RunConfig r = s;
        r.name = "regen-paper";
        r.rounds = 10000;
        r.variant = "regenerating";
        r.arithmetic = Arithmetic::Float;
        v.push_back({r.name,
                     "regenerating sybils, per-round fines, 10000 rounds",
                     r, std::nullopt});

        RunConfig p = r;
        p.name = "prob-paper";
        p.variant = "probabilistic";
        p.exposure = "bernoulli";
        p.p = 0.034;
        p.q = 0.0017;
        v.push_back({p.name,
                     "probabilistic exposure p=0.034, genuine departure q=0.0017",
                     p, std::nullopt});

        RunConfig w = p;
        w.name = "sweep-paper";
        v.push_back({w.name,
                     "probabilistic runs for q in {0, p/20, p/4, p/2, p}, 3 replicates",
                     w, SweepSpec{{0.0, 0.0017, 0.0085, 0.017, 0.034}, 3}});
        return v;
    }();
    return all;
}

Preset const&
findPreset(std::string_view name)
{
    for (auto const& p : presets())
    {
        if (p.name == name)
            return p;
    }
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

} // namespace sybilsim::cli
