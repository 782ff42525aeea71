#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#if defined(SYBILSIM_FLOAT_AMOUNT)
#define SYBILSIM_ABI fp
#else
#include <gmpxx.h>
#define SYBILSIM_ABI exact
#endif

// Code that depends on the arithmetic backend lives in the inline namespace
// sybilsim::exact or sybilsim::fp, so both builds of the core library can be
// linked into one program.
namespace sybilsim::inline SYBILSIM_ABI
{

#if defined(SYBILSIM_FLOAT_AMOUNT)
/// Coin quantity, floating-point build. Identity checks use kTolerance.
using Amount = long double;
inline constexpr bool kExactArithmetic = false;
inline constexpr long double kTolerance = 1e-6L;
/// Fine residues below this are treated as settled.
inline constexpr long double kZeroSnap = 1e-12L;
#else
/// Exact non-negative coin quantity. Fine division produces arbitrary
/// rationals, so everything monetary is kept in GMP rationals.
using Amount = mpq_class;
inline constexpr bool kExactArithmetic = true;
#endif

/// -1, 0 or 1; the float build snaps |x| <= kZeroSnap to 0.
inline int
sign(Amount const& a)
{
#if defined(SYBILSIM_FLOAT_AMOUNT)
    return a > kZeroSnap ? 1 : (a < -kZeroSnap ? -1 : 0);
#else
    return sgn(a);
#endif
}

/// Equality for accounting identities: exact, or within kTolerance.
inline bool
approxEqual(Amount const& a, Amount const& b)
{
#if defined(SYBILSIM_FLOAT_AMOUNT)
    auto const d = a - b;
    return d <= kTolerance && -d <= kTolerance;
#else
    return a == b;
#endif
}

inline double
toDouble(Amount const& a)
{
#if defined(SYBILSIM_FLOAT_AMOUNT)
    return static_cast<double>(a);
#else
    return a.get_d();
#endif
}

Amount makeAmount(long num, long den);

/// Lossless text form: "num/den" (or "num") in the exact build, shortest
/// round-tripping decimal in the float build.
std::string formatAmount(Amount const& a);

/// Decimal rendering for plotting.
std::string formatAmountDecimal(Amount const& a);

/// Accepts "p/q", integers, and decimals such as "0.034" (converted exactly
/// in the exact build). Throws std::invalid_argument on malformed input.
Amount parseAmount(std::string_view s);

} // namespace sybilsim::inline SYBILSIM_ABI

namespace sybilsim
{

/// Simulation clock tick, 0-based.
using Round = std::uint32_t;

/// Dense identity handle. Ids are issued once and never reused, so an id
/// also indexes the node table.
struct NodeId
{
    std::uint32_t value = 0;

    constexpr auto operator<=>(NodeId const&) const = default;
};

inline std::ostream&
operator<<(std::ostream& os, NodeId id)
{
    return os << id.value;
}

enum class NodeType : std::uint8_t
{
    Honest,
    Corrupt,
    Sybil
};

constexpr bool
isGenuine(NodeType t)
{
    return t != NodeType::Sybil;
}

/// True when an edge between the two types is forbidden (honest-sybil).
constexpr bool
forbiddenPair(NodeType a, NodeType b)
{
    return (a == NodeType::Honest && b == NodeType::Sybil) ||
           (a == NodeType::Sybil && b == NodeType::Honest);
}

constexpr char
typeLetter(NodeType t)
{
    switch (t)
    {
    case NodeType::Honest:
        return 'H';
    case NodeType::Corrupt:
        return 'C';
    case NodeType::Sybil:
        return 'S';
    }
    return '?';
}

constexpr std::string_view
typeName(NodeType t)
{
    switch (t)
    {
    case NodeType::Honest:
        return "honest";
    case NodeType::Corrupt:
        return "corrupt";
    case NodeType::Sybil:
        return "sybil";
    }
    return "?";
}

inline NodeType
parseTypeLetter(std::string_view s)
{
    if (s == "H" || s == "h" || s == "honest")
        return NodeType::Honest;
    if (s == "C" || s == "c" || s == "corrupt")
        return NodeType::Corrupt;
    if (s == "S" || s == "s" || s == "sybil")
        return NodeType::Sybil;
    throw std::invalid_argument("unknown node type '" + std::string(s) + "'");
}

/// Population split by type.
struct TypeCounts
{
    std::uint32_t honest = 0;
    std::uint32_t corrupt = 0;
    std::uint32_t sybil = 0;

    std::uint32_t
    total() const
    {
        return honest + corrupt + sybil;
    }
    std::uint32_t
    genuine() const
    {
        return honest + corrupt;
    }
    std::uint32_t
    of(NodeType t) const
    {
        switch (t)
        {
        case NodeType::Honest:
            return honest;
        case NodeType::Corrupt:
            return corrupt;
        case NodeType::Sybil:
            return sybil;
        }
        return 0;
    }
    std::uint32_t&
    of(NodeType t)
    {
        switch (t)
        {
        case NodeType::Honest:
            return honest;
        case NodeType::Corrupt:
            return corrupt;
        default:
            return sybil;
        }
    }

    bool operator==(TypeCounts const&) const = default;
};

} // namespace sybilsim

template <> struct std::hash<sybilsim::NodeId>
{
    std::size_t
    operator()(sybilsim::NodeId id) const noexcept
    {
        return std::hash<std::uint32_t>{}(id.value);
    }
};
