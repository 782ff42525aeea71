#include "sybilsim/types.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sybilsim::inline SYBILSIM_ABI
{

namespace
{

bool
allDigits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
    {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    }
    return true;
}

template <typename F>
std::string
shortest(F value)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{})
        return std::to_string(value);
    return std::string(buf.data(), ptr);
}

} // namespace

#if defined(SYBILSIM_FLOAT_AMOUNT)

Amount
makeAmount(long num, long den)
{
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    return static_cast<Amount>(num) / static_cast<Amount>(den);
}

std::string
formatAmount(Amount const& a)
{
    return shortest(a);
}

#else

Amount
makeAmount(long num, long den)
{
    if (den == 0)
        throw std::invalid_argument("zero denominator");
    Amount a(num, den);
    a.canonicalize();
    return a;
}

std::string
formatAmount(Amount const& a)
{
    return a.get_str();
}

#endif

std::string
formatAmountDecimal(Amount const& a)
{
    return shortest(toDouble(a));
}

Amount
parseAmount(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+'))
    {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    auto bad = [&] {
        return std::invalid_argument("malformed amount '" + std::string(text) +
                                     "'");
    };

    Amount out{};
    if (auto slash = s.find('/'); slash != std::string_view::npos)
    {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!allDigits(num) || !allDigits(den))
            throw bad();
#if defined(SYBILSIM_FLOAT_AMOUNT)
        Amount const d = std::stold(std::string(den));
        if (d == 0)
            throw bad();
        out = std::stold(std::string(num)) / d;
#else
        mpz_class n{std::string(num), 10};
        mpz_class d{std::string(den), 10};
        if (d == 0)
            throw bad();
        out = Amount(n, d);
        out.canonicalize();
#endif
    }
    else if (auto dot = s.find_first_of(".eE"); dot != std::string_view::npos)
    {
#if defined(SYBILSIM_FLOAT_AMOUNT)
        std::size_t used = 0;
        try
        {
            out = std::stold(std::string(s), &used);
        }
        catch (std::logic_error const&)
        {
            throw bad();
        }
        if (used != s.size() || !std::isfinite(out))
            throw bad();
#else
        std::string_view mant = s;
        long exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string_view::npos)
        {
            mant = s.substr(0, e);
            auto ex = s.substr(e + 1);
            bool negExp = false;
            if (!ex.empty() && (ex.front() == '-' || ex.front() == '+'))
            {
                negExp = ex.front() == '-';
                ex.remove_prefix(1);
            }
            if (!allDigits(ex) || ex.size() > 6)
                throw bad();
            exp10 = std::stol(std::string(ex));
            if (negExp)
                exp10 = -exp10;
        }
        auto const dp = mant.find('.');
        auto whole = mant.substr(0, dp);
        auto frac = dp == std::string_view::npos ? std::string_view{}
                                                 : mant.substr(dp + 1);
        if ((!whole.empty() && !allDigits(whole)) ||
            (!frac.empty() && !allDigits(frac)) ||
            (whole.empty() && frac.empty()))
            throw bad();
        std::string digits = std::string(whole) + std::string(frac);
        exp10 -= static_cast<long>(frac.size());
        mpz_class n{digits, 10};
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                      static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
        if (exp10 < 0)
            out = Amount(n, scale);
        else
            out = Amount(n * scale);
        out.canonicalize();
#endif
    }
    else
    {
        if (!allDigits(s))
            throw bad();
#if defined(SYBILSIM_FLOAT_AMOUNT)
        out = std::stold(std::string(s));
#else
        out = Amount(mpz_class(std::string(s), 10));
#endif
    }
    return negative ? Amount(-out) : out;
}

} // namespace sybilsim::inline SYBILSIM_ABI
