#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace sybilsim
{

/// SplitMix64 finalizer; used to derive independent seeds from
/// (base seed, index) pairs.
constexpr std::uint64_t
mixSeed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// The single random stream of a simulation.
///
/// Engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so the
/// draws below are built directly on the raw 64-bit output to keep runs
/// bit-reproducible across toolchains:
///   - index(n): rejection sampling on the top of the 64-bit range;
///   - unit(): top 53 bits scaled to [0, 1);
///   - shuffle: Fisher-Yates from the back using index().
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed)
    {
    }

    std::uint64_t
    next()
    {
        return engine_();
    }

    /// Uniform integer in [0, n). n must be positive.
    std::size_t
    index(std::size_t n)
    {
        auto const bound = static_cast<std::uint64_t>(n);
        auto const limit = UINT64_MAX - (UINT64_MAX % bound);
        std::uint64_t x;
        do
        {
            x = engine_();
        } while (x >= limit);
        return static_cast<std::size_t>(x % bound);
    }

    double
    unit()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// P(true) = p. p <= 0 never fires; p >= 1 always fires.
    bool
    bernoulli(double p)
    {
        return unit() < p;
    }

    template <typename T>
    void
    shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i)
        {
            std::swap(items[i - 1], items[index(i)]);
        }
    }

    template <typename T>
    T const&
    pick(std::span<T const> items)
    {
        return items[index(items.size())];
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace sybilsim
