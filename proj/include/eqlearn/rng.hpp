#pragma once

#include "eqlearn/rational.hpp"

#include <cstdint>
#include <random>

namespace eqlearn {

/// One step of the SplitMix64 sequence. Advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seed for the `index`-th independent stream under `master`. Depends only on
/// the pair, so parallel execution order cannot change what a trial sees.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded 64-bit generator (mt19937_64). Only raw engine output is used; the
/// standard distributions are implementation-defined and would break
/// cross-platform reproducibility.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform variate r / 2^64 on the grid {0, 1/2^64, ..., 1 - 1/2^64}.
    Rational unit();

    /// Midpoint variate (2r + 1) / 2^65; never 0 and never 1.
    Rational open_unit();

    Rng split() { return Rng(derive_seed(seed_, next())); }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

} // namespace eqlearn
