#include "eqlearn/rng.hpp"

#include <stdexcept>

namespace eqlearn {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t state = master;
    std::uint64_t mixed = splitmix64(state) ^ index;
    return splitmix64(mixed);
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0)
        throw std::invalid_argument("Rng::below: zero bound");
    // rejection sampling removes modulo bias
    std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    for (;;) {
        std::uint64_t r = next();
        if (r <= limit)
            return r % bound;
    }
}

Rational Rng::unit()
{
    Rational r(to_mpz(next()), mpz_class(1) << 64);
    r.canonicalize();
    return r;
}

Rational Rng::open_unit()
{
    Rational r(2 * to_mpz(next()) + 1, mpz_class(1) << 65);
    r.canonicalize();
    return r;
}

} // namespace eqlearn
