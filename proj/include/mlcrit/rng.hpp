#pragma once

#include <cstdint>
#include <random>

namespace mlcrit {

// Deterministic random source. std::mt19937_64 has a standard-pinned output
// sequence; the integer draw below uses explicit rejection sampling because
// std::uniform_int_distribution is implementation-defined and would break
// cross-platform reproducibility of seeded runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
    std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
        std::uint64_t range = hi - lo + 1;
        if (range == 0) return engine_(); // full 64-bit range
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range + 1) % range;
        std::uint64_t draw;
        do {
            draw = engine_();
        } while (draw > limit);
        return lo + draw % range;
    }

    std::int64_t uniform_signed(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(uniform(0, static_cast<std::uint64_t>(hi - lo)));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace mlcrit
