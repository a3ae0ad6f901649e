#pragma once

#include <cstdint>
#include <random>

namespace wbchart {

// Seeded random stream. Child streams derived with split() are a pure
// function of (parent seed, index), so replication i always sees the same
// numbers no matter which thread runs it or in which order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed);

    RngStream split(std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1) with 53 random bits.
    double uniform_open();

    // Uniform integer in [0, bound). bound must be positive.
    std::uint64_t uniform_index(std::uint64_t bound);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace wbchart
