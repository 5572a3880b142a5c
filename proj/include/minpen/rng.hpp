#pragma once

#include <cstdint>
#include <random>

namespace minpen {

// Reproducible stream handle: (seed, stream) fully determines the generator
// state, so path i of a batch can be replayed in isolation. Distinct stream
// indices give decorrelated engines via seed_seq mixing.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    std::mt19937_64 engine() const {
        std::seed_seq seq{
            static_cast<std::uint32_t>(seed & 0xffffffffu),
            static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(stream & 0xffffffffu),
            static_cast<std::uint32_t>(stream >> 32)};
        return std::mt19937_64(seq);
    }

    RngStream advanced(std::uint64_t k) const { return {seed, stream + k}; }
};

}  // namespace minpen
