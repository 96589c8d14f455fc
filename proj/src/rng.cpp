#include "doa/rng.hpp"

namespace doa {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::string_view tag) {
    // FNV-1a over the tag, folded into a splitmix chain with master/stream.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::uint64_t state = master;
    std::uint64_t a = splitmix64(state);
    state ^= stream + 0x9e3779b97f4a7c15ull;
    std::uint64_t b = splitmix64(state);
    state ^= h;
    std::uint64_t c = splitmix64(state);
    return a ^ (b << 1 | b >> 63) ^ c;
}

}  // namespace doa
