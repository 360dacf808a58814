// Small helpers shared by the test executables.
#pragma once

#include "gdg/quiver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gdg::test {

// splitmix64; enough for choosing coefficients and indices.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next()
    {
        std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

inline std::vector<std::string> path_names(const Presentation& p, const std::vector<Path>& paths)
{
    std::vector<std::string> out;
    for (const auto& x : paths) out.push_back(p.format_path(x));
    return out;
}

} // namespace gdg::test
