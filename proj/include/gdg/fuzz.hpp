// Seeded random gentle and pinched-gentle presentations for property tests.
#pragma once

#include "gdg/transforms.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gdg::fuzz {

struct GentleSpec {
    int vertices = 6;
    int kroneckers = 0;        // planted parallel pairs on disjoint vertex pairs
    bool allow_cycles = false;  // closed fans (infinite-dimensional algebras)
    bool connected = true;
    int min_degree = -2;
    int max_degree = 2;
    int break_percent = 35;  // chance of starting a new fan between two ends
};

struct Instance {
    Presentation presentation;
    // Planted Kroneckers as (alpha, beta) names.
    std::vector<std::pair<std::string, std::string>> kroneckers;
    std::uint64_t seed = 0;
};

// Arcs are vertices; the 2n arc ends are shuffled into fans and consecutive
// ends of a fan give arrows. Relations are the composites that change end.
// Retries deterministically until the constraints hold.
Instance random_gentle(std::uint64_t seed, const GentleSpec& spec);

std::map<std::string, int> random_grading(const Presentation& p, std::uint64_t seed, int lo = -3, int hi = 3);

// Pinched-gentle instances: a gentle instance with two planted Kroneckers, the
// first one pinched. The remaining (acyclic) Kronecker is listed.
std::vector<Instance> pinched_instances(int count, std::uint64_t seed);

// Gentle instances with one acyclic planted Kronecker; both separating and
// nonseparating core curves appear once count >= 2.
std::vector<Instance> contraction_instances(int count, std::uint64_t seed);

// Connected gentle instances with at least one arrow (for surface properties).
std::vector<Instance> surface_instances(int count, std::uint64_t seed);

} // namespace gdg::fuzz
