// Gentle and pinched-gentle recognition, nonzero-composite graphs.
#pragma once

#include "gdg/quiver.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace gdg {

struct GentleReport {
    bool ok = true;
    std::string clause;
    std::string witness;
};

// Single-term, coefficient-one path of length two: "b a" gives first=a, second=b.
bool monomial_pair(const Element& r, int& first, int& second);

GentleReport is_gentle(const Presentation& p);
GentleReport is_gentle_part(const Presentation& p, const std::vector<int>& arrows,
                            const std::vector<int>& relations);

struct DecomposeResult {
    bool ok = false;
    std::string message;
    Decomposition decomposition;
    // Equal to the input unless normalization rewrote some loops.
    Presentation presentation;
    std::vector<std::string> normalized_loops;
};

// Loops are taken from `declared` when nonempty, else from p's decomposition,
// else detected from relations containing a trivial path.
DecomposeResult pinched_decompose(const Presentation& p, const std::vector<std::string>& declared, bool normalize);
DecomposeResult pinched_decompose(const Presentation& p, bool normalize = false);

// Gentle arrows plus the zero pairs (first, then) of I^g.
struct GentleView {
    std::vector<int> arrows;
    std::set<std::pair<int, int>> zero;
    std::vector<int> loops;  // pinched loops, excluded from arrows
    bool in_view(int a) const;
    bool nonzero(int first, int then) const { return zero.count({first, then}) == 0; }
};

// Requires a decomposition or a gentle (monomial length-two) presentation.
GentleView gentle_view(const Presentation& p);

// Cycle in the arrow graph whose edges are nonzero composites. When `through`
// is set, only cycles through that arrow count. Returned in written order.
std::optional<Path> nonzero_cycle(const Presentation& p, const GentleView& g, int through = -1);
// Plain quiver cycle through an arrow (ignores relations).
std::optional<Path> quiver_cycle(const Presentation& p, const std::vector<int>& arrows, int through);

void sort_relations(Presentation& p);

// Length of the longest nonzero composite of gentle arrows (pinched loops
// excluded). Throws std::invalid_argument when a nonzero cycle exists.
int longest_nonzero_path(const Presentation& p);

} // namespace gdg
