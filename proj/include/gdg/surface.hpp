// Ribbon-graph model of (pinched) marked surfaces attached to gentle data.
#pragma once

#include "gdg/transforms.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace gdg {

struct SurfaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Half-edge h = 2 * arc + s is one end of an arc; iota(h) = h ^ 1. sigma(h) is
// the next end clockwise around the same circle point; the corner between h
// and sigma(h) is an arrow, or the boundary when the fan is linear and h is
// its last end.
struct Corner {
    bool gap = false;
    std::string arrow;  // empty for gaps and for corners made by cutting
    int degree = 0;
};

struct RibbonSurface {
    std::vector<std::string> arcs;
    std::vector<int> sigma;
    std::vector<Corner> corner;
    // Pairs of half-edges lying on the two circle punctures of a singularity.
    std::vector<std::pair<int, int>> singularities;
    std::vector<std::string> singularity_names;
    // Half-edges whose face carries no dot label (only built by cutting).
    std::set<int> plain_faces;

    int half_edges() const { return static_cast<int>(sigma.size()); }
    // Face walks under phi = sigma o iota, each starting at its least half-edge.
    std::vector<std::vector<int>> faces() const;
    // Circle points: sigma orbits, each starting at its least half-edge.
    std::vector<std::vector<int>> fans() const;
    bool fan_is_cyclic(const std::vector<int>& fan) const;
    // Connected components as arc lists (singularities do not connect).
    std::vector<std::vector<int>> components() const;
};

RibbonSurface surface_from_gentle(const Presentation& p);
// Resolves pinched loops, builds the gentle surface, pairs the loop punctures.
RibbonSurface pinched_surface(const Presentation& p);
// Gentle or pinched, as the presentation says.
RibbonSurface surface_of(const Presentation& p);
// Replaces every corner degree by the arrow degrees in G (arrow name -> degree).
RibbonSurface regrade(const RibbonSurface& s, const Presentation& p, const std::map<std::string, int>& G);

struct BoundaryData {
    int circles = 0;  // circle marked points on this boundary
    int dots = 0;
    int winding = 0;
    std::vector<int> face;
};
struct ComponentData {
    std::vector<int> arcs;
    int vertices = 0;  // circle points
    int edges = 0;
    int faces = 0;
    int euler = 0;  // V - E
    int genus = 0;
    std::vector<BoundaryData> boundaries;
    int circle_punctures = 0;  // not part of a singularity
    int dot_punctures = 0;
    int singular_punctures = 0;
    int plain_faces = 0;
    std::vector<int> puncture_windings;  // all punctures, circle ones first
};
struct SurfaceInvariants {
    std::vector<ComponentData> components;
    // Component indices joined by each singularity.
    std::vector<std::pair<int, int>> singularity_components;
};
SurfaceInvariants surface_invariants(const RibbonSurface& s);
std::vector<std::string> format_surface(const SurfaceInvariants& inv);

// Every polygon (boundary segment between consecutive circle points, or
// closed face) carries exactly one dot.
bool is_admissible(const RibbonSurface& s);

struct WindingReport {
    std::vector<std::string> labels;
    std::vector<int> windings;  // boundaries, then punctures, per component
    bool identity_holds = true;  // sum = 4 - 2r - 4g on every component
    std::vector<std::string> lines;
};
WindingReport boundary_winding_numbers(const Presentation& p, const std::map<std::string, int>& G);
WindingReport boundary_winding_numbers(const RibbonSurface& s);

// G(alpha) - G(beta).
int kronecker_curve_winding(const Presentation& p, const Kronecker& k, const std::map<std::string, int>& G);
std::map<std::string, int> presentation_grading(const Presentation& p);

// Cuts the ribbon surface along the core curve of the Kronecker two-gon and
// caps the two new circles with paired circle punctures.
RibbonSurface cut_along_kronecker(const RibbonSurface& s, const Presentation& p, const Kronecker& k);

struct ContractionReport {
    bool ok = true;
    bool separating = false;
    std::vector<std::string> pinched_side;
    std::vector<std::string> contracted_side;
    std::vector<std::string> lines;
};
ContractionReport contraction_check(const Presentation& p, const Kronecker& k);

} // namespace gdg
