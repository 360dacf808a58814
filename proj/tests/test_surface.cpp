#include "doctest.h"
#include "support.hpp"

#include "gdg/fixtures.hpp"
#include "gdg/fuzz.hpp"
#include "gdg/gentle.hpp"
#include "gdg/surface.hpp"

#include <numeric>

using namespace gdg;

namespace {

int r_of(const ComponentData& c)
{
    return static_cast<int>(c.boundaries.size()) + c.circle_punctures + c.dot_punctures + c.singular_punctures;
}

// chi = 2 - 2g - r per component, with the graph's V - E corrected for
// punctured fans and for plain faces.
void check_euler(const RibbonSurface& s)
{
    auto inv = surface_invariants(s);
    for (const auto& c : inv.components) {
        CHECK(c.genus >= 0);
        CHECK(c.euler == c.vertices - c.edges);
        CHECK(c.vertices - c.edges + c.faces == 2 - 2 * c.genus);
        CHECK(c.euler - c.circle_punctures - c.singular_punctures + c.plain_faces == 2 - 2 * c.genus - r_of(c));
    }
}

// Every half-edge lies in exactly one face and one fan.
void check_orbits(const RibbonSurface& s)
{
    std::vector<int> seen_face(s.half_edges(), 0), seen_fan(s.half_edges(), 0);
    for (const auto& f : s.faces())
        for (int h : f) ++seen_face[h];
    for (const auto& f : s.fans())
        for (int h : f) ++seen_fan[h];
    for (int h = 0; h < s.half_edges(); ++h) {
        CHECK(seen_face[h] == 1);
        CHECK(seen_fan[h] == 1);
    }
}

std::map<std::string, int> shift_arc(const Presentation& p, std::map<std::string, int> G, int v, int s)
{
    for (const auto& a : p.arrows) {
        if (a.tgt == v) G[a.name] += s;
        if (a.src == v) G[a.name] -= s;
    }
    return G;
}

RibbonSurface split(RibbonSurface s)
{
    s.singularities.clear();
    s.singularity_names.clear();
    return s;
}

} // namespace

TEST_CASE("lambda0 and lambda1 are annuli")
{
    for (const auto& p : {fixtures::lambda0(), fixtures::lambda1()}) {
        auto s = surface_from_gentle(p);
        auto inv = surface_invariants(s);
        REQUIRE(inv.components.size() == 1);
        const auto& c = inv.components[0];
        CHECK(c.genus == 0);
        REQUIRE(c.boundaries.size() == 2);
        for (const auto& b : c.boundaries) {
            CHECK(b.circles == b.dots);
            CHECK(b.winding == 0);
        }
        CHECK(c.circle_punctures + c.dot_punctures + c.singular_punctures == 0);
        CHECK(is_admissible(s));
        check_euler(s);
        check_orbits(s);
    }
    auto lines = format_surface(surface_invariants(surface_from_gentle(fixtures::lambda0())));
    REQUIRE(lines.size() == 1);
    CHECK(lines[0] ==
          "component 0: genus 0, boundaries [(○=3, ●=3, w=0), (○=3, ●=3, w=0)], punctures (○=0, ●=0), singularities=0");
}

TEST_CASE("disks, the Kronecker annulus and disjoint unions")
{
    auto disk = surface_invariants(surface_from_gentle(parse_presentation("[vertices]\nv\n")));
    REQUIRE(disk.components.size() == 1);
    REQUIRE(disk.components[0].boundaries.size() == 1);
    CHECK(disk.components[0].boundaries[0].circles == 2);
    CHECK(disk.components[0].boundaries[0].dots == 2);
    CHECK(disk.components[0].vertices - disk.components[0].edges == 1);

    auto two = surface_invariants(surface_from_gentle(parse_presentation("[vertices]\nv\nw\n")));
    CHECK(two.components.size() == 2);

    auto K = surface_invariants(surface_from_gentle(fixtures::kronecker()));
    REQUIRE(K.components.size() == 1);
    CHECK(K.components[0].genus == 0);
    REQUIRE(K.components[0].boundaries.size() == 2);
    for (const auto& b : K.components[0].boundaries) {
        CHECK(b.circles == 1);
        CHECK(b.dots == 1);
    }
    CHECK_THROWS_AS(surface_from_gentle(
                        parse_presentation("[vertices]\nv\nw\n[arrows]\na : v -> w @ 0\nb : v -> w @ 0\nc : v -> w @ 0\n")),
                    SurfaceError);
}

TEST_CASE("winding numbers on fixtures")
{
    for (const auto& p : {fixtures::lambda0(), fixtures::lambda1(), fixtures::lambda1(2), fixtures::kronecker(),
                          fixtures::a3()}) {
        auto rep = boundary_winding_numbers(p, presentation_grading(p));
        CHECK(rep.identity_holds);
    }
    auto w1 = boundary_winding_numbers(fixtures::lambda1(), presentation_grading(fixtures::lambda1()));
    CHECK(w1.windings == std::vector<int>{0, 0});
    auto disk = boundary_winding_numbers(parse_presentation("[vertices]\nv\n"), {});
    CHECK(disk.windings == std::vector<int>{2});
}

TEST_CASE("kronecker_curve_winding")
{
    auto p = fixtures::lambda1();
    auto k = find_graded_kroneckers(p).at(0);
    auto G = presentation_grading(p);
    CHECK(kronecker_curve_winding(p, k, G) == 0);
    G["alpha"] = 2;
    G["beta"] = 0;
    CHECK(kronecker_curve_winding(p, k, G) == 2);
    Kronecker swapped = k;
    std::swap(swapped.alpha, swapped.beta);
    CHECK(kronecker_curve_winding(p, swapped, G) == -2);
    // The two annulus boundaries carry +-(|alpha| - |beta|).
    auto rep = boundary_winding_numbers(p, G);
    CHECK(rep.identity_holds);
    CHECK(std::accumulate(rep.windings.begin(), rep.windings.end(), 0) == 0);
    CHECK(std::find(rep.windings.begin(), rep.windings.end(), 2) != rep.windings.end());
    CHECK(std::find(rep.windings.begin(), rep.windings.end(), -2) != rep.windings.end());
}

TEST_CASE("property: winding identity over random gradings and regrading invariance")
{
    auto insts = fuzz::surface_instances(10, 1000);
    REQUIRE(insts.size() == 10);
    for (const auto& inst : insts) {
        const auto& p = inst.presentation;
        auto s = surface_from_gentle(p);
        CHECK(is_admissible(s));
        check_euler(s);
        check_orbits(s);
        for (std::uint64_t g = 0; g < 50; ++g) {
            auto G = fuzz::random_grading(p, inst.seed * 100 + g);
            auto rep = boundary_winding_numbers(p, G);
            CHECK_MESSAGE(rep.identity_holds, "seed " << inst.seed << " grading " << g);
            test::Rng rng(g);
            int v = rng.range(0, static_cast<int>(p.vertices.size()) - 1);
            auto shifted = boundary_winding_numbers(p, shift_arc(p, G, v, rng.range(1, 3)));
            CHECK(shifted.windings == rep.windings);
        }
    }
}

TEST_CASE("pinched lambda1: two disks joined at one singularity")
{
    auto q = fixtures::lambda1_pinched();
    auto s = pinched_surface(q);
    auto inv = surface_invariants(s);
    REQUIRE(inv.components.size() == 2);
    REQUIRE(inv.singularity_components.size() == 1);
    CHECK(inv.singularity_components[0].first != inv.singularity_components[0].second);
    CHECK(s.singularity_names == std::vector<std::string>{"gamma"});
    for (const auto& c : inv.components) {
        CHECK(c.genus == 0);
        REQUIRE(c.boundaries.size() == 1);
        CHECK(c.boundaries[0].circles == 3);
        CHECK(c.boundaries[0].dots == 3);
        CHECK(c.singular_punctures == 1);
    }
    CHECK(is_admissible(s));
    check_euler(s);
    CHECK(boundary_winding_numbers(s).identity_holds);
    CHECK(format_surface(surface_invariants(surface_of(q))) == format_surface(inv));
}

TEST_CASE("gentle input to pinched_surface changes nothing")
{
    for (const auto& p : {fixtures::lambda0(), fixtures::lambda1()})
        CHECK(format_surface(surface_invariants(pinched_surface(p))) ==
              format_surface(surface_invariants(surface_from_gentle(p))));
}

TEST_CASE("splitting singularities gives the surface of the resolution")
{
    auto check = [](const Presentation& q) {
        auto a = surface_invariants(split(pinched_surface(q)));
        auto b = surface_invariants(surface_from_gentle(resolve_loops(q).presentation));
        CHECK(format_surface(a) == format_surface(b));
    };
    check(fixtures::lambda1_pinched());
    for (const auto& inst : fuzz::pinched_instances(8, 3000)) check(inst.presentation);
}

TEST_CASE("double pinch gives two singularities")
{
    int done = 0;
    for (std::uint64_t seed = 1; done < 5 && seed < 500; ++seed) {
        fuzz::GentleSpec spec;
        spec.vertices = 6;
        spec.kroneckers = 2;
        auto inst = fuzz::random_gentle(seed, spec);
        auto p = inst.presentation;
        std::vector<std::string> loops;
        bool ok = true;
        for (const auto& [a, b] : inst.kroneckers) {
            auto k = kronecker_by_names(p, a, b);
            if (!k.acyclic) {
                ok = false;
                break;
            }
            auto pr = pinch(p, k);
            p = pr.presentation;
            loops.push_back(pr.loop);
        }
        if (!ok) continue;
        auto s = pinched_surface(p);
        CHECK(s.singularities.size() == 2);
        auto names = s.singularity_names;
        std::sort(names.begin(), names.end());
        std::sort(loops.begin(), loops.end());
        CHECK(names == loops);
        CHECK(is_admissible(s));
        check_euler(s);
        CHECK(boundary_winding_numbers(s).identity_holds);
        ++done;
    }
    CHECK(done == 5);
}

TEST_CASE("contraction check")
{
    auto L1 = fixtures::lambda1();
    auto rep = contraction_check(L1, find_graded_kroneckers(L1).at(0));
    CHECK(rep.ok);
    CHECK(rep.separating);
    CHECK(rep.pinched_side == rep.contracted_side);
    CHECK(std::find(rep.lines.begin(), rep.lines.end(),
                    "tuple match (invariant tuples only, not a homeomorphism test)") != rep.lines.end());

    auto insts = fuzz::contraction_instances(10, 2000);
    REQUIRE(insts.size() == 10);
    int sep = 0;
    for (const auto& inst : insts) {
        const auto& p = inst.presentation;
        auto k = kronecker_by_names(p, inst.kroneckers[0].first, inst.kroneckers[0].second);
        auto r = contraction_check(p, k);
        CHECK_MESSAGE(r.ok, "seed " << inst.seed);
        auto before = surface_from_gentle(p).components().size();
        auto cut = cut_along_kronecker(surface_from_gentle(p), p, k);
        CHECK(cut.components().size() == before + (r.separating ? 1 : 0));
        CHECK(is_admissible(cut));
        check_euler(cut);
        CHECK(boundary_winding_numbers(cut).identity_holds);
        sep += r.separating;
    }
    CHECK(sep == 5);
}
