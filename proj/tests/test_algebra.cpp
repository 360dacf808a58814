#include "doctest.h"
#include "support.hpp"

#include "gdg/fixtures.hpp"
#include "gdg/gentle.hpp"
#include "gdg/path_basis.hpp"
#include "gdg/transforms.hpp"

using namespace gdg;

namespace {

const char* kLoopOnly = R"([vertices]
v
[arrows]
x : v -> v @ 0
)";

Element random_element(const TruncatedAlgebra& A, int i, int j, test::Rng& rng)
{
    Element e;
    for (const auto& path : A.basis(i, j))
        if (rng.range(0, 2) != 0) e[path] = Scalar(rng.range(-3, 3), rng.range(1, 3));
    return element_normalize(A.field(), e);
}

} // namespace

TEST_CASE("parse: lambda1 counts and round trip")
{
    auto p = parse_presentation(serialize(fixtures::lambda1()));
    CHECK(p.vertices.size() == 6);
    CHECK(p.arrows.size() == 6);
    CHECK(p.relations.size() == 4);
    for (const auto& a : p.arrows) CHECK(a.degree == 0);
    for (const auto& q : {fixtures::lambda0(), fixtures::lambda1(), fixtures::lambda1(3), fixtures::lambda1_pinched(),
                          fixtures::kronecker(), fixtures::a3()}) {
        auto text = serialize(q);
        CHECK(serialize(parse_presentation(text)) == text);
    }
}

TEST_CASE("parse: empty quiver and errors")
{
    auto p = parse_presentation("[vertices]\nv\n");
    CHECK(p.vertices.size() == 1);
    CHECK(p.arrows.empty());

    try {
        parse_presentation("[vertices]\n1\n2\n[arrows]\na : 1 -> 2 @ 0\n[relations]\na zz\n");
        FAIL("expected a parse error");
    } catch (const PresentationError& e) {
        CHECK(std::string(e.what()).find("zz") != std::string::npos);
        CHECK(e.line == 7);
    }
    CHECK_THROWS_AS(parse_presentation("[arrows]\na : 1 -> 2 @ 0\n"), PresentationError);
    CHECK_THROWS_AS(parse_presentation("[vertices]\n1\n[arrows]\na : 1 -> 1 @ x\n"), PresentationError);
}

TEST_CASE("parse_element reads sums with coefficients")
{
    auto p = fixtures::lambda1();
    auto e = parse_element(p, "2 * alpha - 1/3 * beta");
    REQUIRE(e.size() == 2);
    CHECK(e.at(p.path_of({"alpha"})) == Scalar(2));
    CHECK(e.at(p.path_of({"beta"})) == Scalar(-1, 3));
}

TEST_CASE("is_gentle")
{
    CHECK(is_gentle(fixtures::lambda1()).ok);
    CHECK(is_gentle(fixtures::kronecker()).ok);
    CHECK(is_gentle(fixtures::lambda0()).ok);
    CHECK(is_gentle(fixtures::a3()).ok);

    auto three = parse_presentation(
        "[vertices]\nv\nw\n[arrows]\na : v -> w @ 0\nb : v -> w @ 0\nc : v -> w @ 0\n");
    auto rep = is_gentle(three);
    CHECK_FALSE(rep.ok);
    CHECK(rep.clause == "at most two outgoing");

    // Two arrows after a with a c, b c both nonzero.
    auto branch = parse_presentation(
        "[vertices]\n1\n2\n3\n4\n[arrows]\nc : 1 -> 2 @ 0\na : 2 -> 3 @ 0\nb : 2 -> 4 @ 0\n");
    rep = is_gentle(branch);
    CHECK_FALSE(rep.ok);
    CHECK(rep.clause == "at most one c with c a not in I");
}

TEST_CASE("pinched_decompose")
{
    auto q = fixtures::lambda1_pinched();
    auto res = pinched_decompose(q);
    REQUIRE(res.ok);
    REQUIRE(res.decomposition.loops.size() == 1);
    CHECK(q.arrows[res.decomposition.loops[0]].name == "gamma");
    CHECK(res.decomposition.gentle_relations.size() == 2);
    CHECK(res.decomposition.pinched_relations.size() == 4);

    auto g = pinched_decompose(fixtures::lambda1());
    CHECK(g.ok);
    CHECK(g.decomposition.loops.empty());
    CHECK(g.decomposition.pinched_relations.empty());

    auto text = serialize(q);
    text = text.substr(0, text.find("[pinched]"));
    auto pos = text.find("gamma : 1 -> 1 @ 0");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 18, "gamma : 1 -> 1 @ 1");
    auto shifted = parse_presentation(text);
    auto bad = pinched_decompose(shifted, {"gamma"}, false);
    CHECK_FALSE(bad.ok);
    CHECK(bad.message.find("degree") != std::string::npos);
}

TEST_CASE("enumerate_paths on lambda1")
{
    auto p = fixtures::lambda1();
    int v0 = p.vertex_index("0"), v1 = p.vertex_index("1"), v2 = p.vertex_index("2"), v3 = p.vertex_index("3");
    auto b = enumerate_paths(p, v1, v2, 4);
    CHECK(test::path_names(p, b.paths) == std::vector<std::string>{"alpha", "beta"});
    CHECK(b.slack_stable);
    CHECK(b.length_stable);

    auto long_path = enumerate_paths(p, v0, v3, 4);
    REQUIRE(long_path.paths.size() == 1);
    CHECK(long_path.paths[0] == p.path_of({"alpha+", "alpha", "alpha-"}));

    for (int v = 0; v < static_cast<int>(p.vertices.size()); ++v) {
        auto t = enumerate_paths(p, v, v, 0);
        REQUIRE(t.paths.size() == 1);
        CHECK(t.paths[0] == Path::trivial(v));
    }
    CHECK(enumerate_paths(p, v2, v1, 6).paths.empty());
}

TEST_CASE("enumerate_paths on the pinched fixture")
{
    // No relation kills gamma^2, so e1 A e1 = <e1, gamma, gamma^2, ...>.
    auto q = fixtures::lambda1_pinched();
    int v1 = q.vertex_index("1");
    auto b = enumerate_paths(q, v1, v1, 5);
    CHECK(b.paths.size() == 6);
    CHECK_FALSE(b.length_stable);
    CHECK(enumerate_paths(q, q.vertex_index("0"), q.vertex_index("3"), 5).paths.size() == 1);
}

TEST_CASE("is_finite_dimensional")
{
    CHECK(is_finite_dimensional(fixtures::lambda1()).verdict == FiniteReport::Verdict::Finite);
    auto pinched = fixtures::lambda1_pinched();
    auto rp = is_finite_dimensional(pinched);
    CHECK(rp.verdict == FiniteReport::Verdict::Infinite);
    CHECK(rp.message.find("gamma") != std::string::npos);

    auto loop = parse_presentation(kLoopOnly);
    auto r = is_finite_dimensional(loop);
    CHECK(r.verdict == FiniteReport::Verdict::Infinite);
    REQUIRE(r.witness);
    CHECK(*r.witness == loop.path_of({"x"}));

    auto L1 = fixtures::lambda1();
    auto loc = localize(L1, find_graded_kroneckers(L1).at(0), Scalar(1)).presentation;
    auto rl = is_finite_dimensional(loc);
    CHECK(rl.verdict == FiniteReport::Verdict::Infinite);
    REQUIRE(rl.witness);
    CHECK(*rl.witness == loc.path_of({"alpha", "delta"}));
}

TEST_CASE("normal forms: reduce is idempotent and products associate")
{
    auto L1 = fixtures::lambda1();
    auto loc = localize(L1, find_graded_kroneckers(L1).at(0), Scalar(2)).presentation;
    for (const auto& q : {fixtures::lambda1_pinched(), L1, loc}) {
        TruncatedAlgebra A(q, 9);
        int n = static_cast<int>(q.vertices.size());
        test::Rng rng(17);
        for (int trial = 0; trial < 60; ++trial) {
            int i = rng.range(0, n - 1), j = rng.range(0, n - 1), k = rng.range(0, n - 1), l = rng.range(0, n - 1);
            auto a = random_element(A, i, j, rng);
            auto b = random_element(A, j, k, rng);
            auto c = random_element(A, k, l, rng);
            CHECK(A.reduce(A.reduce(a)) == A.reduce(a));
            // Keep lengths small enough that both bracketings stay inside the truncation.
            if (element_max_length(a) + element_max_length(b) + element_max_length(c) > 3) continue;
            CHECK(A.mul(A.mul(c, b), a) == A.mul(c, A.mul(b, a)));
            auto ab = A.mul(b, a);
            CHECK(A.from_coords(i, k, A.coords(i, k, ab)) == ab);
        }
    }
}

TEST_CASE("normal forms: localization relations hold")
{
    auto L1 = fixtures::lambda1();
    auto k = find_graded_kroneckers(L1).at(0);
    auto loc = localize(L1, k, Scalar(2)).presentation;
    TruncatedAlgebra A(loc, 6);
    Field F;
    auto omega = element_add(F, element_of(loc.path_of({"alpha"})), element_of(loc.path_of({"beta"}), Scalar(2)));
    auto delta = element_of(loc.path_of({"delta"}));
    int v1 = loc.vertex_index("1"), v2 = loc.vertex_index("2");
    CHECK(A.mul(delta, omega) == element_of(Path::trivial(v1)));
    CHECK(A.mul(omega, delta) == element_of(Path::trivial(v2)));
    // e1 A e1 grows by one (delta alpha)^n per length step.
    CHECK(A.basis(v1, v1).size() == 4);
}

TEST_CASE("prime field arithmetic")
{
    Field F(7);
    CHECK(F.mul(Scalar(3), F.inv(Scalar(3))) == Scalar(1));
    CHECK(F.normalize(Scalar(1, 2)) == Scalar(4));
    CHECK(F.residue(Scalar(-1)) == 6u);
    CHECK_THROWS(Field(8));
    CHECK(parse_rational("-1/3") == Scalar(-1, 3));
    CHECK(format_scalar(Scalar(-1, 3)) == "-1/3");
}
