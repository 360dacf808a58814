#include "doctest.h"
#include "support.hpp"

#include "gdg/fixtures.hpp"
#include "gdg/fuzz.hpp"
#include "gdg/gentle.hpp"
#include "gdg/twisted.hpp"

using namespace gdg;

namespace {

struct Setup {
    Presentation p;
    Kronecker k;
    std::shared_ptr<const TruncatedAlgebra> A;
    TwistedComplex B;
};

Setup lambda1_setup(int kdeg = 0, const Scalar& mu = Scalar(1))
{
    Setup s;
    s.p = fixtures::lambda1(kdeg);
    s.k = find_graded_kroneckers(s.p).at(0);
    s.A = std::make_shared<const TruncatedAlgebra>(s.p, 4);
    s.B = band_object(s.p, s.k, mu);
    return s;
}

bool d_squared_zero(const HomComplex& H)
{
    for (int i = 0; i < H.dim(); ++i)
        if (!H.differential(H.differential(i)).empty()) return false;
    return true;
}

} // namespace

TEST_CASE("band_object summands and entry degree")
{
    auto s = lambda1_setup();
    REQUIRE(s.B.size() == 2);
    CHECK(s.p.vertex_name(s.B.summands[0].vertex) == "2");
    CHECK(s.B.summands[0].shift == 0);
    CHECK(s.p.vertex_name(s.B.summands[1].vertex) == "1");
    CHECK(s.B.summands[1].shift == 1);
    CHECK(s.B.d[0][1] == parse_element(s.p, "alpha + beta"));
    CHECK(s.B.d[1][0].empty());

    auto s2 = lambda1_setup(2);
    CHECK(s2.B.summands[0].shift == 2);
    CHECK(s2.B.summands[1].shift == 1);
    // pre-tr degree of the entry: |alpha| + 1 - 2.
    CHECK(s2.p.degree(s2.p.path_of({"alpha"})) + s2.B.summands[1].shift - s2.B.summands[0].shift == 1);

    auto mu = lambda1_setup(0, Scalar(-1, 3));
    CHECK(mu.B.d[0][1] == parse_element(mu.p, "alpha - 1/3 * beta"));

    auto text = serialize(s.p);
    text.replace(text.find("beta : 1 -> 2 @ 0"), 17, "beta : 1 -> 2 @ 1");
    auto bad = parse_presentation(text);
    Kronecker forced = s.k;
    CHECK_THROWS_AS(band_object(bad, forced, Scalar(1)), TransformError);
    CHECK_THROWS_AS(band_object(s.p, s.k, Scalar(0)), TransformError);
}

TEST_CASE("validate_twisted")
{
    auto s = lambda1_setup();
    CHECK(validate_twisted(*s.A, s.B).ok);
    CHECK(validate_twisted(*s.A, TwistedComplex::projective(0)).ok);

    auto lower = s.B;
    std::swap(lower.d[0][1], lower.d[1][0]);
    auto rep = validate_twisted(*s.A, lower);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].find("triangular") != std::string::npos);

    auto wrong_degree = s.B;
    wrong_degree.summands[0].shift = 1;
    CHECK_FALSE(validate_twisted(*s.A, wrong_degree).ok);
}

TEST_CASE("twisted serialization round trip")
{
    auto s = lambda1_setup(0, Scalar(2));
    auto text = serialize(s.p) + serialize_twisted(s.p, s.B);
    auto back = parse_twisted(s.p, text);
    CHECK(serialize_twisted(s.p, back) == serialize_twisted(s.p, s.B));
    CHECK_THROWS_AS(parse_twisted(s.p, "[summands]\nnowhere 0\n"), PresentationError);
}

TEST_CASE("Hom(P1, B): basis alpha, beta, e1 with d e1 = omega")
{
    auto s = lambda1_setup();
    int v1 = s.p.vertex_index("1");
    HomComplex H(s.A, TwistedComplex::projective(v1), s.B);
    REQUIRE(H.dim() == 3);
    int ia = H.index(0, 0, s.p.path_of({"alpha"}));
    int ib = H.index(0, 0, s.p.path_of({"beta"}));
    int ie = H.index(1, 0, Path::trivial(v1));
    REQUIRE(ia >= 0);
    REQUIRE(ib >= 0);
    REQUIRE(ie >= 0);
    CHECK(H.basis()[ia].degree == 0);
    CHECK(H.basis()[ib].degree == 0);
    CHECK(H.basis()[ie].degree == -1);
    auto de = H.differential(ie);
    REQUIRE(de.size() == 2);
    // +-(alpha + beta); the sign depends on the shift convention.
    CHECK(de[0].second == de[1].second);
    CHECK(abs(de[0].second) == 1);
    CHECK(std::min(ia, ib) == de[0].first);
    CHECK(std::max(ia, ib) == de[1].first);
    auto c = cohomology(H, -5, 5);
    CHECK(c.dims[0] == 1);
    CHECK(c.total() == 1);
}

TEST_CASE("End(B) is K[x]/(x^2) with x in degree 1")
{
    auto s = lambda1_setup();
    HomComplex E(s.A, s.B, s.B);
    CHECK(E.dim() == 4);
    CHECK(d_squared_zero(E));
    auto c = cohomology(E, -5, 5);
    for (int n = -5; n <= 5; ++n) CHECK(c.dims[n] == (n == 0 || n == 1 ? 1 : 0));
    // The degree-0 class is the identity e1 + e2.
    REQUIRE(c.reps[0].size() == 1);
    auto id = sparse_axpy(Field(), Scalar(1), sparse_unit(E.index(0, 0, Path::trivial(s.B.summands[0].vertex))),
                          sparse_unit(E.index(1, 1, Path::trivial(s.B.summands[1].vertex))));
    CHECK(rank_of(Field(), {c.reps[0][0], id}) == 1);
}

TEST_CASE("End(B) stays K[x]/(x^2) with a nonzero path from 2 to 1")
{
    auto p = parse_presentation(
        "[vertices]\n1\n2\n[arrows]\nalpha : 1 -> 2 @ 0\nbeta : 1 -> 2 @ 0\nrho : 2 -> 1 @ 0\n"
        "[relations]\nrho alpha\nbeta rho\n");
    auto k = kronecker_by_names(p, "alpha", "beta");
    REQUIRE(k.acyclic);
    auto A = std::make_shared<const TruncatedAlgebra>(p, 5);
    for (const char* mu : {"1", "2", "-1/3"}) {
        auto B = band_object(p, k, parse_rational(mu));
        HomComplex E(A, B, B);
        CHECK(E.dim() == 8);
        CHECK(d_squared_zero(E));
        auto c = cohomology(E, -5, 5);
        for (int n = -5; n <= 5; ++n) CHECK(c.dims[n] == (n == 0 || n == 1 ? 1 : 0));
    }
}

TEST_CASE("Hom between projectives and the band on lambda1")
{
    auto s = lambda1_setup();
    for (const auto& v : s.p.vertices) {
        int i = s.p.vertex_index(v);
        HomComplex PB(s.A, TwistedComplex::projective(i), s.B);
        HomComplex BP(s.A, s.B, TwistedComplex::projective(i));
        CHECK(d_squared_zero(PB));
        CHECK(d_squared_zero(BP));
        int expect = v == "1" || v == "2" ? 1 : 0;
        CHECK_MESSAGE(cohomology(PB, -5, 5).total() == expect, "Hom(P" << v << ", B)");
        CHECK_MESSAGE(cohomology(BP, -5, 5).total() == expect, "Hom(B, P" << v << ")");
        HomComplex PP(s.A, TwistedComplex::projective(i), TwistedComplex::projective(i));
        for (int b = 0; b < PP.dim(); ++b) CHECK(PP.differential(b).empty());
    }
    int v2 = s.p.vertex_index("2");
    HomComplex P2B(s.A, TwistedComplex::projective(v2), s.B);
    auto c = cohomology(P2B, -5, 5);
    REQUIRE(c.reps[0].size() == 1);
    CHECK(c.reps[0][0] == SparseVec{{P2B.index(0, 0, Path::trivial(v2)), Scalar(1)}});
}

TEST_CASE("cone")
{
    auto s = lambda1_setup();
    int v1 = s.p.vertex_index("1"), v2 = s.p.vertex_index("2");
    HomComplex Id(s.A, TwistedComplex::projective(v1), TwistedComplex::projective(v1));
    auto id = sparse_unit(Id.index(0, 0, Path::trivial(v1)));
    auto C = cone(Id, id);
    REQUIRE(C.size() == 2);
    CHECK(C.d[0][1] == element_of(Path::trivial(v1)));
    CHECK(validate_twisted(*s.A, C).ok);
    HomComplex CC(s.A, C, C);
    CHECK(cohomology(CC, -5, 5).total() == 0);

    auto Z = cone(Id, SparseVec{});
    CHECK(Z.d[0][1].empty());
    CHECK(Z.d[1][0].empty());

    HomComplex W(s.A, TwistedComplex::projective(v1), TwistedComplex::projective(v2));
    auto omega = sparse_axpy(Field(), Scalar(1), sparse_unit(W.index(0, 0, s.p.path_of({"alpha"}))),
                             sparse_unit(W.index(0, 0, s.p.path_of({"beta"}))));
    auto Cw = cone(W, omega);
    CHECK(serialize_twisted(s.p, Cw) == serialize_twisted(s.p, s.B));

    HomComplex P1B(s.A, TwistedComplex::projective(v1), s.B);
    CHECK_THROWS(cone(P1B, sparse_unit(P1B.index(1, 0, Path::trivial(v1)))));
}

TEST_CASE("property: d^2 = 0, Euler characteristic, shift invariance")
{
    int checked = 0;
    for (const auto& inst : fuzz::pinched_instances(6, 500)) {
        const auto& q = inst.presentation;
        auto k = kronecker_by_names(q, inst.kroneckers[0].first, inst.kroneckers[0].second);
        auto A = std::make_shared<const TruncatedAlgebra>(q, longest_nonzero_path(q) + 1);
        test::Rng rng(inst.seed);
        auto B = band_object(q, k, Scalar(rng.range(1, 4), rng.range(1, 3)));
        std::vector<TwistedComplex> objects{B, shift(B, 1)};
        for (int t = 0; t < 3; ++t)
            objects.push_back(TwistedComplex::projective(rng.range(0, static_cast<int>(q.vertices.size()) - 1),
                                                         rng.range(-1, 1)));
        for (const auto& X : objects)
            for (const auto& Y : objects) {
                HomComplex H(A, X, Y);
                CHECK(d_squared_zero(H));
                auto c = cohomology(H, -8, 8);
                int chi_c = 0, chi_h = 0;
                for (int n = -8; n <= 8; ++n) {
                    int sign = n % 2 == 0 ? 1 : -1;
                    chi_c += sign * static_cast<int>(H.degree_part(n).size());
                    chi_h += sign * c.dims[n];
                }
                CHECK(chi_c == chi_h);
                for (int kk : {-1, 2}) {
                    HomComplex Hs(A, X, shift(Y, kk));
                    auto cs = cohomology(Hs, -6, 6);
                    for (int n = -6; n <= 6; ++n) CHECK(cs.dims[n] == c.dims[n + kk]);
                }
                ++checked;
            }
    }
    CHECK(checked == 150);
}
