#include "gdg/fixtures.hpp"

namespace gdg::fixtures {

namespace {

Term term(std::vector<std::string> arrows, Scalar c = 1)
{
    Term t;
    t.coeff = c;
    t.arrows = std::move(arrows);
    return t;
}

} // namespace

Presentation lambda1(int kdeg)
{
    PresentationBuilder b;
    for (const char* v : {"0", "0~", "1", "2", "3", "3~"}) b.add_vertex(v);
    b.add_arrow("alpha-", "0", "1", 0);
    b.add_arrow("beta-", "0~", "1", 0);
    b.add_arrow("alpha", "1", "2", kdeg);
    b.add_arrow("beta", "1", "2", kdeg);
    b.add_arrow("alpha+", "2", "3", 0);
    b.add_arrow("beta+", "2", "3~", 0);
    b.add_relation({term({"alpha+", "beta"})});
    b.add_relation({term({"beta", "alpha-"})});
    b.add_relation({term({"beta+", "alpha"})});
    b.add_relation({term({"alpha", "beta-"})});
    return b.build();
}

Presentation lambda1_pinched()
{
    PresentationBuilder b;
    for (const char* v : {"0", "0~", "1", "3", "3~"}) b.add_vertex(v);
    b.add_arrow("alpha-", "0", "1", 0);
    b.add_arrow("beta-", "0~", "1", 0);
    b.add_arrow("alpha+", "1", "3", 0);
    b.add_arrow("beta+", "1", "3~", 0);
    b.add_arrow("gamma", "1", "1", 0);
    b.add_relation({term({"alpha+", "beta-"})});
    b.add_relation({term({"beta+", "alpha-"})});
    b.add_relation({term({"beta+", "gamma"}), term({"beta+"})});
    b.add_relation({term({"gamma", "beta-"}), term({"beta-"})});
    b.add_relation({term({"alpha+", "gamma"}), term({"alpha+"}, -1)});
    b.add_relation({term({"gamma", "alpha-"}), term({"alpha-"}, -1)});
    return with_pinched(b.build(), {"gamma"});
}

Presentation lambda0()
{
    PresentationBuilder b;
    for (const char* v : {"0", "1", "2", "3", "4", "5"}) b.add_vertex(v);
    b.add_arrow("a", "0", "1", 0);
    b.add_arrow("b", "1", "2", -1);
    b.add_arrow("c", "2", "3", 1);
    b.add_arrow("d", "3", "4", 0);
    b.add_arrow("e", "5", "4", -1);
    b.add_arrow("f", "0", "5", 0);
    b.add_relation({term({"d", "c"})});
    return b.build();
}

Presentation kronecker()
{
    PresentationBuilder b;
    b.add_vertex("1");
    b.add_vertex("2");
    b.add_arrow("alpha", "1", "2", 0);
    b.add_arrow("beta", "1", "2", 0);
    return b.build();
}

Presentation a3()
{
    PresentationBuilder b;
    for (const char* v : {"1", "2", "3"}) b.add_vertex(v);
    b.add_arrow("a", "1", "2", 0);
    b.add_arrow("b", "2", "3", 0);
    return b.build();
}

} // namespace gdg::fixtures
