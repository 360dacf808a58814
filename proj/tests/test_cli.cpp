#include "doctest.h"

#include "cli.hpp"
#include "gdg/fixtures.hpp"
#include "gdg/quiver.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace gdg;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_comments(const std::string& text)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

// Fixture files written once per process.
const fs::path& fixture_dir()
{
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("gdg_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        auto r = run({"fixtures", d.string()});
        REQUIRE(r.code == 0);
        return d;
    }();
    return dir;
}

std::string fx(const char* name) { return (fixture_dir() / (std::string(name) + ".quiver")).string(); }

std::string write_temp(const std::string& name, const std::string& text)
{
    auto p = fixture_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

} // namespace

TEST_CASE("fixtures are byte-identical to the serialized presentations")
{
    CHECK(read_file(fx("lambda0")) == serialize(fixtures::lambda0()));
    CHECK(read_file(fx("lambda1")) == serialize(fixtures::lambda1()));
    CHECK(read_file(fx("lambda1_pinched")) == serialize(fixtures::lambda1_pinched()));
    for (const char* f : {"lambda0", "lambda1", "lambda1_pinched"}) {
        auto text = read_file(fx(f));
        CHECK(serialize(parse_presentation(text)) == text);
    }
}

TEST_CASE("validate")
{
    auto ok = run({"validate", fx("lambda1")});
    CHECK(ok.code == 0);
    CHECK(run({"validate", fx("lambda1_pinched")}).code == 0);
    auto bad = write_temp("three.quiver", "[vertices]\nv\nw\n[arrows]\na : v -> w @ 0\nb : v -> w @ 0\nc : v -> w @ 0\n");
    auto r = run({"validate", bad});
    CHECK(r.code == 1);
    CHECK((r.out + r.err).find("at most two outgoing") != std::string::npos);
    auto s = run({"validate", fx("lambda1"), "--format", "structured"});
    CHECK(s.out.find("gentle=true") != std::string::npos);
}

TEST_CASE("exit codes for usage and parse errors")
{
    CHECK(run({}).code == 2);
    CHECK(run({"validate", "/nonexistent/file.quiver"}).code == 2);
    CHECK(run({"validate", fx("lambda1"), "--format", "yaml"}).code == 2);
    CHECK(run({"quotient", fx("lambda1"), "--window", "5"}).code == 2);
    CHECK(run({"localize", fx("lambda1"), "--mu", "0"}).code != 0);
    auto broken = write_temp("broken.quiver", "[vertices]\n1\n[arrows]\na : 1 -> 9 @ 0\n");
    auto r = run({"validate", broken});
    CHECK(r.code == 1);
    CHECK(r.err.find("parse error") != std::string::npos);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("pinch reproduces the pinched fixture")
{
    auto r = run({"pinch", fx("lambda1"), "--kronecker", "alpha,beta"});
    REQUIRE(r.code == 0);
    CHECK(strip_comments(r.out) == read_file(fx("lambda1_pinched")));
    auto k = run({"kroneckers", fx("lambda1")});
    CHECK(k.out.find("(alpha, beta)") != std::string::npos);
    CHECK(k.out.find("acyclic=true") != std::string::npos);
}

TEST_CASE("localize, resolve, subalgebra outputs parse back")
{
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"localize", fx("lambda1"), "--mu", "-1/3"},
             {"resolve", fx("lambda1_pinched")},
             {"subalgebra", fx("lambda1"), "--vertices", "0,1,3", "--length-bound", "3"},
             {"band", fx("lambda1"), "--mu", "2"}}) {
        auto r = run(args);
        REQUIRE_MESSAGE(r.code == 0, args[0] << ": " << r.err);
        CHECK_NOTHROW(parse_presentation(r.out));
    }
}

TEST_CASE("band file feeds cohomology")
{
    auto band = run({"band", fx("lambda1")});
    REQUIRE(band.code == 0);
    auto file = write_temp("band.quiver", band.out);
    auto r = run({"cohomology", file, "--source", "B", "--target", "B"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("H^0 Hom(B, B): dim=1") != std::string::npos);
    CHECK(r.out.find("H^1 Hom(B, B): dim=1") != std::string::npos);
    CHECK(r.out.find("total=2") != std::string::npos);
}

TEST_CASE("quotient, ss-pages, einf-check, formality")
{
    auto q = run({"quotient", fx("lambda1"), "--pair", "1,1", "--filtration-max", "4", "--format", "structured"});
    REQUIRE(q.code == 0);
    CHECK(q.out.find("i=1 j=1 n=0 dim=5 stable=") != std::string::npos);
    CHECK(q.out.find("filtration_profile=[1,1,1,1,1]") != std::string::npos);

    for (const char* engine : {"reduction", "tower"}) {
        auto s = run({"ss-pages", fx("lambda1"), "--pair", "1,2", "--filtration-max", "3", "--engine", engine});
        CHECK_MESSAGE(s.code == 0, engine);
    }
    CHECK(run({"einf-check", fx("lambda1"), "--pair", "1,1", "--filtration-max", "5"}).code == 0);
    auto f = run({"formality", fx("lambda1"), "--filtration-max", "4", "--window", "-3:3"});
    CHECK(f.code == 0);
}

TEST_CASE("iso-check over Q and refusal in characteristic 2")
{
    auto ok = run({"iso-check", fx("lambda1"), "--mu", "2"});
    CHECK(ok.code == 0);
    auto two = run({"iso-check", fx("lambda1"), "--char", "2"});
    CHECK(two.code == 1);
    CHECK((two.out + two.err).find("characteristic") != std::string::npos);
    CHECK(run({"iso-check", fx("lambda1"), "--char", "4"}).code == 2);
}

TEST_CASE("surface, winding, contract-check")
{
    auto s = run({"surface", fx("lambda0")});
    REQUIRE(s.code == 0);
    CHECK(s.out.find("component 0: genus 0, boundaries [(○=3, ●=3, w=0), (○=3, ●=3, w=0)]") != std::string::npos);
    auto w = run({"winding", fx("lambda1_pinched")});
    CHECK(w.code == 0);
    CHECK(w.out.find("identity holds") != std::string::npos);
    auto c = run({"contract-check", fx("lambda1")});
    CHECK(c.code == 0);
    CHECK(c.out.find("core curve separating") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical")
{
    std::vector<std::vector<std::string>> cmds{
        {"validate", fx("lambda1_pinched")},
        {"decompose", fx("lambda1_pinched")},
        {"kroneckers", fx("lambda1")},
        {"localize", fx("lambda1"), "--mu", "2"},
        {"pinch", fx("lambda1")},
        {"resolve", fx("lambda1_pinched")},
        {"subalgebra", fx("lambda1"), "--vertices", "1,2"},
        {"band", fx("lambda1")},
        {"hom", fx("lambda1"), "--source", "1", "--target", "B"},
        {"cohomology", fx("lambda1"), "--source", "B", "--target", "2"},
        {"quotient", fx("lambda1"), "--pair", "2,1", "--filtration-max", "3"},
        {"ss-pages", fx("lambda1"), "--pair", "1,1", "--filtration-max", "3"},
        {"einf-check", fx("lambda1"), "--pair", "2,2", "--filtration-max", "4"},
        {"surface", fx("lambda1_pinched"), "--format", "structured"},
        {"winding", fx("lambda0")},
        {"contract-check", fx("lambda1")},
    };
    for (const auto& args : cmds) {
        auto a = run(args), b = run(args);
        CHECK_MESSAGE(a.code == 0, args[0] << ": " << a.err);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}
