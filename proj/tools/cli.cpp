#include "cli.hpp"

#include "gdg/drinfeld.hpp"
#include "gdg/fixtures.hpp"
#include "gdg/gentle.hpp"
#include "gdg/surface.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gdg::cli {

namespace {

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void usage(const std::string& msg) { throw CliError{2, msg}; }

struct Options {
    std::string file;
    std::string kronecker;
    std::string mu = "1";
    std::string pair;
    std::string source = "B", target = "B";
    std::string vertices;
    std::string window = "-5:5";
    std::string format = "text";
    std::string engine = "reduction";
    int length_bound = 6;
    int slack = 2;
    int filtration_max = 6;
    std::uint64_t characteristic = 0;
    bool normalize = false;
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string yes(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<std::string>& v, const std::string& sep = ",")
{
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

// Text lines or key=value records, one per line.
class Emitter {
public:
    Emitter(std::ostream& os, bool structured) : os_(os), structured_(structured) {}
    bool structured() const { return structured_; }
    void line(const std::string& s) { os_ << s << "\n"; }
    void emit(const std::string& text, const std::vector<std::pair<std::string, std::string>>& rec)
    {
        if (!structured_) {
            if (!text.empty()) os_ << text << "\n";
            return;
        }
        for (size_t i = 0; i < rec.size(); ++i) os_ << (i ? " " : "") << rec[i].first << "=" << rec[i].second;
        os_ << "\n";
    }
    void raw(const std::string& s) { os_ << s; }

private:
    std::ostream& os_;
    bool structured_;
};

struct Context {
    Options o;
    Presentation p;
    std::string text;
    Field field;
    TruncationOptions topt;
    int lo = -5, hi = 5;
};

void load(Context& c)
{
    if (c.o.file.empty()) usage("an input file is required");
    if (!std::filesystem::exists(c.o.file)) usage("cannot open '" + c.o.file + "'");
    std::ifstream in(c.o.file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    c.text = ss.str();
    try {
        c.p = parse_presentation(c.text);
    } catch (const PresentationError& e) {
        throw CliError{1, std::string("parse error: ") + e.what()};
    }
}

void prepare(Context& c)
{
    const auto& o = c.o;
    if (o.format != "text" && o.format != "structured") usage("--format must be text or structured");
    if (o.characteristic != 0 && !is_prime(o.characteristic)) usage("--char must be 0 or a prime");
    c.field = Field(o.characteristic);
    if (o.length_bound < 1) usage("--length-bound must be >= 1");
    if (o.slack < 0) usage("--slack must be >= 0");
    if (o.filtration_max < 0) usage("--filtration-max must be >= 0");
    c.topt.slack = o.slack;
    c.topt.field = c.field;
    auto colon = o.window.find(':');
    if (colon == std::string::npos) usage("--window must be lo:hi");
    try {
        c.lo = std::stoi(o.window.substr(0, colon));
        c.hi = std::stoi(o.window.substr(colon + 1));
    } catch (const std::exception&) {
        usage("--window must be lo:hi with integers");
    }
    if (c.lo > c.hi) usage("--window lo exceeds hi");
}

Scalar mu_of(const Context& c)
{
    Scalar mu;
    try {
        mu = parse_rational(c.o.mu);
    } catch (const std::exception&) {
        usage("--mu must be a rational p/q");
    }
    if (sgn(mu) == 0) usage("--mu must be nonzero");
    return mu;
}

Kronecker kronecker_of(const Context& c)
{
    if (c.o.kronecker.empty()) {
        auto ks = find_graded_kroneckers(c.p);
        if (ks.size() == 1) return ks[0];
        usage("--kronecker alpha,beta is required (" + std::to_string(ks.size()) + " graded Kroneckers found)");
    }
    auto names = split(c.o.kronecker, ',');
    if (names.size() != 2) usage("--kronecker expects two arrow names a,b");
    try {
        return kronecker_by_names(c.p, names[0], names[1]);
    } catch (const std::exception& e) {
        usage(std::string("--kronecker: ") + e.what());
    }
}

int vertex_of(const Context& c, const std::string& name)
{
    int v = c.p.vertex_index(name);
    if (v < 0) usage("unknown vertex '" + name + "'");
    return v;
}

std::vector<std::pair<int, int>> pairs_of(const Context& c, const std::vector<int>& defaults)
{
    std::vector<std::pair<int, int>> out;
    if (!c.o.pair.empty()) {
        auto names = split(c.o.pair, ',');
        if (names.size() != 2) usage("--pair expects two vertex names i,j");
        out.push_back({vertex_of(c, names[0]), vertex_of(c, names[1])});
        return out;
    }
    for (int i : defaults)
        for (int j : defaults) out.push_back({i, j});
    return out;
}

std::vector<int> all_vertices(const Presentation& p)
{
    std::vector<int> v(p.vertices.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
    return v;
}

std::shared_ptr<const TruncatedAlgebra> algebra_of(const Context& c)
{
    return std::make_shared<const TruncatedAlgebra>(c.p, c.o.length_bound, c.topt);
}

// The band from the file's twisted blocks when present, else from --kronecker.
TwistedComplex band_of(const Context& c)
{
    if (c.text.find("[summands]") != std::string::npos) {
        try {
            return parse_twisted(c.p, c.text);
        } catch (const PresentationError& e) {
            throw CliError{1, std::string("twisted complex: ") + e.what()};
        }
    }
    try {
        return band_object(c.p, kronecker_of(c), mu_of(c));
    } catch (const TransformError& e) {
        throw CliError{1, e.what()};
    }
}

TwistedComplex object_of(const Context& c, const std::string& spec)
{
    if (spec == "B") return band_of(c);
    return TwistedComplex::projective(vertex_of(c, spec));
}

std::string object_label(const std::string& spec) { return spec == "B" ? "B" : "P_" + spec; }

// ---- subcommands ----

int cmd_validate(Context& c, Emitter& e)
{
    load(c);
    bool declared = c.p.decomposition.has_value();
    if (!declared) {
        auto g = is_gentle(c.p);
        if (g.ok) {
            e.emit("gentle: ok", {{"gentle", "true"}});
            return 0;
        }
        auto d = pinched_decompose(c.p, {}, false);
        if (d.ok && !d.decomposition.loops.empty()) {
            e.emit("gentle: no (" + g.clause + "); pinched gentle: ok", {{"gentle", "false"}, {"pinched", "true"}});
            return 0;
        }
        e.emit("gentle: FAIL clause=" + g.clause + (g.witness.empty() ? "" : " witness=" + g.witness),
               {{"gentle", "false"}, {"clause", g.clause}, {"witness", g.witness}});
        return 1;
    }
    auto d = pinched_decompose(c.p, {}, false);
    if (!d.ok) {
        e.emit("pinched gentle: FAIL " + d.message, {{"pinched", "false"}, {"message", d.message}});
        return 1;
    }
    e.emit("pinched gentle: ok (" + std::to_string(d.decomposition.loops.size()) + " loops)",
           {{"pinched", "true"}, {"loops", std::to_string(d.decomposition.loops.size())}});
    return 0;
}

int cmd_decompose(Context& c, Emitter& e)
{
    load(c);
    auto d = pinched_decompose(c.p, {}, c.o.normalize);
    if (!d.ok) {
        e.emit("decompose: FAIL " + d.message, {{"ok", "false"}, {"message", d.message}});
        return 1;
    }
    const Presentation& q = d.presentation;
    auto names = [&](const std::vector<int>& v) {
        std::vector<std::string> out;
        for (int a : v) out.push_back(q.arrows[a].name);
        return out;
    };
    auto rels = [&](const std::vector<int>& v) {
        std::vector<std::string> out;
        for (int r : v) out.push_back(q.format_element(q.relations[r]));
        return out;
    };
    const auto& D = d.decomposition;
    e.emit("gentle arrows: " + join(names(D.gentle_arrows), ", "), {{"gentle_arrows", join(names(D.gentle_arrows))}});
    e.emit("loops: " + join(names(D.loops), ", "), {{"loops", join(names(D.loops))}});
    for (const auto& r : rels(D.gentle_relations)) e.emit("gentle relation: " + r, {{"gentle_relation", r}});
    for (const auto& r : rels(D.pinched_relations)) e.emit("pinched relation: " + r, {{"pinched_relation", r}});
    auto nm = [&](int a) { return a < 0 ? std::string("-") : q.arrows[a].name; };
    for (const auto& r : D.roles)
        e.emit("loop " + nm(r.loop) + " at " + q.vertices[r.vertex] + ": alpha+=" + nm(r.alpha_plus) +
                   " alpha-=" + nm(r.alpha_minus) + " beta+=" + nm(r.beta_plus) + " beta-=" + nm(r.beta_minus),
               {{"loop", nm(r.loop)},
                {"vertex", q.vertices[r.vertex]},
                {"alpha_plus", nm(r.alpha_plus)},
                {"alpha_minus", nm(r.alpha_minus)},
                {"beta_plus", nm(r.beta_plus)},
                {"beta_minus", nm(r.beta_minus)}});
    if (!d.normalized_loops.empty())
        e.emit("normalized: " + join(d.normalized_loops, ", "), {{"normalized", join(d.normalized_loops)}});
    return 0;
}

int cmd_kroneckers(Context& c, Emitter& e)
{
    load(c);
    auto ks = find_graded_kroneckers(c.p);
    for (const auto& k : ks) {
        const auto& A = c.p.arrows;
        std::string w = k.witness ? c.p.format_path(*k.witness) : "-";
        e.emit("(" + A[k.alpha].name + ", " + A[k.beta].name + ") " + c.p.vertices[k.src] + " -> " +
                   c.p.vertices[k.tgt] + " degree " + std::to_string(A[k.alpha].degree) + " acyclic=" +
                   yes(k.acyclic) + " plain_acyclic=" + yes(k.plain_acyclic) +
                   " reading_discrepancy=" + yes(k.reading_discrepancy()) + " witness=" + w,
               {{"alpha", A[k.alpha].name},
                {"beta", A[k.beta].name},
                {"src", c.p.vertices[k.src]},
                {"tgt", c.p.vertices[k.tgt]},
                {"degree", std::to_string(A[k.alpha].degree)},
                {"acyclic", yes(k.acyclic)},
                {"plain_acyclic", yes(k.plain_acyclic)},
                {"reading_discrepancy", yes(k.reading_discrepancy())},
                {"witness", w}});
    }
    if (ks.empty()) e.emit("no graded Kroneckers", {{"count", "0"}});
    return 0;
}

int cmd_localize(Context& c, Emitter& e)
{
    load(c);
    auto k = kronecker_of(c);
    auto mu = mu_of(c);
    e.raw(serialize(localize(c.p, k, mu).presentation));
    return 0;
}

int cmd_pinch(Context& c, Emitter& e)
{
    load(c);
    auto k = kronecker_of(c);
    try {
        e.raw(serialize(pinch(c.p, k).presentation));
    } catch (const TransformError& ex) {
        throw CliError{1, ex.what()};
    }
    return 0;
}

int cmd_resolve(Context& c, Emitter& e)
{
    load(c);
    if (!c.p.decomposition) {
        auto d = pinched_decompose(c.p, {}, c.o.normalize);
        if (!d.ok) throw CliError{1, "not pinched gentle: " + d.message};
        c.p = with_pinched(d.presentation, [&] {
            std::vector<std::string> v;
            for (int l : d.decomposition.loops) v.push_back(d.presentation.arrows[l].name);
            return v;
        }());
    }
    auto rr = resolve_loops(c.p);
    for (const auto& lp : rr.pairing)
        e.line("# pairing: " + lp.loop + "@" + lp.vertex + " -> " + lp.loop_alpha + "@" + lp.vertex_alpha + ", " +
               lp.loop_beta + "@" + lp.vertex_beta);
    e.raw(serialize(rr.presentation));
    return 0;
}

int cmd_subalgebra(Context& c, Emitter& e)
{
    load(c);
    auto vs = split(c.o.vertices, ',');
    if (vs.empty()) usage("--vertices v1,v2,... is required");
    for (const auto& v : vs) vertex_of(c, v);
    auto res = idempotent_subalgebra(c.p, vs, c.o.length_bound);
    e.line("# stabilized=" + yes(res.stabilized) + (res.unresolved.empty() ? "" : " unresolved=" + res.unresolved));
    e.raw(serialize(res.presentation));
    return res.stabilized ? 0 : 1;
}

int cmd_band(Context& c, Emitter& e)
{
    load(c);
    auto k = kronecker_of(c);
    auto mu = mu_of(c);
    TwistedComplex B;
    try {
        B = band_object(c.p, k, mu);
    } catch (const TransformError& ex) {
        throw CliError{1, ex.what()};
    }
    auto rep = validate_twisted(*algebra_of(c), B);
    e.raw(serialize(c.p));
    e.raw(serialize_twisted(c.p, B));
    for (const auto& v : rep.violations) e.line("# violation: " + v);
    return rep.ok ? 0 : 1;
}

int cmd_hom(Context& c, Emitter& e, bool cohomology_only)
{
    load(c);
    auto A = algebra_of(c);
    auto X = object_of(c, c.o.source), Y = object_of(c, c.o.target);
    auto vx = validate_twisted(*A, X), vy = validate_twisted(*A, Y);
    if (!vx.ok || !vy.ok) throw CliError{1, "invalid twisted complex: " + join(vx.ok ? vy.violations : vx.violations, "; ")};
    HomComplex H(A, X, Y);
    std::string label = "Hom(" + object_label(c.o.source) + ", " + object_label(c.o.target) + ")";
    if (!cohomology_only) {
        for (int n = c.lo; n <= c.hi; ++n) {
            const auto& part = H.degree_part(n);
            int rank = rank_of(A->field(), differential_columns(H, n));
            std::vector<std::string> basis;
            for (int b : part) basis.push_back(H.format(sparse_unit(b)));
            e.emit(label + " degree " + std::to_string(n) + ": dim=" + std::to_string(part.size()) +
                       " rank_d=" + std::to_string(rank) + (basis.empty() ? "" : " basis " + join(basis, ", ")),
                   {{"degree", std::to_string(n)},
                    {"dim", std::to_string(part.size())},
                    {"rank_d", std::to_string(rank)},
                    {"basis", "[" + join(basis) + "]"}});
        }
        return 0;
    }
    auto tab = cohomology(H, c.lo, c.hi);
    for (int n = c.lo; n <= c.hi; ++n) {
        int d = tab.dims.count(n) ? tab.dims.at(n) : 0;
        std::vector<std::string> reps;
        if (tab.reps.count(n))
            for (const auto& r : tab.reps.at(n)) reps.push_back(H.format(r));
        e.emit("H^" + std::to_string(n) + " " + label + ": dim=" + std::to_string(d) +
                   (reps.empty() ? "" : " reps " + join(reps, ", ")),
               {{"degree", std::to_string(n)}, {"dim", std::to_string(d)}, {"reps", "[" + join(reps, ";") + "]"}});
    }
    e.emit("total=" + std::to_string(tab.total()), {{"total", std::to_string(tab.total())}});
    return 0;
}

int cmd_quotient(Context& c, Emitter& e)
{
    load(c);
    auto A = algebra_of(c);
    auto B = band_of(c);
    for (auto [i, j] : pairs_of(c, all_vertices(c.p))) {
        auto qc = quotient_cohomology(A, i, j, B, c.lo, c.hi, c.o.filtration_max);
        for (const auto& d : qc.degrees) {
            std::string line = format_quotient_line(d);
            std::string head = "(" + c.p.vertices[i] + "," + c.p.vertices[j] + ") degree " + std::to_string(d.n) + ": ";
            e.emit(head + line, {{"i", c.p.vertices[i]}, {"j", c.p.vertices[j]}, {"n", std::to_string(d.n)},
                                 {"dim", std::to_string(d.dim)}, {"stable", yes(d.stable)},
                                 {"filtration_profile", line.substr(line.find('[') )}});
        }
    }
    return 0;
}

int cmd_ss_pages(Context& c, Emitter& e)
{
    load(c);
    if (c.o.engine != "reduction" && c.o.engine != "tower") usage("--engine must be reduction or tower");
    auto A = algebra_of(c);
    auto B = band_of(c);
    auto k = kronecker_of(c);
    auto pairs = pairs_of(c, {k.src});
    int P = c.o.filtration_max;
    for (auto [i, j] : pairs) {
        QuotientComplex Q(A, i, j, B, P);
        const auto& fc = Q.filtered();
        std::vector<std::map<Bidegree, int>> pages;
        if (c.o.engine == "tower") {
            for (const auto& pg : ss_pages(fc, P + 1)) pages.push_back(pg.dims);
        } else {
            FilteredReduction R(fc);
            for (int r = 0; r <= P + 1; ++r) pages.push_back(R.page_dims(r));
        }
        std::string pij = "(" + c.p.vertices[i] + "," + c.p.vertices[j] + ")";
        for (size_t r = 0; r < pages.size(); ++r) {
            std::vector<std::string> cells;
            for (const auto& [pq, d] : pages[r]) {
                int n = pq.first + pq.second;
                if (n < c.lo || n > c.hi || d == 0) continue;
                cells.push_back("(" + std::to_string(pq.first) + "," + std::to_string(pq.second) + ")=" +
                                std::to_string(d));
            }
            std::string name = r == pages.size() - 1 ? "E_inf" : "E_" + std::to_string(r);
            e.emit(pij + " " + name + ": " + join(cells, " "),
                   {{"i", c.p.vertices[i]}, {"j", c.p.vertices[j]}, {"page", name}, {"cells", join(cells, ";")}});
        }
        FilteredReduction R(fc);
        e.emit(pij + " stabilization_index=" + std::to_string(R.stabilization_index()),
               {{"i", c.p.vertices[i]}, {"j", c.p.vertices[j]},
                {"stabilization_index", std::to_string(R.stabilization_index())}});
    }
    return 0;
}

int cmd_einf(Context& c, Emitter& e)
{
    load(c);
    auto A = algebra_of(c);
    auto k = kronecker_of(c);
    auto B = band_of(c);
    bool ok = true;
    for (auto [i, j] : pairs_of(c, {k.src, k.tgt})) {
        EInfReport rep;
        try {
            rep = e_infinity_check(A, k, B, i, j, c.lo, c.hi, c.o.filtration_max);
        } catch (const std::invalid_argument& ex) {
            usage(ex.what());
        }
        ok = ok && rep.ok;
        std::string pij = "(" + c.p.vertices[i] + "," + c.p.vertices[j] + ")";
        e.emit(pij + " " + (rep.ok ? "PASS" : "FAIL") + " margin=" + std::to_string(rep.margin) +
                   " a=" + std::to_string(rep.a),
               {{"i", c.p.vertices[i]}, {"j", c.p.vertices[j]}, {"ok", yes(rep.ok)},
                {"margin", std::to_string(rep.margin)}, {"a", std::to_string(rep.a)}});
        for (const auto& l : rep.lines) e.emit("  " + l, {{"line", l}});
        for (const auto& m : rep.mismatches) e.emit("  mismatch: " + m, {{"mismatch", m}});
    }
    return ok ? 0 : 1;
}

int cmd_formality(Context& c, Emitter& e)
{
    load(c);
    auto k = kronecker_of(c);
    auto mu = mu_of(c);
    auto rep = formality_check(c.p, k, mu, c.lo, c.hi, c.o.filtration_max, c.o.length_bound, c.field);
    e.emit(std::string("formality ") + (rep.ok ? "PASS" : "FAIL") + " margin=" + std::to_string(rep.margin),
           {{"ok", yes(rep.ok)}, {"margin", std::to_string(rep.margin)}});
    for (const auto& l : rep.lines) e.emit(l, {{"line", l}});
    for (const auto& f : rep.failures) e.emit("failure: " + f, {{"failure", f}});
    return rep.ok ? 0 : 1;
}

int cmd_iso(Context& c, Emitter& e)
{
    load(c);
    auto k = kronecker_of(c);
    auto mu = mu_of(c);
    LemmaSetup s;
    try {
        s = lemma_setup(c.p, k, mu);
    } catch (const TransformError& ex) {
        throw CliError{1, ex.what()};
    }
    auto rep = verify_iso(s.pinched.presentation, s.subalgebra.presentation, s.candidate, c.o.length_bound, c.topt);
    std::string verdict = rep.refused ? "REFUSED" : rep.ok ? "PASS" : "FAIL";
    e.emit("iso-check " + verdict + " (mu=" + format_scalar(mu) + ", L=" + std::to_string(c.o.length_bound) +
               ", char=" + std::to_string(c.field.characteristic()) + ")",
           {{"ok", yes(rep.ok)}, {"refused", yes(rep.refused)}, {"mu", format_scalar(mu)},
            {"L", std::to_string(c.o.length_bound)}, {"char", std::to_string(c.field.characteristic())}});
    for (const auto& n : rep.notes) e.emit("note: " + n, {{"note", n}});
    for (const auto& f : rep.failures) e.emit("failure: " + f, {{"failure", f}});
    return rep.ok && !rep.refused ? 0 : 1;
}

int cmd_surface(Context& c, Emitter& e)
{
    load(c);
    RibbonSurface s;
    try {
        s = surface_of(c.p);
    } catch (const SurfaceError& ex) {
        throw CliError{1, ex.what()};
    }
    auto inv = surface_invariants(s);
    if (!e.structured()) {
        for (const auto& l : format_surface(inv)) e.line(l);
    } else {
        for (size_t k = 0; k < inv.components.size(); ++k) {
            const auto& cd = inv.components[k];
            std::vector<std::string> bds;
            for (const auto& b : cd.boundaries)
                bds.push_back("(" + std::to_string(b.circles) + "," + std::to_string(b.dots) + "," +
                              std::to_string(b.winding) + ")");
            e.emit("", {{"component", std::to_string(k)}, {"genus", std::to_string(cd.genus)},
                        {"euler", std::to_string(cd.euler)}, {"boundaries", "[" + join(bds, ";") + "]"},
                        {"circle_punctures", std::to_string(cd.circle_punctures)},
                        {"dot_punctures", std::to_string(cd.dot_punctures)},
                        {"singularities", std::to_string(cd.singular_punctures)}});
        }
        for (size_t k = 0; k < inv.singularity_components.size(); ++k)
            e.emit("", {{"singularity", s.singularity_names[k]},
                        {"components", std::to_string(inv.singularity_components[k].first) + "," +
                                           std::to_string(inv.singularity_components[k].second)}});
    }
    bool adm = is_admissible(s);
    e.emit(std::string("admissible=") + yes(adm), {{"admissible", yes(adm)}});
    return adm ? 0 : 1;
}

int cmd_winding(Context& c, Emitter& e)
{
    load(c);
    WindingReport rep;
    try {
        rep = boundary_winding_numbers(surface_of(c.p));
    } catch (const SurfaceError& ex) {
        throw CliError{1, ex.what()};
    }
    if (!e.structured()) {
        for (const auto& l : rep.lines) e.line(l);
    } else {
        for (size_t i = 0; i < rep.labels.size(); ++i)
            e.emit("", {{"label", rep.labels[i]}, {"w", std::to_string(rep.windings[i])}});
    }
    e.emit(std::string("identity ") + (rep.identity_holds ? "holds" : "FAILS"),
           {{"identity_holds", yes(rep.identity_holds)}});
    if (!c.o.kronecker.empty()) {
        auto k = kronecker_of(c);
        int w = kronecker_curve_winding(c.p, k, presentation_grading(c.p));
        e.emit("kronecker curve winding=" + std::to_string(w), {{"kronecker_winding", std::to_string(w)}});
    }
    return rep.identity_holds ? 0 : 1;
}

int cmd_contract(Context& c, Emitter& e)
{
    load(c);
    auto k = kronecker_of(c);
    ContractionReport rep;
    try {
        rep = contraction_check(c.p, k);
    } catch (const std::exception& ex) {
        throw CliError{1, ex.what()};
    }
    for (const auto& l : rep.lines) e.emit(l, {{"line", l}});
    e.emit("", {{"ok", yes(rep.ok)}, {"separating", yes(rep.separating)}});
    return rep.ok ? 0 : 1;
}

int cmd_fixtures(const std::string& dir, Emitter& e)
{
    if (dir.empty()) usage("fixtures needs an output directory");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) usage("cannot create '" + dir + "': " + ec.message());
    const std::vector<std::pair<std::string, Presentation>> files = {
        {"lambda0.quiver", fixtures::lambda0()},
        {"lambda1.quiver", fixtures::lambda1()},
        {"lambda1_pinched.quiver", fixtures::lambda1_pinched()},
    };
    for (const auto& [name, p] : files) {
        auto path = std::filesystem::path(dir) / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) usage("cannot write '" + path.string() + "'");
        out << serialize(p);
        e.emit("wrote " + path.string(), {{"wrote", path.string()}});
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Graded (pinched) gentle algebras: transforms, band cohomology, quotients, surfaces", "gdg"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    Options o;
    std::string fixtures_dir;

    auto file = [&](CLI::App* s) { s->add_option("file", o.file, "presentation file")->required(); };
    auto common = [&](CLI::App* s) {
        s->add_option("--format", o.format, "text or structured");
        s->add_option("--char", o.characteristic, "field characteristic (0 = rationals)");
        s->add_option("--length-bound", o.length_bound, "path length bound L");
        s->add_option("--slack", o.slack, "extra length used when reducing normal forms");
    };
    auto kron = [&](CLI::App* s) { s->add_option("--kronecker", o.kronecker, "Kronecker arrows alpha,beta"); };
    auto mu = [&](CLI::App* s) { s->add_option("--mu", o.mu, "nonzero rational p/q"); };
    auto window = [&](CLI::App* s) { s->add_option("--window", o.window, "degree window lo:hi"); };
    auto filt = [&](CLI::App* s) { s->add_option("--filtration-max", o.filtration_max, "truncation P_max"); };
    auto pair = [&](CLI::App* s) { s->add_option("--pair", o.pair, "vertex pair i,j"); };

    std::map<std::string, CLI::App*> sub;
    auto add = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        sub[name] = s;
        return s;
    };
    for (auto [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"validate", "check gentle / pinched gentle conditions"},
             {"decompose", "pinched decomposition"},
             {"kroneckers", "list graded Kroneckers"},
             {"surface", "surface invariants"},
             {"winding", "boundary winding numbers"}}) {
        auto* s = add(name, help);
        file(s);
        common(s);
        if (name == "decompose") s->add_flag("--normalize", o.normalize, "normalize pinched loops");
        if (name == "winding") kron(s);
    }
    for (auto [name, help] : std::vector<std::pair<std::string, std::string>>{
             {"localize", "invert alpha + mu beta"},
             {"pinch", "pinch a Kronecker"},
             {"band", "band object as a twisted complex"},
             {"contract-check", "compare pinched and contracted surfaces"},
             {"iso-check", "verify the pinched algebra against the localization"}}) {
        auto* s = add(name, help);
        file(s);
        common(s);
        kron(s);
        if (name != "pinch" && name != "contract-check") mu(s);
    }
    {
        auto* s = add("resolve", "replace pinched loops by pairs of loops");
        file(s);
        common(s);
        s->add_flag("--normalize", o.normalize, "normalize pinched loops");
        s = add("subalgebra", "idempotent subalgebra e A e");
        file(s);
        common(s);
        s->add_option("--vertices", o.vertices, "kept vertices v1,v2,...")->required();
    }
    for (const std::string name : {"hom", "cohomology"}) {
        auto* s = add(name, name == "hom" ? "hom complex between B and projectives" : "hom-complex cohomology");
        file(s);
        common(s);
        kron(s);
        mu(s);
        window(s);
        s->add_option("--source", o.source, "B or a vertex name");
        s->add_option("--target", o.target, "B or a vertex name");
    }
    for (const std::string name : {"quotient", "ss-pages", "einf-check", "formality"}) {
        auto* s = add(name, name == "quotient"     ? "truncated Drinfeld quotient cohomology"
                            : name == "ss-pages"   ? "spectral-sequence pages"
                            : name == "einf-check" ? "closed-form E_infinity check"
                                                   : "quotient vs localization comparison");
        file(s);
        common(s);
        kron(s);
        mu(s);
        window(s);
        filt(s);
        if (name != "formality") pair(s);
        if (name == "ss-pages") s->add_option("--engine", o.engine, "reduction or tower");
    }
    {
        auto* s = add("fixtures", "write the built-in presentations to a directory");
        s->add_option("dir", fixtures_dir, "output directory")->required();
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex, out, err);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex, out, err);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex, out, err);
        return 2;
    }

    std::string name;
    for (auto& [n, s] : sub)
        if (s->parsed()) name = n;
    Context c;
    c.o = o;
    try {
        prepare(c);
        Emitter e(out, c.o.format == "structured");
        if (name == "fixtures") return cmd_fixtures(fixtures_dir, e);
        if (name == "validate") return cmd_validate(c, e);
        if (name == "decompose") return cmd_decompose(c, e);
        if (name == "kroneckers") return cmd_kroneckers(c, e);
        if (name == "localize") return cmd_localize(c, e);
        if (name == "pinch") return cmd_pinch(c, e);
        if (name == "resolve") return cmd_resolve(c, e);
        if (name == "subalgebra") return cmd_subalgebra(c, e);
        if (name == "band") return cmd_band(c, e);
        if (name == "hom") return cmd_hom(c, e, false);
        if (name == "cohomology") return cmd_hom(c, e, true);
        if (name == "quotient") return cmd_quotient(c, e);
        if (name == "ss-pages") return cmd_ss_pages(c, e);
        if (name == "einf-check") return cmd_einf(c, e);
        if (name == "formality") return cmd_formality(c, e);
        if (name == "iso-check") return cmd_iso(c, e);
        if (name == "surface") return cmd_surface(c, e);
        if (name == "winding") return cmd_winding(c, e);
        if (name == "contract-check") return cmd_contract(c, e);
        usage("unknown subcommand");
    } catch (const CliError& ex) {
        err << "error: " << ex.message << "\n";
        return ex.code;
    } catch (const BudgetExceeded& ex) {
        err << "error: budget exceeded: " << ex.what() << "\n";
        return 1;
    } catch (const TruncationOverflow& ex) {
        err << "error: " << ex.what() << " (raise --length-bound)\n";
        return 1;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return 1;
    }
}

} // namespace gdg::cli
