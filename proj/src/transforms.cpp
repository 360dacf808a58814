#include "gdg/transforms.hpp"

#include "gdg/gentle.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace gdg {

namespace {

Term make_term(std::vector<std::string> arrows, Scalar c = 1)
{
    Term t;
    t.coeff = std::move(c);
    t.arrows = std::move(arrows);
    return t;
}

Term trivial_term(const std::string& v, Scalar c = 1)
{
    Term t;
    t.coeff = std::move(c);
    t.trivial_vertex = v;
    return t;
}

std::vector<Term> terms_of(const Presentation& p, const Element& e,
                           const std::function<std::string(int)>& vname)
{
    std::vector<Term> out;
    for (const auto& [path, c] : e) {
        if (path.is_trivial()) {
            out.push_back(trivial_term(vname(path.src), c));
            continue;
        }
        std::vector<std::string> names;
        for (int a : path.w) names.push_back(p.arrows[a].name);
        out.push_back(make_term(names, c));
    }
    return out;
}

bool involves_any(const Element& r, const std::set<int>& arrows)
{
    for (const auto& kv : r)
        for (int a : kv.first.w)
            if (arrows.count(a)) return true;
    return false;
}

std::vector<std::string> loop_names(const Presentation& p)
{
    std::vector<std::string> out;
    if (p.decomposition)
        for (int l : p.decomposition->loops) out.push_back(p.arrows[l].name);
    return out;
}

Presentation ensure_decomposed(const Presentation& p)
{
    if (p.decomposition) return p;
    auto res = pinched_decompose(p, {}, false);
    if (!res.ok) throw TransformError("not a pinched-gentle presentation: " + res.message);
    Presentation q = p;
    q.decomposition = res.decomposition;
    return q;
}

} // namespace

std::string fresh_arrow_name(const Presentation& p, const std::string& base)
{
    if (p.arrow_index(base) < 0) return base;
    for (int k = 1;; ++k) {
        std::string n = base + "_" + std::to_string(k);
        if (p.arrow_index(n) < 0) return n;
    }
}

std::string fresh_vertex_name(const Presentation& p, const std::string& base)
{
    if (p.vertex_index(base) < 0) return base;
    for (int k = 1;; ++k) {
        std::string n = base + "_" + std::to_string(k);
        if (p.vertex_index(n) < 0) return n;
    }
}

bool is_acyclic_kronecker(const Presentation& p, const Kronecker& k)
{
    Presentation q = ensure_decomposed(p);
    GentleView g = gentle_view(q);
    return !nonzero_cycle(q, g, k.alpha) && !nonzero_cycle(q, g, k.beta);
}

namespace {

Kronecker annotate(const Presentation& q, const GentleView& g, int a, int b)
{
    Kronecker k;
    k.alpha = a;
    k.beta = b;
    k.src = q.arrows[a].src;
    k.tgt = q.arrows[a].tgt;
    auto ca = nonzero_cycle(q, g, a);
    auto cb = ca ? ca : nonzero_cycle(q, g, b);
    k.acyclic = !cb;
    if (cb) k.witness = cb;
    k.plain_acyclic = !quiver_cycle(q, g.arrows, a) && !quiver_cycle(q, g.arrows, b);
    return k;
}

} // namespace

std::vector<Kronecker> find_graded_kroneckers(const Presentation& p)
{
    Presentation q = ensure_decomposed(p);
    GentleView g = gentle_view(q);
    std::set<int> loop_vertices;
    for (int l : g.loops) loop_vertices.insert(q.arrows[l].src);
    std::vector<Kronecker> out;
    for (std::size_t x = 0; x < g.arrows.size(); ++x)
        for (std::size_t y = x + 1; y < g.arrows.size(); ++y) {
            const Arrow& A = q.arrows[g.arrows[x]];
            const Arrow& B = q.arrows[g.arrows[y]];
            if (A.src != B.src || A.tgt != B.tgt || A.degree != B.degree || A.src == A.tgt) continue;
            if (loop_vertices.count(A.src) || loop_vertices.count(A.tgt)) continue;
            out.push_back(annotate(q, g, g.arrows[x], g.arrows[y]));
        }
    return out;
}

Kronecker kronecker_by_names(const Presentation& p, const std::string& an, const std::string& bn)
{
    Presentation q = ensure_decomposed(p);
    int a = q.arrow_index(an), b = q.arrow_index(bn);
    if (a < 0) throw TransformError("unknown arrow '" + an + "'");
    if (b < 0) throw TransformError("unknown arrow '" + bn + "'");
    if (a == b) throw TransformError("a graded Kronecker needs two distinct arrows");
    GentleView g = gentle_view(q);
    if (!g.in_view(a) || !g.in_view(b)) throw TransformError("Kronecker arrows must be gentle arrows");
    const Arrow& A = q.arrows[a];
    const Arrow& B = q.arrows[b];
    if (A.src != B.src || A.tgt != B.tgt) throw TransformError("'" + an + "' and '" + bn + "' are not parallel");
    if (A.src == A.tgt) throw TransformError("Kronecker arrows cannot be loops");
    if (A.degree != B.degree)
        throw TransformError("'" + an + "' and '" + bn + "' have different degrees (" + std::to_string(A.degree) +
                             " vs " + std::to_string(B.degree) + ")");
    for (int l : g.loops)
        if (q.arrows[l].src == A.src || q.arrows[l].src == A.tgt)
            throw TransformError("pinched loop '" + q.arrows[l].name + "' sits at an endpoint of the Kronecker");
    return annotate(q, g, a, b);
}

LocalizeResult localize(const Presentation& p, const Kronecker& k, const Scalar& mu)
{
    if (sgn(mu) == 0) throw TransformError("mu must be nonzero");
    LocalizeResult res;
    res.delta = fresh_arrow_name(p, "delta");
    res.renamed = res.delta != "delta";
    PresentationBuilder b;
    for (const auto& v : p.vertices) b.add_vertex(v);
    for (const auto& a : p.arrows) b.add_arrow(a.name, p.vertices[a.src], p.vertices[a.tgt], a.degree);
    const std::string one = p.vertices[k.src], two = p.vertices[k.tgt];
    const std::string al = p.arrows[k.alpha].name, be = p.arrows[k.beta].name;
    b.add_arrow(res.delta, two, one, -p.arrows[k.alpha].degree);
    auto vname = [&](int v) { return p.vertices[v]; };
    for (const auto& r : p.relations) b.add_relation(terms_of(p, r, vname));
    b.add_relation({make_term({res.delta, al}), make_term({res.delta, be}, mu), trivial_term(one, -1)});
    b.add_relation({make_term({al, res.delta}), make_term({be, res.delta}, mu), trivial_term(two, -1)});
    for (const auto& line : p.provenance) b.add_provenance(line);
    b.add_provenance("localize kronecker=" + al + "," + be + " mu=" + format_scalar(mu) + " delta=" + res.delta);
    res.presentation = b.build();
    return res;
}

PinchResult pinch(const Presentation& p0, const Kronecker& k)
{
    Presentation p = ensure_decomposed(p0);
    GentleView g = gentle_view(p);
    const std::string al = p.arrows[k.alpha].name, be = p.arrows[k.beta].name;
    if (!k.acyclic)
        throw TransformError("Kronecker (" + al + ", " + be + ") is cyclic" +
                             (k.witness ? ": witness " + p.format_path(*k.witness) : std::string()));
    for (int l : g.loops)
        if (p.arrows[l].src == k.src || p.arrows[l].src == k.tgt)
            throw TransformError("pinched loop '" + p.arrows[l].name + "' sits at an endpoint of the Kronecker");

    PinchResult res;
    int ap = -1, am = -1, bp = -1, bm = -1;
    for (int x : g.arrows) {
        if (x == k.alpha || x == k.beta) continue;
        if (p.arrows[x].src == k.tgt && !g.nonzero(k.beta, x)) ap = x;
        if (p.arrows[x].src == k.tgt && !g.nonzero(k.alpha, x)) bp = x;
        if (p.arrows[x].tgt == k.src && !g.nonzero(x, k.beta)) am = x;
        if (p.arrows[x].tgt == k.src && !g.nonzero(x, k.alpha)) bm = x;
    }
    auto nm = [&](int a) { return a < 0 ? std::string() : p.arrows[a].name; };
    res.alpha_plus = nm(ap);
    res.alpha_minus = nm(am);
    res.beta_plus = nm(bp);
    res.beta_minus = nm(bm);

    const std::string one = p.vertices[k.src], two = p.vertices[k.tgt];
    auto vname = [&](int v) { return v == k.tgt ? one : p.vertices[v]; };
    for (const auto& v : p.vertices) res.vertex_map[v] = v == two ? one : v;

    PresentationBuilder b;
    for (const auto& v : p.vertices)
        if (v != two) b.add_vertex(v);
    for (int a = 0; a < static_cast<int>(p.arrows.size()); ++a) {
        if (a == k.alpha || a == k.beta) continue;
        int d = p.arrows[a].degree;
        if (a == ap) d += p.arrows[k.alpha].degree;
        if (a == bp) d += p.arrows[k.beta].degree;
        b.add_arrow(p.arrows[a].name, vname(p.arrows[a].src), vname(p.arrows[a].tgt), d);
    }
    // Vertex 2 disappears, so the loop name must avoid the old names only.
    res.loop = fresh_arrow_name(p, "gamma");
    b.add_arrow(res.loop, one, one, 0);
    std::set<int> ab{k.alpha, k.beta};
    for (const auto& r : p.relations)
        if (!involves_any(r, ab)) b.add_relation(terms_of(p, r, vname));
    const std::string& ga = res.loop;
    if (ap >= 0 && bm >= 0) b.add_relation({make_term({nm(ap), nm(bm)})});
    if (bp >= 0 && am >= 0) b.add_relation({make_term({nm(bp), nm(am)})});
    if (bp >= 0) b.add_relation({make_term({nm(bp), ga}), make_term({nm(bp)})});
    if (bm >= 0) b.add_relation({make_term({ga, nm(bm)}), make_term({nm(bm)})});
    if (ap >= 0) b.add_relation({make_term({nm(ap), ga}), make_term({nm(ap)}, -1)});
    if (am >= 0) b.add_relation({make_term({ga, nm(am)}), make_term({nm(am)}, -1)});
    for (const auto& line : p.provenance) b.add_provenance(line);
    b.add_provenance("pinch kronecker=" + al + "," + be + " loop=" + ga);
    std::vector<std::string> loops = loop_names(p);
    loops.push_back(ga);
    try {
        res.presentation = with_pinched(b.build(), loops);
    } catch (const PresentationError& e) {
        throw TransformError(std::string("pinch produced an invalid presentation: ") + e.what());
    }
    return res;
}

ResolveResult resolve_loops(const Presentation& p0)
{
    Presentation p = ensure_decomposed(p0);
    const Decomposition& d = *p.decomposition;
    ResolveResult res;
    if (d.loops.empty()) {
        res.presentation = p;
        res.presentation.decomposition.reset();
        return res;
    }
    std::map<int, const LoopRoles*> at;
    for (const auto& lr : d.roles) at[lr.vertex] = &lr;
    std::set<std::string> taken_v(p.vertices.begin(), p.vertices.end());
    std::set<std::string> taken_a;
    for (const auto& a : p.arrows) taken_a.insert(a.name);
    auto fresh = [](std::set<std::string>& taken, const std::string& base) {
        std::string n = base;
        for (int k = 1; taken.count(n); ++k) n = base + "_" + std::to_string(k);
        taken.insert(n);
        return n;
    };
    std::map<int, LoopPair> pairs;
    for (const auto& lr : d.roles) {
        LoopPair lp;
        lp.vertex = p.vertices[lr.vertex];
        lp.loop = p.arrows[lr.loop].name;
        lp.vertex_alpha = fresh(taken_v, lp.vertex + "_alpha");
        lp.vertex_beta = fresh(taken_v, lp.vertex + "_beta");
        lp.loop_alpha = fresh(taken_a, lp.loop + "_alpha");
        lp.loop_beta = fresh(taken_a, lp.loop + "_beta");
        pairs[lr.vertex] = lp;
    }
    PresentationBuilder b;
    for (int v = 0; v < static_cast<int>(p.vertices.size()); ++v) {
        if (pairs.count(v)) {
            b.add_vertex(pairs[v].vertex_alpha);
            b.add_vertex(pairs[v].vertex_beta);
        } else {
            b.add_vertex(p.vertices[v]);
        }
    }
    std::set<int> loopset(d.loops.begin(), d.loops.end());
    auto src_name = [&](int a) {
        int v = p.arrows[a].src;
        if (!pairs.count(v)) return p.vertices[v];
        return at[v]->alpha_plus == a ? pairs[v].vertex_alpha : pairs[v].vertex_beta;
    };
    auto tgt_name = [&](int a) {
        int v = p.arrows[a].tgt;
        if (!pairs.count(v)) return p.vertices[v];
        return at[v]->alpha_minus == a ? pairs[v].vertex_alpha : pairs[v].vertex_beta;
    };
    for (int a : d.gentle_arrows) b.add_arrow(p.arrows[a].name, src_name(a), tgt_name(a), p.arrows[a].degree);
    for (const auto& [v, lp] : pairs) {
        b.add_arrow(lp.loop_alpha, lp.vertex_alpha, lp.vertex_alpha, 0);
        b.add_arrow(lp.loop_beta, lp.vertex_beta, lp.vertex_beta, 0);
        const LoopRoles& lr = *at[v];
        auto nm = [&](int a) { return p.arrows[a].name; };
        if (lr.alpha_plus >= 0) b.add_relation({make_term({nm(lr.alpha_plus), lp.loop_alpha})});
        if (lr.alpha_minus >= 0) b.add_relation({make_term({lp.loop_alpha, nm(lr.alpha_minus)})});
        if (lr.beta_plus >= 0) b.add_relation({make_term({nm(lr.beta_plus), lp.loop_beta})});
        if (lr.beta_minus >= 0) b.add_relation({make_term({lp.loop_beta, nm(lr.beta_minus)})});
    }
    for (int ri : d.gentle_relations) {
        int first, second;
        monomial_pair(p.relations[ri], first, second);
        // Drop pairs that the split makes non-composable (beta+ alpha-, alpha+ beta-).
        if (tgt_name(first) != src_name(second)) continue;
        b.add_relation({make_term({p.arrows[second].name, p.arrows[first].name})});
    }
    for (const auto& line : p.provenance) b.add_provenance(line);
    std::string note = "resolve loops=";
    bool first = true;
    for (const auto& [v, lp] : pairs) {
        note += (first ? "" : ",") + lp.loop;
        first = false;
        res.pairing.push_back(lp);
    }
    b.add_provenance(note);
    res.presentation = b.build();
    return res;
}

Presentation unresolve_loops(const Presentation& q, const std::vector<LoopPair>& pairing)
{
    std::map<std::string, std::string> vmap;
    std::set<std::string> resolved_loops;
    for (const auto& lp : pairing) {
        vmap[lp.vertex_alpha] = lp.vertex;
        vmap[lp.vertex_beta] = lp.vertex;
        resolved_loops.insert(lp.loop_alpha);
        resolved_loops.insert(lp.loop_beta);
    }
    auto vn = [&](int v) {
        auto it = vmap.find(q.vertices[v]);
        return it == vmap.end() ? q.vertices[v] : it->second;
    };
    PresentationBuilder b;
    std::set<std::string> added;
    for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v)
        if (added.insert(vn(v)).second) b.add_vertex(vn(v));
    for (const auto& a : q.arrows)
        if (!resolved_loops.count(a.name)) b.add_arrow(a.name, vn(a.src), vn(a.tgt), a.degree);
    for (const auto& r : q.relations) {
        bool touches = false;
        for (const auto& kv : r)
            for (int a : kv.first.w)
                if (resolved_loops.count(q.arrows[a].name)) touches = true;
        if (!touches) b.add_relation(terms_of(q, r, vn));
    }
    std::vector<std::string> loops;
    for (const auto& lp : pairing) {
        b.add_arrow(lp.loop, lp.vertex, lp.vertex, 0);
        loops.push_back(lp.loop);
        int va = q.vertex_index(lp.vertex_alpha), vb = q.vertex_index(lp.vertex_beta);
        std::string ap, am, bp, bm;
        for (const auto& a : q.arrows) {
            if (resolved_loops.count(a.name)) continue;
            if (a.src == va) ap = a.name;
            if (a.tgt == va) am = a.name;
            if (a.src == vb) bp = a.name;
            if (a.tgt == vb) bm = a.name;
        }
        if (!ap.empty() && !bm.empty()) b.add_relation({make_term({ap, bm})});
        if (!bp.empty() && !am.empty()) b.add_relation({make_term({bp, am})});
        if (!bp.empty()) b.add_relation({make_term({bp, lp.loop}), make_term({bp})});
        if (!bm.empty()) b.add_relation({make_term({lp.loop, bm}), make_term({bm})});
        if (!ap.empty()) b.add_relation({make_term({ap, lp.loop}), make_term({ap}, -1)});
        if (!am.empty()) b.add_relation({make_term({lp.loop, am}), make_term({am}, -1)});
    }
    for (const auto& line : q.provenance) b.add_provenance(line);
    return with_pinched(b.build(), loops);
}

namespace {

std::string generator_name(const Presentation& p, const Path& path)
{
    if (path.length() == 1) return p.arrows[path.w[0]].name;
    std::string s = "[";
    for (std::size_t k = 0; k < path.w.size(); ++k) {
        if (k) s += '.';
        s += p.arrows[path.w[k]].name;
    }
    return s + "]";
}

} // namespace

SubalgebraResult idempotent_subalgebra(const Presentation& p, const std::vector<std::string>& vbar_names, int L)
{
    if (vbar_names.empty()) throw TransformError("vertex subset must be nonempty");
    if (L < 1) throw TransformError("length bound must be >= 1");
    std::set<int> vbar;
    for (const auto& n : vbar_names) {
        int v = p.vertex_index(n);
        if (v < 0) throw TransformError("unknown vertex '" + n + "'");
        vbar.insert(v);
    }
    SubalgebraResult res;
    // Through-paths: start in vbar, interior outside vbar, end in vbar.
    std::vector<Path> through;
    std::optional<Path> unresolved;
    for (int i : vbar) {
        std::vector<Path> frontier{Path::trivial(i)};
        while (!frontier.empty()) {
            std::vector<Path> next;
            for (const Path& q : frontier)
                for (int a : p.out_arrows(q.tgt)) {
                    Path e{i, p.arrows[a].tgt, {a}};
                    e.w.insert(e.w.end(), q.w.begin(), q.w.end());
                    if (e.length() > L) {
                        if (!unresolved || e < *unresolved) unresolved = e;
                        continue;
                    }
                    if (vbar.count(e.tgt)) through.push_back(e);
                    else next.push_back(e);
                }
            frontier = std::move(next);
        }
    }
    // A through-path of length L + 1 exists iff some over-long extension ends in vbar.
    if (unresolved) {
        // Only report it when it can still reach vbar; otherwise it is a dead end.
        std::function<bool(int, int)> reaches = [&](int v, int budget) {
            if (vbar.count(v)) return true;
            if (budget == 0) return false;
            for (int a : p.out_arrows(v))
                if (reaches(p.arrows[a].tgt, budget - 1)) return true;
            return false;
        };
        if (vbar.count(unresolved->tgt)) {
            res.stabilized = false;
            res.unresolved = p.format_path(*unresolved);
        } else if (reaches(unresolved->tgt, static_cast<int>(p.vertices.size()))) {
            res.stabilized = false;
            res.unresolved = p.format_path(*unresolved) + " ...";
        }
    }
    std::sort(through.begin(), through.end());
    std::map<Path, std::string> gen;
    PresentationBuilder b;
    for (int v : vbar) b.add_vertex(p.vertices[v]);
    for (const Path& t : through) {
        std::string n = generator_name(p, t);
        gen[t] = n;
        res.generator_paths[n] = t;
        b.add_arrow(n, p.vertices[t.src], p.vertices[t.tgt], p.degree(t));
    }

    // T(b): from b through outside vertices into vbar; S(a): dual.
    auto tails = [&](int b0) {
        std::vector<Path> out;
        if (vbar.count(b0)) return std::vector<Path>{Path::trivial(b0)};
        std::vector<Path> frontier{Path::trivial(b0)};
        while (!frontier.empty()) {
            std::vector<Path> next;
            for (const Path& q : frontier)
                for (int a : p.out_arrows(q.tgt)) {
                    Path e{b0, p.arrows[a].tgt, {a}};
                    e.w.insert(e.w.end(), q.w.begin(), q.w.end());
                    if (e.length() > L) continue;
                    (vbar.count(e.tgt) ? out : next).push_back(e);
                }
            frontier = std::move(next);
        }
        return out;
    };
    auto heads = [&](int a0) {
        std::vector<Path> out;
        if (vbar.count(a0)) return std::vector<Path>{Path::trivial(a0)};
        std::vector<Path> frontier{Path::trivial(a0)};
        while (!frontier.empty()) {
            std::vector<Path> next;
            for (const Path& q : frontier)
                for (int a : p.in_arrows(q.src)) {
                    Path e{p.arrows[a].src, a0, q.w};
                    e.w.push_back(a);
                    if (e.length() > L) continue;
                    (vbar.count(e.src) ? out : next).push_back(e);
                }
            frontier = std::move(next);
        }
        return out;
    };
    // Split a path at interior vbar vertices into generator names (written order).
    auto factor = [&](const Path& path, std::vector<std::string>& names) {
        names.clear();
        std::vector<int> seg;
        int cur = path.src;
        std::vector<std::string> applied;
        for (auto it = path.w.rbegin(); it != path.w.rend(); ++it) {
            seg.push_back(*it);
            cur = p.arrows[*it].tgt;
            if (vbar.count(cur)) {
                Path piece{p.arrows[seg.front()].src, cur, {}};
                for (auto s = seg.rbegin(); s != seg.rend(); ++s) piece.w.push_back(*s);
                auto g = gen.find(piece);
                if (g == gen.end()) return false;
                applied.push_back(g->second);
                seg.clear();
            }
        }
        if (!seg.empty()) return false;
        names.assign(applied.rbegin(), applied.rend());
        return true;
    };

    for (const auto& r : p.relations) {
        int a, bb;
        if (!p.endpoints(r, a, bb)) continue;
        for (const Path& t : tails(bb))
            for (const Path& s : heads(a)) {
                std::vector<Term> terms;
                bool ok = true;
                for (const auto& [term, c] : r) {
                    Path full = concat(concat(t, term), s);
                    if (full.is_trivial()) {
                        terms.push_back(trivial_term(p.vertices[full.src], c));
                        continue;
                    }
                    std::vector<std::string> names;
                    if (!factor(full, names)) {
                        ok = false;
                        break;
                    }
                    terms.push_back(make_term(names, c));
                }
                if (ok) b.add_relation(terms);
                else if (res.stabilized) {
                    res.stabilized = false;
                    res.unresolved = "relation factor beyond length bound";
                }
            }
    }
    for (const auto& line : p.provenance) b.add_provenance(line);
    std::string vs;
    for (int v : vbar) vs += (vs.empty() ? "" : ",") + p.vertices[v];
    b.add_provenance("subalgebra vertices=" + vs + " L=" + std::to_string(L));
    res.presentation = b.build();
    return res;
}

IsoCandidate identity_candidate(const Presentation& p)
{
    IsoCandidate c;
    for (const auto& v : p.vertices) c.vertex_map[v] = v;
    for (int a = 0; a < static_cast<int>(p.arrows.size()); ++a)
        c.arrow_images[p.arrows[a].name] = element_of(p.arrow_path(a));
    return c;
}

IsoReport verify_iso(const Presentation& S, const Presentation& T, const IsoCandidate& cand, int L,
                     const TruncationOptions& opt)
{
    IsoReport rep;
    const Field& F = opt.field;
    if (cand.needs_char_not_2 && F.characteristic() == 2) {
        rep.ok = false;
        rep.refused = true;
        rep.failures.push_back("refused: this candidate requires that the characteristic of K is different from 2");
        return rep;
    }
    auto fail = [&](const std::string& m) {
        rep.ok = false;
        rep.failures.push_back(m);
    };
    std::vector<int> vimg(S.vertices.size(), -1);
    std::set<int> used;
    for (int v = 0; v < static_cast<int>(S.vertices.size()); ++v) {
        auto it = cand.vertex_map.find(S.vertices[v]);
        if (it == cand.vertex_map.end() || T.vertex_index(it->second) < 0) {
            fail("vertex " + S.vertices[v] + " has no image vertex");
            continue;
        }
        vimg[v] = T.vertex_index(it->second);
        if (!used.insert(vimg[v]).second) fail("vertex images are not distinct idempotents at " + it->second);
    }
    if (used.size() != T.vertices.size()) fail("vertex map is not onto the target vertices");
    if (!rep.ok) return rep;

    std::vector<Element> aimg(S.arrows.size());
    for (int a = 0; a < static_cast<int>(S.arrows.size()); ++a) {
        const Arrow& A = S.arrows[a];
        auto it = cand.arrow_images.find(A.name);
        if (it == cand.arrow_images.end()) {
            fail("arrow " + A.name + " has no image");
            continue;
        }
        aimg[a] = element_normalize(F, it->second);
        for (const auto& [path, c] : aimg[a]) {
            if (path.src != vimg[A.src] || path.tgt != vimg[A.tgt])
                fail("image of " + A.name + " has wrong endpoints");
            if (T.degree(path) != A.degree)
                fail("degree: image of " + A.name + " contains " + T.format_path(path) + " of degree " +
                     std::to_string(T.degree(path)) + ", expected " + std::to_string(A.degree));
        }
    }
    if (!rep.ok) return rep;

    TruncatedAlgebra SA(S, L, opt), TA(T, L, opt);
    auto image = [&](const Path& path) {
        Element e = element_of(Path::trivial(vimg[path.src]));
        for (auto it = path.w.rbegin(); it != path.w.rend(); ++it) e = TA.mul(aimg[*it], e);
        return e;
    };
    for (const auto& r : S.relations) {
        Element img;
        try {
            for (const auto& [path, c] : r) element_add_to(F, img, image(path), c);
            img = TA.reduce(img);
        } catch (const TruncationOverflow& e) {
            fail("relation '" + S.format_element(r) + "': " + e.what());
            continue;
        }
        if (!img.empty()) fail("relation '" + S.format_element(r) + "' maps to " + T.format_element(img));
    }
    int checked = 0;
    for (int i = 0; i < static_cast<int>(S.vertices.size()); ++i)
        for (int j = 0; j < static_cast<int>(S.vertices.size()); ++j) {
            const auto& sb = SA.basis(i, j);
            const auto& tb = TA.basis(vimg[i], vimg[j]);
            std::vector<SparseVec> cols;
            try {
                for (const Path& q : sb) cols.push_back(TA.coords(vimg[i], vimg[j], image(q)));
            } catch (const TruncationOverflow& e) {
                fail("pair (" + S.vertices[i] + ", " + S.vertices[j] + "): " + e.what());
                continue;
            }
            int rk = rank_of(F, cols);
            if (sb.size() != tb.size() || rk != static_cast<int>(sb.size()))
                fail("pair (" + S.vertices[i] + ", " + S.vertices[j] + "): source dim " + std::to_string(sb.size()) +
                     ", target dim " + std::to_string(tb.size()) + ", rank " + std::to_string(rk));
            ++checked;
        }
    rep.notes.push_back("checked " + std::to_string(S.relations.size()) + " relations and " +
                        std::to_string(checked) + " vertex pairs at length bound " + std::to_string(L));
    return rep;
}

LemmaSetup lemma_setup(const Presentation& p, const Kronecker& k, const Scalar& mu)
{
    LemmaSetup s;
    s.pinched = pinch(p, k);
    s.localized = localize(p, k, mu);
    const Presentation& loc = s.localized.presentation;
    std::vector<std::string> vbar;
    for (const auto& v : loc.vertices)
        if (v != p.vertices[k.tgt]) vbar.push_back(v);
    s.subalgebra = idempotent_subalgebra(loc, vbar, 2);
    const Presentation& sub = s.subalgebra.presentation;
    const std::string al = p.arrows[k.alpha].name, be = p.arrows[k.beta].name, de = s.localized.delta;
    auto gen = [&](const std::string& n) {
        int a = sub.arrow_index(n);
        if (a < 0) throw TransformError("subalgebra lacks generator '" + n + "'");
        return element_of(sub.arrow_path(a));
    };
    Field Q;
    IsoCandidate& c = s.candidate;
    c.needs_char_not_2 = true;
    const Presentation& pin = s.pinched.presentation;
    for (const auto& v : pin.vertices) c.vertex_map[v] = v;
    for (const auto& a : pin.arrows) {
        if (a.name == s.pinched.loop) {
            c.arrow_images[a.name] =
                element_add(Q, gen("[" + de + "." + al + "]"), element_scale(Q, -mu, gen("[" + de + "." + be + "]")));
        } else if (a.name == s.pinched.alpha_plus) {
            c.arrow_images[a.name] = gen("[" + a.name + "." + al + "]");
        } else if (a.name == s.pinched.beta_plus) {
            c.arrow_images[a.name] = gen("[" + a.name + "." + be + "]");
        } else {
            c.arrow_images[a.name] = gen(a.name);
        }
    }
    return s;
}

Presentation rename_arrows(const Presentation& p, const std::map<std::string, std::string>& names)
{
    auto rn = [&](const std::string& n) {
        auto it = names.find(n);
        return it == names.end() ? n : it->second;
    };
    PresentationBuilder b;
    for (const auto& v : p.vertices) b.add_vertex(v);
    for (const auto& a : p.arrows) b.add_arrow(rn(a.name), p.vertices[a.src], p.vertices[a.tgt], a.degree);
    for (const auto& r : p.relations) {
        std::vector<Term> terms;
        for (const auto& [path, c] : r) {
            if (path.is_trivial()) {
                terms.push_back(trivial_term(p.vertices[path.src], c));
                continue;
            }
            std::vector<std::string> ns;
            for (int a : path.w) ns.push_back(rn(p.arrows[a].name));
            terms.push_back(make_term(ns, c));
        }
        b.add_relation(terms);
    }
    std::vector<std::string> loops;
    for (const auto& l : loop_names(p)) loops.push_back(rn(l));
    for (const auto& line : p.provenance) b.add_provenance(line);
    return with_pinched(b.build(), loops);
}

} // namespace gdg
