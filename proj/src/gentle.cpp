#include "gdg/gentle.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace gdg {

bool monomial_pair(const Element& r, int& first, int& second)
{
    if (r.size() != 1) return false;
    const auto& [path, c] = *r.begin();
    if (path.length() != 2 || c != 1) return false;
    second = path.w[0];
    first = path.w[1];
    return true;
}

GentleReport is_gentle_part(const Presentation& p, const std::vector<int>& arrows,
                            const std::vector<int>& relations)
{
    GentleReport rep;
    auto fail = [&](const std::string& clause, const std::string& witness) {
        rep.ok = false;
        rep.clause = clause;
        rep.witness = witness;
        return rep;
    };
    std::set<std::pair<int, int>> zero;
    for (int ri : relations) {
        int a, b;
        if (!monomial_pair(p.relations[ri], a, b))
            return fail("relations are paths of length two", p.format_element(p.relations[ri]));
        zero.insert({a, b});
    }
    std::set<int> in_set(arrows.begin(), arrows.end());
    for (int v = 0; v < static_cast<int>(p.vertices.size()); ++v) {
        std::vector<int> outs, ins;
        for (int a : arrows) {
            if (p.arrows[a].src == v) outs.push_back(a);
            if (p.arrows[a].tgt == v) ins.push_back(a);
        }
        if (outs.size() > 2) return fail("at most two outgoing", "vertex " + p.vertices[v]);
        if (ins.size() > 2) return fail("at most two incoming", "vertex " + p.vertices[v]);
    }
    for (int a : arrows) {
        std::vector<int> pre_in, post_in, pre_out, post_out;
        for (int b : arrows) {
            if (p.arrows[b].tgt == p.arrows[a].src) (zero.count({b, a}) ? pre_in : pre_out).push_back(b);
            if (p.arrows[b].src == p.arrows[a].tgt) (zero.count({a, b}) ? post_in : post_out).push_back(b);
        }
        auto pair_witness = [&](const std::vector<int>& v) {
            return p.arrows[a].name + " with " + p.arrows[v[0]].name + ", " + p.arrows[v[1]].name;
        };
        if (pre_in.size() > 1) return fail("at most one b with a b in I", pair_witness(pre_in));
        if (post_in.size() > 1) return fail("at most one c with c a in I", pair_witness(post_in));
        if (pre_out.size() > 1) return fail("at most one b with a b not in I", pair_witness(pre_out));
        if (post_out.size() > 1) return fail("at most one c with c a not in I", pair_witness(post_out));
    }
    return rep;
}

GentleReport is_gentle(const Presentation& p)
{
    std::vector<int> arrows(p.arrows.size()), rels(p.relations.size());
    for (std::size_t k = 0; k < arrows.size(); ++k) arrows[k] = static_cast<int>(k);
    for (std::size_t k = 0; k < rels.size(); ++k) rels[k] = static_cast<int>(k);
    return is_gentle_part(p, arrows, rels);
}

void sort_relations(Presentation& p)
{
    std::sort(p.relations.begin(), p.relations.end(),
              [&](const Element& a, const Element& b) { return p.format_element(a) < p.format_element(b); });
    p.relations.erase(std::unique(p.relations.begin(), p.relations.end()), p.relations.end());
}

namespace {

enum class Role { AlphaPlus, AlphaMinus, BetaPlus, BetaMinus };

const char* role_name(Role r)
{
    switch (r) {
    case Role::AlphaPlus: return "alpha+";
    case Role::AlphaMinus: return "alpha-";
    case Role::BetaPlus: return "beta+";
    default: return "beta-";
    }
}

// Matches c1 * x gamma + c2 * x (or gamma y / y) against the loop set.
bool match_template(const Presentation& p, const Element& r, const std::set<int>& loops, int& loop, int& other,
                    Role& role)
{
    if (r.size() != 2) return false;
    auto it = r.begin();
    const auto& [shortp, cs] = *it;
    const auto& [longp, cl] = *std::next(it);
    if (shortp.length() != 1 || longp.length() != 2) return false;
    Scalar ratio = cs / cl;
    bool plus = ratio == 1;
    if (!plus && ratio != -1) return false;
    int x = shortp.w[0];
    if (loops.count(x)) return false;
    if (longp.w[0] == x && loops.count(longp.w[1])) {
        // x gamma: x leaves the loop vertex.
        loop = longp.w[1];
        other = x;
        role = plus ? Role::BetaPlus : Role::AlphaPlus;
        return p.arrows[x].src == p.arrows[loop].src;
    }
    if (longp.w[1] == x && loops.count(longp.w[0])) {
        loop = longp.w[0];
        other = x;
        role = plus ? Role::BetaMinus : Role::AlphaMinus;
        return p.arrows[x].tgt == p.arrows[loop].src;
    }
    return false;
}

bool involves(const Element& r, int arrow)
{
    for (const auto& kv : r)
        if (std::find(kv.first.w.begin(), kv.first.w.end(), arrow) != kv.first.w.end()) return true;
    return false;
}

} // namespace

DecomposeResult pinched_decompose(const Presentation& p, bool normalize)
{
    std::vector<std::string> declared;
    if (p.decomposition)
        for (int l : p.decomposition->loops) declared.push_back(p.arrows[l].name);
    return pinched_decompose(p, declared, normalize);
}

DecomposeResult pinched_decompose(const Presentation& p, const std::vector<std::string>& declared, bool normalize)
{
    DecomposeResult res;
    res.presentation = p;
    auto fail = [&](const std::string& msg) {
        res.ok = false;
        res.message = msg;
        return res;
    };

    std::vector<int> loops;
    if (!declared.empty()) {
        for (const auto& n : declared) {
            int a = p.arrow_index(n);
            if (a < 0) return fail("declared pinched arrow '" + n + "' does not exist");
            if (!p.is_loop(a)) return fail("declared pinched arrow '" + n + "' is not a loop");
            loops.push_back(a);
        }
    } else if (p.decomposition) {
        loops = p.decomposition->loops;
    } else {
        // A loop is pinched when some relation reads x a +- x or a x +- x
        // (expanded template), or carries a trivial path next to it.
        auto template_like = [&](const Element& r, int a) {
            if (r.size() != 2) return false;
            const Path& s = r.begin()->first;
            const Path& l = std::next(r.begin())->first;
            if (l.length() != s.length() + 1) return false;
            std::vector<int> front(l.w.begin() + 1, l.w.end()), back(l.w.begin(), l.w.end() - 1);
            return (l.w.front() == a && front == s.w) || (l.w.back() == a && back == s.w);
        };
        for (int a = 0; a < static_cast<int>(p.arrows.size()); ++a) {
            if (!p.is_loop(a)) continue;
            for (const auto& r : p.relations) {
                bool has_trivial = std::any_of(r.begin(), r.end(), [](const auto& kv) { return kv.first.is_trivial(); });
                if ((has_trivial && involves(r, a)) || template_like(r, a)) {
                    loops.push_back(a);
                    break;
                }
            }
        }
    }
    std::sort(loops.begin(), loops.end());
    loops.erase(std::unique(loops.begin(), loops.end()), loops.end());
    std::set<int> loopset(loops.begin(), loops.end());
    std::set<int> bases;
    for (int l : loops) {
        if (p.arrows[l].degree != 0)
            return fail("loop '" + p.arrows[l].name + "' has degree " + std::to_string(p.arrows[l].degree) +
                        "; pinched loops must have degree 0");
        if (!bases.insert(p.arrows[l].src).second)
            return fail("two pinched loops at vertex " + p.vertices[p.arrows[l].src]);
    }

    Decomposition d;
    d.loops = loops;
    std::map<int, LoopRoles> roles;
    for (int l : loops) roles[l] = LoopRoles{l, p.arrows[l].src};
    for (int ri = 0; ri < static_cast<int>(p.relations.size()); ++ri) {
        const Element& r = p.relations[ri];
        int a, b;
        bool touches_loop = false;
        int first_loop = -1;
        for (int l : loops)
            if (involves(r, l)) {
                touches_loop = true;
                first_loop = l;
                break;
            }
        if (!touches_loop && monomial_pair(r, a, b)) {
            d.gentle_relations.push_back(ri);
            continue;
        }
        int loop, other;
        Role role;
        if (!match_template(p, r, loopset, loop, other, role)) {
            if (touches_loop)
                return fail("loop '" + p.arrows[first_loop].name + "': relation '" + p.format_element(r) +
                            "' matches no template");
            return fail("relation '" + p.format_element(r) + "' is neither a gentle monomial nor a pinched template");
        }
        LoopRoles& lr = roles[loop];
        int* slot = role == Role::AlphaPlus    ? &lr.alpha_plus
                    : role == Role::AlphaMinus ? &lr.alpha_minus
                    : role == Role::BetaPlus   ? &lr.beta_plus
                                               : &lr.beta_minus;
        if (*slot >= 0 && *slot != other)
            return fail("loop '" + p.arrows[loop].name + "': role " + role_name(role) + " assigned twice");
        *slot = other;
        d.pinched_relations.push_back(ri);
    }
    for (int a = 0; a < static_cast<int>(p.arrows.size()); ++a)
        if (!loopset.count(a)) d.gentle_arrows.push_back(a);

    std::set<std::pair<int, int>> zero;
    for (int ri : d.gentle_relations) {
        int a, b;
        monomial_pair(p.relations[ri], a, b);
        zero.insert({a, b});
    }
    for (int l : loops) {
        const LoopRoles& lr = roles[l];
        const std::string ln = p.arrows[l].name;
        int v = lr.vertex;
        if (lr.beta_plus >= 0 && lr.alpha_minus >= 0 && !zero.count({lr.alpha_minus, lr.beta_plus}))
            return fail("loop '" + ln + "': beta+ alpha- is not a gentle relation");
        if (lr.alpha_plus >= 0 && lr.beta_minus >= 0 && !zero.count({lr.beta_minus, lr.alpha_plus}))
            return fail("loop '" + ln + "': alpha+ beta- is not a gentle relation");
        for (int a : d.gentle_arrows) {
            if (p.arrows[a].src == v && a != lr.alpha_plus && a != lr.beta_plus)
                return fail("loop '" + ln + "': outgoing arrow '" + p.arrows[a].name + "' has no template");
            if (p.arrows[a].tgt == v && a != lr.alpha_minus && a != lr.beta_minus)
                return fail("loop '" + ln + "': incoming arrow '" + p.arrows[a].name + "' has no template");
        }
        d.roles.push_back(lr);
    }
    GentleReport g = is_gentle_part(p, d.gentle_arrows, d.gentle_relations);
    if (!g.ok) return fail("gentle part: " + g.clause + " (" + g.witness + ")");

    res.ok = true;
    res.decomposition = d;
    res.presentation.decomposition = d;
    if (!normalize) return res;

    // Rewrite loops whose alpha (or beta) pair is absent as gentle loops.
    Presentation q = p;
    Decomposition nd = d;
    std::vector<int> keep_loops;
    std::vector<LoopRoles> keep_roles;
    std::set<int> dropped_rel;
    for (const LoopRoles& lr : d.roles) {
        bool alpha_absent = lr.alpha_plus < 0 && lr.alpha_minus < 0;
        bool beta_absent = lr.beta_plus < 0 && lr.beta_minus < 0;
        if (!alpha_absent && !beta_absent) {
            keep_loops.push_back(lr.loop);
            keep_roles.push_back(lr);
            continue;
        }
        res.normalized_loops.push_back(p.arrows[lr.loop].name);
        for (int ri : d.pinched_relations) {
            if (!involves(p.relations[ri], lr.loop)) continue;
            // Keep only the length-two term: gamma' = gamma +- e makes it monomial.
            Element mono;
            for (const auto& [path, c] : p.relations[ri])
                if (path.length() == 2) mono.emplace(path, Scalar(1));
            q.relations[ri] = mono;
        }
    }
    nd.loops = keep_loops;
    nd.roles = keep_roles;
    nd.gentle_arrows.clear();
    std::set<int> kl(keep_loops.begin(), keep_loops.end());
    for (int a = 0; a < static_cast<int>(q.arrows.size()); ++a)
        if (!kl.count(a)) nd.gentle_arrows.push_back(a);
    q.decomposition.reset();
    sort_relations(q);
    // Recompute relation indices after sorting.
    nd.gentle_relations.clear();
    nd.pinched_relations.clear();
    for (int ri = 0; ri < static_cast<int>(q.relations.size()); ++ri) {
        bool pinched = false;
        for (int l : keep_loops)
            if (involves(q.relations[ri], l)) pinched = true;
        (pinched ? nd.pinched_relations : nd.gentle_relations).push_back(ri);
    }
    GentleReport g2 = is_gentle_part(q, nd.gentle_arrows, nd.gentle_relations);
    if (!g2.ok) return fail("normalized gentle part: " + g2.clause + " (" + g2.witness + ")");
    q.decomposition = nd;
    if (!res.normalized_loops.empty()) {
        std::string note = "normalize loops=";
        for (std::size_t k = 0; k < res.normalized_loops.size(); ++k)
            note += (k ? "," : "") + res.normalized_loops[k];
        q.provenance.push_back(note);
    }
    res.decomposition = nd;
    res.presentation = q;
    return res;
}

bool GentleView::in_view(int a) const
{
    return std::binary_search(arrows.begin(), arrows.end(), a);
}

GentleView gentle_view(const Presentation& p)
{
    GentleView g;
    Decomposition d;
    if (p.decomposition) {
        d = *p.decomposition;
    } else {
        auto res = pinched_decompose(p, {}, false);
        if (!res.ok) throw std::invalid_argument("not a pinched-gentle presentation: " + res.message);
        d = res.decomposition;
    }
    g.arrows = d.gentle_arrows;
    std::sort(g.arrows.begin(), g.arrows.end());
    g.loops = d.loops;
    for (int ri : d.gentle_relations) {
        int a, b;
        if (monomial_pair(p.relations[ri], a, b)) g.zero.insert({a, b});
    }
    return g;
}

std::optional<Path> nonzero_cycle(const Presentation& p, const GentleView& g, int through)
{
    // Nodes are arrows; edge a -> b when b a is a nonzero composite.
    std::map<int, std::vector<int>> succ;
    for (int a : g.arrows)
        for (int b : g.arrows)
            if (p.arrows[b].src == p.arrows[a].tgt && g.nonzero(a, b)) succ[a].push_back(b);
    auto build = [&](const std::vector<int>& seq) {
        Path path;
        for (auto it = seq.rbegin(); it != seq.rend(); ++it) path.w.push_back(*it);
        path.src = p.arrows[seq.front()].src;
        path.tgt = p.arrows[seq.back()].tgt;
        return path;
    };
    if (through >= 0) {
        // BFS from succ(through) back to through gives the shortest cycle.
        std::map<int, int> parent;
        std::vector<int> frontier{through};
        parent[through] = -1;
        std::vector<int> order;
        for (std::size_t k = 0; k < frontier.size(); ++k) {
            int a = frontier[k];
            for (int b : succ[a]) {
                if (b == through) {
                    std::vector<int> seq;
                    for (int x = a; x != -1; x = parent[x]) seq.push_back(x);
                    std::reverse(seq.begin(), seq.end());
                    return build(seq);
                }
                if (!parent.count(b)) {
                    parent[b] = a;
                    frontier.push_back(b);
                }
            }
        }
        return std::nullopt;
    }
    // Any cycle: DFS with colors, arrows in index order for determinism.
    std::map<int, int> color;
    std::vector<int> stack;
    std::optional<Path> found;
    std::function<bool(int)> dfs = [&](int a) {
        color[a] = 1;
        stack.push_back(a);
        for (int b : succ[a]) {
            if (color[b] == 1) {
                auto it = std::find(stack.begin(), stack.end(), b);
                found = build(std::vector<int>(it, stack.end()));
                return true;
            }
            if (color[b] == 0 && dfs(b)) return true;
        }
        stack.pop_back();
        color[a] = 2;
        return false;
    };
    for (int a : g.arrows)
        if (color[a] == 0 && dfs(a)) return found;
    return std::nullopt;
}

std::optional<Path> quiver_cycle(const Presentation& p, const std::vector<int>& arrows, int through)
{
    int start = p.arrows[through].tgt, goal = p.arrows[through].src;
    std::map<int, int> via;  // vertex -> arrow reaching it
    std::vector<int> frontier{start};
    via[start] = -1;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
        int v = frontier[k];
        if (v == goal) {
            std::vector<int> seq{through};
            std::vector<int> back;
            for (int x = v; via[x] != -1; x = p.arrows[via[x]].src) back.push_back(via[x]);
            std::reverse(back.begin(), back.end());
            seq.insert(seq.end(), back.begin(), back.end());
            Path path;
            for (auto it = seq.rbegin(); it != seq.rend(); ++it) path.w.push_back(*it);
            path.src = p.arrows[seq.front()].src;
            path.tgt = p.arrows[seq.back()].tgt;
            return path;
        }
        for (int a : arrows)
            if (p.arrows[a].src == v && !via.count(p.arrows[a].tgt)) {
                via[p.arrows[a].tgt] = a;
                frontier.push_back(p.arrows[a].tgt);
            }
    }
    return std::nullopt;
}

int longest_nonzero_path(const Presentation& p)
{
    GentleView g = gentle_view(p);
    if (auto cyc = nonzero_cycle(p, g)) throw std::invalid_argument("nonzero cycle " + p.format_path(*cyc));
    std::map<int, int> memo;
    std::function<int(int)> from = [&](int a) {
        auto it = memo.find(a);
        if (it != memo.end()) return it->second;
        int best = 1;
        for (int b : g.arrows)
            if (p.arrows[b].src == p.arrows[a].tgt && g.nonzero(a, b)) best = std::max(best, 1 + from(b));
        return memo[a] = best;
    };
    int best = 0;
    for (int a : g.arrows) best = std::max(best, from(a));
    return best;
}

} // namespace gdg
