#include "gdg/surface.hpp"

#include "gdg/gentle.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace gdg {

namespace {

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n) { std::iota(up.begin(), up.end(), 0); }
    int find(int x)
    {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    }
    void join(int a, int b) { up[find(a)] = find(b); }
};

std::vector<std::vector<int>> orbits(int n, const std::function<int(int)>& next)
{
    std::vector<std::vector<int>> out;
    std::vector<char> seen(n, 0);
    for (int h = 0; h < n; ++h) {
        if (seen[h]) continue;
        std::vector<int> orb;
        int x = h;
        while (!seen[x]) {
            seen[x] = 1;
            orb.push_back(x);
            x = next(x);
        }
        if (x != h) throw SurfaceError("internal: permutation orbit does not close");
        out.push_back(std::move(orb));
    }
    return out;
}

int fan_degree_sum(const RibbonSurface& s, const std::vector<int>& fan)
{
    int t = 0;
    for (int h : fan)
        if (!s.corner[h].gap) t += s.corner[h].degree;
    return t;
}

} // namespace

std::vector<std::vector<int>> RibbonSurface::faces() const
{
    return orbits(half_edges(), [this](int h) { return sigma[h ^ 1]; });
}

std::vector<std::vector<int>> RibbonSurface::fans() const
{
    return orbits(half_edges(), [this](int h) { return sigma[h]; });
}

bool RibbonSurface::fan_is_cyclic(const std::vector<int>& fan) const
{
    return std::none_of(fan.begin(), fan.end(), [this](int h) { return corner[h].gap; });
}

std::vector<std::vector<int>> RibbonSurface::components() const
{
    int n = static_cast<int>(arcs.size());
    UnionFind uf(n);
    for (int h = 0; h < half_edges(); ++h) uf.join(h >> 1, sigma[h] >> 1);
    std::map<int, std::vector<int>> by_root;
    for (int a = 0; a < n; ++a) by_root[uf.find(a)].push_back(a);
    std::vector<std::vector<int>> out;
    for (auto& [r, v] : by_root) out.push_back(std::move(v));
    std::sort(out.begin(), out.end());
    return out;
}

RibbonSurface surface_from_gentle(const Presentation& p)
{
    auto rep = is_gentle(p);
    if (!rep.ok) throw SurfaceError("not gentle: " + rep.clause + (rep.witness.empty() ? "" : " (" + rep.witness + ")"));
    GentleView g = gentle_view(p);
    int n = static_cast<int>(p.vertices.size());
    RibbonSurface s;
    s.arcs = p.vertices;
    std::vector<int> in_arrow(2 * n, -1), out_arrow(2 * n, -1);
    for (int v = 0; v < n; ++v) {
        std::vector<std::pair<int, int>> ends;  // (in, out)
        auto ins = p.in_arrows(v), outs = p.out_arrows(v);
        std::vector<char> in_used(ins.size(), 0), out_used(outs.size(), 0);
        for (size_t x = 0; x < ins.size(); ++x)
            for (size_t y = 0; y < outs.size(); ++y)
                if (!in_used[x] && !out_used[y] && g.nonzero(ins[x], outs[y])) {
                    ends.push_back({ins[x], outs[y]});
                    in_used[x] = out_used[y] = 1;
                }
        for (size_t x = 0; x < ins.size(); ++x)
            if (!in_used[x]) ends.push_back({ins[x], -1});
        for (size_t y = 0; y < outs.size(); ++y)
            if (!out_used[y]) ends.push_back({-1, outs[y]});
        if (ends.size() > 2)
            throw SurfaceError("internal: fan assembly gives " + std::to_string(ends.size()) + " ends at arc " + p.vertices[v]);
        for (size_t e = 0; e < ends.size(); ++e) {
            in_arrow[2 * v + e] = ends[e].first;
            out_arrow[2 * v + e] = ends[e].second;
        }
    }
    // Half-edge carrying a given in-arrow, and the one carrying an out-arrow.
    std::map<int, int> by_in, by_out;
    for (int h = 0; h < 2 * n; ++h) {
        if (in_arrow[h] >= 0) by_in[in_arrow[h]] = h;
        if (out_arrow[h] >= 0) by_out[out_arrow[h]] = h;
    }
    s.sigma.assign(2 * n, -1);
    s.corner.assign(2 * n, Corner{});
    for (int h = 0; h < 2 * n; ++h) {
        int b = out_arrow[h];
        if (b >= 0) {
            s.sigma[h] = by_in.at(b);
            s.corner[h] = Corner{false, p.arrows[b].name, p.arrows[b].degree};
            continue;
        }
        int start = h, steps = 0;
        while (in_arrow[start] >= 0) {
            start = by_out.at(in_arrow[start]);
            if (++steps > 2 * n) throw SurfaceError("internal: linear fan does not terminate");
        }
        s.sigma[h] = start;
        s.corner[h] = Corner{true, "", 0};
    }
    return s;
}

RibbonSurface pinched_surface(const Presentation& p)
{
    if (!p.decomposition || p.decomposition->loops.empty()) return surface_from_gentle(p);
    auto rr = resolve_loops(p);
    RibbonSurface s = surface_from_gentle(rr.presentation);
    auto cyclic_at = [&](const std::string& loop) {
        for (int h = 0; h < s.half_edges(); ++h)
            if (!s.corner[h].gap && s.corner[h].arrow == loop && s.sigma[h] == h) return h;
        throw SurfaceError("internal: loop " + loop + " is not a one-corner circle puncture");
    };
    for (const auto& lp : rr.pairing) {
        s.singularities.push_back({cyclic_at(lp.loop_alpha), cyclic_at(lp.loop_beta)});
        s.singularity_names.push_back(lp.loop);
    }
    auto inv = surface_invariants(s);
    auto comps = s.components();
    std::vector<int> comp_of(s.arcs.size());
    for (size_t c = 0; c < comps.size(); ++c)
        for (int a : comps[c]) comp_of[a] = static_cast<int>(c);
    for (size_t k = 0; k < s.singularities.size(); ++k) {
        int ca = comp_of[s.singularities[k].first >> 1], cb = comp_of[s.singularities[k].second >> 1];
        if (ca != cb) continue;
        const auto& c = inv.components[ca];
        if (c.genus == 0 && c.boundaries.empty() && c.dot_punctures == 1 && c.circle_punctures == 0 &&
            c.singular_punctures == 2)
            throw SurfaceError("excluded configuration: sphere whose only marked points are one dot puncture and the "
                               "two punctures of singularity " + s.singularity_names[k]);
    }
    return s;
}

RibbonSurface surface_of(const Presentation& p)
{
    if (p.decomposition && !p.decomposition->loops.empty()) return pinched_surface(p);
    if (!p.decomposition) {
        auto d = pinched_decompose(p, {}, false);
        if (d.ok && !d.decomposition.loops.empty()) return pinched_surface(with_pinched(p, [&] {
            std::vector<std::string> names;
            for (int l : d.decomposition.loops) names.push_back(p.arrows[l].name);
            return names;
        }()));
    }
    return surface_from_gentle(p);
}

RibbonSurface regrade(const RibbonSurface& s, const Presentation& p, const std::map<std::string, int>& G)
{
    RibbonSurface out = s;
    for (auto& c : out.corner) {
        if (c.gap || c.arrow.empty()) continue;
        auto it = G.find(c.arrow);
        if (it != G.end()) {
            c.degree = it->second;
        } else {
            int a = p.arrow_index(c.arrow);
            if (a >= 0) c.degree = p.arrows[a].degree;
        }
    }
    return out;
}

SurfaceInvariants surface_invariants(const RibbonSurface& s)
{
    SurfaceInvariants inv;
    auto comps = s.components();
    std::vector<int> comp_of(s.arcs.size());
    for (size_t c = 0; c < comps.size(); ++c)
        for (int a : comps[c]) comp_of[a] = static_cast<int>(c);
    inv.components.resize(comps.size());
    for (size_t c = 0; c < comps.size(); ++c) {
        inv.components[c].arcs = comps[c];
        inv.components[c].edges = static_cast<int>(comps[c].size());
    }

    auto fans = s.fans();
    std::vector<int> fan_of(s.half_edges());
    for (size_t f = 0; f < fans.size(); ++f)
        for (int h : fans[f]) fan_of[h] = static_cast<int>(f);
    std::vector<int> fan_sum(fans.size());
    for (size_t f = 0; f < fans.size(); ++f) fan_sum[f] = fan_degree_sum(s, fans[f]);
    std::set<int> singular_fans;
    for (auto [a, b] : s.singularities) {
        singular_fans.insert(fan_of[a]);
        singular_fans.insert(fan_of[b]);
    }

    std::vector<int> singular_w;
    std::vector<std::vector<int>> circle_w(comps.size());
    for (size_t f = 0; f < fans.size(); ++f) {
        auto& cd = inv.components[comp_of[fans[f][0] >> 1]];
        ++cd.vertices;
        if (!s.fan_is_cyclic(fans[f])) continue;
        if (singular_fans.count(static_cast<int>(f)))
            ++cd.singular_punctures;
        else
            ++cd.circle_punctures;
        circle_w[comp_of[fans[f][0] >> 1]].push_back(-fan_sum[f]);
    }

    std::vector<std::vector<int>> dot_w(comps.size());
    for (const auto& face : s.faces()) {
        auto& cd = inv.components[comp_of[face[0] >> 1]];
        ++cd.faces;
        int gaps = 0, w = 0;
        bool plain = false;
        for (int h : face) {
            int c = h ^ 1;  // the corner passed after traversing h's arc
            if (s.plain_faces.count(h)) plain = true;
            if (s.corner[c].gap) {
                ++gaps;
                w += 1 - fan_sum[fan_of[c]];
            } else {
                w += s.corner[c].degree - 1;
            }
        }
        if (gaps > 0) {
            cd.boundaries.push_back(BoundaryData{gaps, gaps, w, face});
        } else if (plain) {
            ++cd.plain_faces;
        } else {
            ++cd.dot_punctures;
            dot_w[comp_of[face[0] >> 1]].push_back(w);
        }
    }

    for (size_t c = 0; c < comps.size(); ++c) {
        auto& cd = inv.components[c];
        cd.euler = cd.vertices - cd.edges;
        int twice = 2 - cd.euler - cd.faces;
        if (twice < 0 || twice % 2 != 0)
            throw SurfaceError("internal: Euler characteristic of component " + std::to_string(c) + " is inconsistent");
        cd.genus = twice / 2;
        cd.puncture_windings = circle_w[c];
        cd.puncture_windings.insert(cd.puncture_windings.end(), dot_w[c].begin(), dot_w[c].end());
    }
    for (auto [a, b] : s.singularities) inv.singularity_components.push_back({comp_of[a >> 1], comp_of[b >> 1]});
    return inv;
}

std::vector<std::string> format_surface(const SurfaceInvariants& inv)
{
    std::vector<std::string> out;
    for (size_t c = 0; c < inv.components.size(); ++c) {
        const auto& cd = inv.components[c];
        std::ostringstream os;
        os << "component " << c << ": genus " << cd.genus << ", boundaries [";
        for (size_t b = 0; b < cd.boundaries.size(); ++b) {
            const auto& bd = cd.boundaries[b];
            os << (b ? ", " : "") << "(○=" << bd.circles << ", ●=" << bd.dots << ", w=" << bd.winding << ")";
        }
        os << "], punctures (○=" << cd.circle_punctures << ", ●=" << cd.dot_punctures
           << "), singularities=" << cd.singular_punctures;
        out.push_back(os.str());
    }
    for (size_t k = 0; k < inv.singularity_components.size(); ++k)
        out.push_back("singularity " + std::to_string(k) + ": component " +
                      std::to_string(inv.singularity_components[k].first) + " ~ component " +
                      std::to_string(inv.singularity_components[k].second));
    return out;
}

bool is_admissible(const RibbonSurface& s)
{
    // A face walk with k boundary gaps splits into k polygons, each with one
    // boundary segment and so one dot; a closed walk needs its dot puncture.
    // Faces made by cutting are exempt.
    for (int h = 0; h < s.half_edges(); ++h)
        if (s.sigma[h] < 0 || s.sigma[h] >= s.half_edges()) return false;
    std::vector<int> seen(s.half_edges(), 0);
    for (int h : s.sigma)
        if (seen[h]++) return false;
    for (const auto& face : s.faces()) {
        if (face.empty()) return false;
        int gaps = 0;
        for (int h : face) gaps += s.corner[h ^ 1].gap ? 1 : 0;
        bool plain = std::any_of(face.begin(), face.end(), [&](int h) { return s.plain_faces.count(h) > 0; });
        if (gaps > 0 && plain) return false;
    }
    return true;
}

WindingReport boundary_winding_numbers(const RibbonSurface& s)
{
    WindingReport rep;
    auto inv = surface_invariants(s);
    for (size_t c = 0; c < inv.components.size(); ++c) {
        const auto& cd = inv.components[c];
        long sum = 0;
        int r = 0;
        std::ostringstream os;
        os << "component " << c << ":";
        for (size_t b = 0; b < cd.boundaries.size(); ++b) {
            std::string label = "c" + std::to_string(c) + ".boundary" + std::to_string(b + 1);
            rep.labels.push_back(label);
            rep.windings.push_back(cd.boundaries[b].winding);
            sum += cd.boundaries[b].winding;
            ++r;
            os << " boundary" << b + 1 << " w=" << cd.boundaries[b].winding;
        }
        for (size_t q = 0; q < cd.puncture_windings.size(); ++q) {
            std::string label = "c" + std::to_string(c) + ".puncture" + std::to_string(q + 1);
            rep.labels.push_back(label);
            rep.windings.push_back(cd.puncture_windings[q]);
            sum += cd.puncture_windings[q];
            ++r;
            os << " puncture" << q + 1 << " w=" << cd.puncture_windings[q];
        }
        long expect = 4 - 2L * r - 4L * cd.genus;
        bool ok = sum == expect;
        rep.identity_holds = rep.identity_holds && ok;
        os << "; sum=" << sum << " 4-2r-4g=" << expect << " (r=" << r << ", g=" << cd.genus << ") "
           << (ok ? "ok" : "FAIL");
        rep.lines.push_back(os.str());
    }
    return rep;
}

WindingReport boundary_winding_numbers(const Presentation& p, const std::map<std::string, int>& G)
{
    return boundary_winding_numbers(regrade(surface_of(p), p, G));
}

int kronecker_curve_winding(const Presentation& p, const Kronecker& k, const std::map<std::string, int>& G)
{
    auto deg = [&](int a) {
        auto it = G.find(p.arrows[a].name);
        return it != G.end() ? it->second : p.arrows[a].degree;
    };
    return deg(k.alpha) - deg(k.beta);
}

std::map<std::string, int> presentation_grading(const Presentation& p)
{
    std::map<std::string, int> G;
    for (const auto& a : p.arrows) G[a.name] = a.degree;
    return G;
}

RibbonSurface cut_along_kronecker(const RibbonSurface& s, const Presentation& p, const Kronecker& k)
{
    const std::string& an = p.arrows[k.alpha].name;
    const std::string& bn = p.arrows[k.beta].name;
    int h1 = -1, g1 = -1;
    for (int h = 0; h < s.half_edges(); ++h) {
        if (s.corner[h].gap) continue;
        if (s.corner[h].arrow == an) h1 = h;
        if (s.corner[h].arrow == bn) g1 = h;
    }
    if (h1 < 0 || g1 < 0) throw SurfaceError("Kronecker arrows " + an + ", " + bn + " are not corners of the surface");
    int h2 = s.sigma[h1], g2 = s.sigma[g1];
    if (g1 != (h1 ^ 1) || g2 != (h2 ^ 1) || (h1 >> 1) == (h2 >> 1))
        throw SurfaceError("Kronecker corners " + an + ", " + bn + " do not bound a two-gon");
    int da = s.corner[h1].degree, db = s.corner[g1].degree;

    int n = static_cast<int>(s.arcs.size());
    int m1 = 2 * n, d1 = 2 * n + 1, m2 = 2 * n + 2, d2 = 2 * n + 3;
    int c1 = g1, c2 = g2;
    auto remap = [&](int x) { return x == g1 ? m1 : x == g2 ? m2 : x; };

    RibbonSurface out;
    out.arcs = s.arcs;
    out.arcs.push_back(s.arcs[h1 >> 1] + "'");
    out.arcs.push_back(s.arcs[h2 >> 1] + "'");
    out.sigma.assign(2 * n + 4, -1);
    out.corner.assign(2 * n + 4, Corner{});
    for (int h = 0; h < s.half_edges(); ++h) {
        out.sigma[remap(h)] = remap(s.sigma[h]);
        out.corner[remap(h)] = s.corner[h];
    }
    // The two new circle punctures: one between the old arcs, one between the copies.
    out.sigma[c1] = c2;
    out.corner[c1] = Corner{false, "", db};
    out.sigma[c2] = c1;
    out.corner[c2] = Corner{false, "", -da};
    out.sigma[d1] = d2;
    out.corner[d1] = Corner{false, "", da};
    out.sigma[d2] = d1;
    out.corner[d2] = Corner{false, "", -db};

    out.plain_faces = {};
    for (int h : s.plain_faces) out.plain_faces.insert(remap(h));
    out.plain_faces.insert(c1);
    out.plain_faces.insert(d1);
    for (auto [a, b] : s.singularities) out.singularities.push_back({remap(a), remap(b)});
    out.singularity_names = s.singularity_names;
    out.singularities.push_back({c1, d1});
    out.singularity_names.push_back("(" + an + "," + bn + ")");
    return out;
}

namespace {

std::vector<std::string> component_signatures(const SurfaceInvariants& inv)
{
    std::vector<std::string> sig;
    for (const auto& cd : inv.components) {
        std::vector<std::tuple<int, int, int>> bds;
        for (const auto& b : cd.boundaries) bds.emplace_back(b.circles, b.dots, b.winding);
        std::sort(bds.begin(), bds.end());
        auto pw = cd.puncture_windings;
        std::sort(pw.begin(), pw.end());
        std::ostringstream os;
        os << "g=" << cd.genus << " boundaries=[";
        for (size_t i = 0; i < bds.size(); ++i)
            os << (i ? "," : "") << "(" << std::get<0>(bds[i]) << "," << std::get<1>(bds[i]) << ","
               << std::get<2>(bds[i]) << ")";
        os << "] circle=" << cd.circle_punctures << " dot=" << cd.dot_punctures << " singular=" << cd.singular_punctures
           << " puncture_w=[";
        for (size_t i = 0; i < pw.size(); ++i) os << (i ? "," : "") << pw[i];
        os << "]";
        sig.push_back(os.str());
    }
    return sig;
}

std::vector<std::string> tuple_of(const SurfaceInvariants& inv)
{
    auto sig = component_signatures(inv);
    std::vector<std::string> out = sig;
    std::sort(out.begin(), out.end());
    std::vector<std::string> joins;
    for (auto [a, b] : inv.singularity_components) {
        std::string x = sig[a], y = sig[b];
        if (y < x) std::swap(x, y);
        joins.push_back("singularity joins {" + x + "} ~ {" + y + "}");
    }
    std::sort(joins.begin(), joins.end());
    out.insert(out.end(), joins.begin(), joins.end());
    return out;
}

} // namespace

ContractionReport contraction_check(const Presentation& p, const Kronecker& k)
{
    ContractionReport rep;
    auto pr = pinch(p, k);
    auto pinched_inv = surface_invariants(surface_of(pr.presentation));
    RibbonSurface base = surface_of(p);
    auto base_inv = surface_invariants(base);
    auto cut_inv = surface_invariants(cut_along_kronecker(base, p, k));
    rep.separating = cut_inv.components.size() > base_inv.components.size();
    rep.pinched_side = tuple_of(pinched_inv);
    rep.contracted_side = tuple_of(cut_inv);
    rep.ok = rep.pinched_side == rep.contracted_side;
    for (const auto& l : rep.pinched_side) rep.lines.push_back("pinched: " + l);
    for (const auto& l : rep.contracted_side) rep.lines.push_back("contracted: " + l);
    rep.lines.push_back(std::string("core curve ") + (rep.separating ? "separating" : "nonseparating"));
    rep.lines.push_back(rep.ok ? "tuple match (invariant tuples only, not a homeomorphism test)" : "tuple mismatch");
    return rep;
}

} // namespace gdg
