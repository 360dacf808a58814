#include "gdg/fuzz.hpp"

#include "gdg/surface.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <random>

namespace gdg::fuzz {

namespace {

using End = std::pair<int, int>;  // (vertex, slot)

int uniform(std::mt19937_64& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Term arrow_term(std::vector<std::string> arrows)
{
    Term t;
    t.arrows = std::move(arrows);
    return t;
}

bool connected(int n, const std::vector<std::pair<int, int>>& edges)
{
    std::vector<int> up(n);
    std::iota(up.begin(), up.end(), 0);
    std::function<int(int)> find = [&](int x) { return up[x] == x ? x : up[x] = find(up[x]); };
    for (auto [a, b] : edges) up[find(a)] = find(b);
    for (int v = 0; v < n; ++v)
        if (find(v) != find(0)) return false;
    return true;
}

std::optional<Instance> attempt(std::mt19937_64& rng, const GentleSpec& spec)
{
    const int n = spec.vertices;
    if (2 * spec.kroneckers > n) throw std::invalid_argument("too many planted Kroneckers for the vertex count");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);

    // Items are runs of ends kept adjacent; planted pairs are two-end runs.
    std::vector<std::vector<End>> items;
    std::vector<char> planted(n, 0);
    for (int t = 0; t < spec.kroneckers; ++t) {
        int u = perm[2 * t], v = perm[2 * t + 1];
        planted[u] = planted[v] = 1;
        items.push_back({{u, 0}, {v, 0}});
        items.push_back({{u, 1}, {v, 1}});
    }
    for (int v = 0; v < n; ++v)
        if (!planted[v]) {
            items.push_back({{v, 0}});
            items.push_back({{v, 1}});
        }
    std::shuffle(items.begin(), items.end(), rng);

    std::vector<std::vector<End>> fans;
    std::vector<int> fan_of_item(items.size());
    for (size_t i = 0; i < items.size(); ++i) {
        if (fans.empty() || uniform(rng, 0, 99) < spec.break_percent) fans.emplace_back();
        fan_of_item[i] = static_cast<int>(fans.size()) - 1;
        fans.back().insert(fans.back().end(), items[i].begin(), items[i].end());
    }
    // The two halves of a planted pair must sit on different fans.
    std::vector<char> holds_planted(fans.size(), 0);
    for (size_t i = 0; i < items.size(); ++i) {
        if (items[i].size() != 2) continue;
        holds_planted[fan_of_item[i]] = 1;
        for (size_t j = i + 1; j < items.size(); ++j)
            if (items[j].size() == 2 && items[j][0].first == items[i][0].first && fan_of_item[j] == fan_of_item[i])
                return std::nullopt;
    }
    std::vector<char> cyclic(fans.size(), 0);
    for (size_t f = 0; f < fans.size(); ++f)
        if (spec.allow_cycles && !holds_planted[f] && fans[f].size() >= 2 && uniform(rng, 0, 99) < 30) cyclic[f] = 1;

    struct Raw {
        End from, to;
    };
    std::vector<Raw> raw;
    for (size_t f = 0; f < fans.size(); ++f) {
        const auto& fan = fans[f];
        size_t m = fan.size();
        size_t steps = cyclic[f] ? m : m - 1;
        for (size_t e = 0; e < steps; ++e) {
            End a = fan[e], b = fan[(e + 1) % m];
            if (a.first == b.first) return std::nullopt;  // no loops in gentle parts
            raw.push_back({a, b});
        }
    }
    if (spec.connected && n > 1) {
        std::vector<std::pair<int, int>> edges;
        for (const auto& r : raw) edges.push_back({r.from.first, r.to.first});
        if (!connected(n, edges)) return std::nullopt;
    }

    Instance inst;
    PresentationBuilder b;
    auto vname = [](int v) { return "v" + std::to_string(v); };
    for (int v = 0; v < n; ++v) b.add_vertex(vname(v));
    std::map<End, std::string> in_at, out_at;
    std::vector<int> kdeg(spec.kroneckers);
    for (auto& d : kdeg) d = uniform(rng, spec.min_degree, spec.max_degree);
    int plain = 0;
    for (const auto& r : raw) {
        std::string name;
        int deg = uniform(rng, spec.min_degree, spec.max_degree);
        for (int t = 0; t < spec.kroneckers; ++t)
            if (r.from.first == perm[2 * t] && r.to.first == perm[2 * t + 1] && r.from.second == r.to.second) {
                name = std::string(r.from.second == 0 ? "ka" : "kb") + std::to_string(t);
                deg = kdeg[t];
            }
        if (name.empty()) name = "a" + std::to_string(plain++);
        b.add_arrow(name, vname(r.from.first), vname(r.to.first), deg);
        out_at[r.from] = name;
        in_at[r.to] = name;
    }
    for (int v = 0; v < n; ++v)
        for (int s = 0; s < 2; ++s) {
            auto in = in_at.find({v, s});
            auto out = out_at.find({v, 1 - s});
            if (in != in_at.end() && out != out_at.end()) b.add_relation({arrow_term({out->second, in->second})});
        }
    b.add_provenance("fuzz gentle vertices=" + std::to_string(n) + " kroneckers=" + std::to_string(spec.kroneckers));
    inst.presentation = b.build();
    for (int t = 0; t < spec.kroneckers; ++t)
        inst.kroneckers.push_back({"ka" + std::to_string(t), "kb" + std::to_string(t)});
    return inst;
}

} // namespace

Instance random_gentle(std::uint64_t seed, const GentleSpec& spec)
{
    std::mt19937_64 rng(seed);
    for (int tries = 0; tries < 100000; ++tries) {
        auto inst = attempt(rng, spec);
        if (inst) {
            inst->seed = seed;
            return *inst;
        }
    }
    throw std::runtime_error("random_gentle: no instance after 100000 attempts (seed " + std::to_string(seed) + ")");
}

std::map<std::string, int> random_grading(const Presentation& p, std::uint64_t seed, int lo, int hi)
{
    std::mt19937_64 rng(seed);
    std::map<std::string, int> G;
    for (const auto& a : p.arrows) G[a.name] = uniform(rng, lo, hi);
    return G;
}

std::vector<Instance> pinched_instances(int count, std::uint64_t seed)
{
    std::vector<Instance> out;
    for (std::uint64_t s = seed; static_cast<int>(out.size()) < count; ++s) {
        std::mt19937_64 pick(s);
        GentleSpec spec;
        spec.vertices = uniform(pick, 5, 8);
        spec.kroneckers = 2;
        auto inst = random_gentle(s, spec);
        const auto& p = inst.presentation;
        try {
            auto k1 = kronecker_by_names(p, inst.kroneckers[0].first, inst.kroneckers[0].second);
            if (!k1.acyclic) continue;
            auto pr = pinch(p, k1);
            auto k2 = kronecker_by_names(pr.presentation, inst.kroneckers[1].first, inst.kroneckers[1].second);
            if (!k2.acyclic) continue;
            Instance q;
            q.presentation = pr.presentation;
            q.kroneckers = {inst.kroneckers[1]};
            q.seed = s;
            out.push_back(std::move(q));
        } catch (const std::exception&) {
            continue;
        }
    }
    return out;
}

std::vector<Instance> contraction_instances(int count, std::uint64_t seed)
{
    int want_sep = count / 2, want_non = count - want_sep;
    std::vector<Instance> sep, non;
    for (std::uint64_t s = seed; static_cast<int>(sep.size()) < want_sep || static_cast<int>(non.size()) < want_non;
         ++s) {
        if (s - seed > 200000) throw std::runtime_error("contraction_instances: search exhausted");
        std::mt19937_64 pick(s);
        GentleSpec spec;
        spec.vertices = uniform(pick, 3, 8);
        spec.kroneckers = 1;
        spec.allow_cycles = uniform(pick, 0, 1) == 1;
        auto inst = random_gentle(s, spec);
        const auto& p = inst.presentation;
        try {
            auto k = kronecker_by_names(p, inst.kroneckers[0].first, inst.kroneckers[0].second);
            if (!k.acyclic) continue;
            auto base = surface_from_gentle(p);
            auto before = base.components().size();
            auto after = cut_along_kronecker(base, p, k).components().size();
            auto& bucket = after > before ? sep : non;
            int want = after > before ? want_sep : want_non;
            if (static_cast<int>(bucket.size()) < want) bucket.push_back(std::move(inst));
        } catch (const std::exception&) {
            continue;
        }
    }
    std::vector<Instance> out;
    for (size_t i = 0; i < std::max(sep.size(), non.size()); ++i) {
        if (i < sep.size()) out.push_back(sep[i]);
        if (i < non.size()) out.push_back(non[i]);
    }
    return out;
}

std::vector<Instance> surface_instances(int count, std::uint64_t seed)
{
    std::vector<Instance> out;
    for (std::uint64_t s = seed; static_cast<int>(out.size()) < count; ++s) {
        std::mt19937_64 pick(s);
        GentleSpec spec;
        spec.vertices = uniform(pick, 2, 9);
        spec.allow_cycles = uniform(pick, 0, 1) == 1;
        auto inst = random_gentle(s, spec);
        if (inst.presentation.arrows.empty()) continue;
        out.push_back(std::move(inst));
    }
    return out;
}

} // namespace gdg::fuzz
