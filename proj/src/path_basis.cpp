#include "gdg/path_basis.hpp"

#include "gdg/gentle.hpp"

#include <algorithm>
#include <set>

namespace gdg {

struct TruncatedAlgebra::PairData {
    explicit PairData(const Field& F) : ech(F) {}
    std::vector<Path> paths;
    std::map<Path, int> index;
    Echelon ech;
    std::vector<Path> basis;
    std::map<Path, int> basis_index;
};

TruncatedAlgebra::TruncatedAlgebra(const Presentation& p, int L, TruncationOptions opt)
    : p_(p), L_(L), opt_(std::move(opt))
{
    if (L < 0) throw std::invalid_argument("length bound must be >= 0");
    if (opt_.slack < 0) throw std::invalid_argument("slack must be >= 0");
    for (const auto& r : p_.relations)
        if (r.size() == 1 && !r.begin()->first.is_trivial()) monomials_.push_back(r.begin()->first);
}

TruncatedAlgebra::~TruncatedAlgebra() = default;

const std::vector<Path>& TruncatedAlgebra::paths_from(int v) const
{
    auto it = from_.find(v);
    if (it != from_.end()) return it->second;
    int N = enumeration_bound();
    std::vector<Path> out{Path::trivial(v)};
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (out[k].length() >= N) continue;
        for (int a : p_.out_arrows(out[k].tgt)) {
            Path q{v, p_.arrows[a].tgt, {a}};
            q.w.insert(q.w.end(), out[k].w.begin(), out[k].w.end());
            out.push_back(std::move(q));
            if (out.size() > opt_.path_cap)
                throw BudgetExceeded("path enumeration from vertex " + p_.vertices[v] + " exceeds cap of " +
                                     std::to_string(opt_.path_cap) + " paths at length " + std::to_string(N));
        }
    }
    return from_.emplace(v, std::move(out)).first->second;
}

const TruncatedAlgebra::PairData& TruncatedAlgebra::pair(int i, int j) const
{
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(i, j);
    auto it = pairs_.find(key);
    if (it != pairs_.end()) return *it->second;

    auto d = std::make_unique<PairData>(opt_.field);
    int N = enumeration_bound();
    for (const Path& q : paths_from(i))
        if (q.tgt == j) d->paths.push_back(q);
    std::sort(d->paths.begin(), d->paths.end());
    for (int k = 0; k < static_cast<int>(d->paths.size()); ++k) d->index.emplace(d->paths[k], k);

    std::size_t generated = 0;
    for (const auto& r : p_.relations) {
        int a, b;
        if (!p_.endpoints(r, a, b)) continue;
        int lr = element_max_length(r);
        for (const Path& right : paths_from(i)) {
            if (right.tgt != a || right.length() + lr > N) continue;
            for (const Path& left : paths_from(b)) {
                if (left.tgt != j || left.length() + right.length() + lr > N) continue;
                std::map<int, Scalar> acc;
                for (const auto& [t, c] : r) {
                    Path full = concat(concat(left, t), right);
                    auto& slot = acc[d->index.at(full)];
                    slot = opt_.field.add(slot, opt_.field.normalize(c));
                }
                d->ech.insert(sparse_from_map(opt_.field, acc));
                if (++generated > opt_.path_cap)
                    throw BudgetExceeded("ideal generators for pair (" + p_.vertices[i] + ", " + p_.vertices[j] +
                                         ") exceed cap of " + std::to_string(opt_.path_cap));
            }
        }
    }
    std::set<int> piv;
    for (int pv : d->ech.pivots()) piv.insert(pv);
    for (int k = 0; k < static_cast<int>(d->paths.size()); ++k)
        if (!piv.count(k) && d->paths[k].length() <= L_) {
            d->basis_index.emplace(d->paths[k], static_cast<int>(d->basis.size()));
            d->basis.push_back(d->paths[k]);
        }
    return *pairs_.emplace(key, std::move(d)).first->second;
}

const std::vector<Path>& TruncatedAlgebra::basis(int i, int j) const
{
    return pair(i, j).basis;
}

int TruncatedAlgebra::basis_index(int i, int j, const Path& p) const
{
    const auto& d = pair(i, j);
    auto it = d.basis_index.find(p);
    return it == d.basis_index.end() ? -1 : it->second;
}

bool TruncatedAlgebra::monomial_zero(const Path& path) const
{
    for (const auto& m : monomials_)
        if (contains_subpath(path, m)) return true;
    return false;
}

Element TruncatedAlgebra::reduce(const Element& x) const
{
    const Field& F = opt_.field;
    std::map<std::pair<int, int>, Element> groups;
    for (const auto& [path, c] : x) {
        Scalar v = F.normalize(c);
        if (F.is_zero(v)) continue;
        if (path.length() > enumeration_bound()) {
            if (monomial_zero(path)) continue;
            throw TruncationOverflow("path '" + p_.format_path(path) + "' exceeds the enumeration bound " +
                                     std::to_string(enumeration_bound()));
        }
        element_add_to(F, groups[{path.src, path.tgt}], element_of(path, v));
    }
    Element out;
    for (const auto& [key, e] : groups) {
        const auto& d = pair(key.first, key.second);
        SparseVec v;
        for (const auto& [path, c] : e) v.emplace_back(d.index.at(path), c);
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [k, c] : d.ech.reduce(v)) out.emplace(d.paths[k], c);
    }
    return out;
}

Element TruncatedAlgebra::mul(const Element& a, const Element& b) const
{
    const Field& F = opt_.field;
    Element prod;
    for (const auto& [p, x] : a)
        for (const auto& [q, y] : b) {
            if (p.src != q.tgt) continue;
            Path pq = concat(p, q);
            if (pq.length() > enumeration_bound() && monomial_zero(pq)) continue;
            element_add_to(F, prod, element_of(pq, F.mul(x, y)));
        }
    return reduce(prod);
}

SparseVec TruncatedAlgebra::coords(int i, int j, const Element& x) const
{
    Element r = reduce(x);
    const auto& d = pair(i, j);
    SparseVec out;
    for (const auto& [path, c] : r) {
        if (path.src != i || path.tgt != j)
            throw std::invalid_argument("coords: element not in e_j A e_i");
        auto it = d.basis_index.find(path);
        if (it == d.basis_index.end())
            throw TruncationOverflow("normal form term '" + p_.format_path(path) + "' lies beyond length bound " +
                                     std::to_string(L_));
        out.emplace_back(it->second, c);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

Element TruncatedAlgebra::from_coords(int i, int j, const SparseVec& c) const
{
    const auto& d = pair(i, j);
    Element out;
    for (const auto& [k, v] : c) out.emplace(d.basis.at(k), v);
    return out;
}

PathBasis enumerate_paths(const Presentation& p, int i, int j, int L, const TruncationOptions& opt)
{
    TruncatedAlgebra A(p, L, opt);
    TruncatedAlgebra B(p, L + 1, opt);
    PathBasis pb;
    pb.src = i;
    pb.tgt = j;
    pb.length_bound = L;
    pb.slack = opt.slack;
    pb.paths = A.basis(i, j);
    std::vector<Path> within, longer;
    std::set<int> degrees;
    for (const Path& q : pb.paths) degrees.insert(p.degree(q));
    for (const Path& q : B.basis(i, j)) (q.length() <= L ? within : longer).push_back(q);
    pb.slack_stable = within == pb.paths;
    for (const Path& q : longer)
        if (degrees.count(p.degree(q))) pb.length_stable = false;
    return pb;
}

FiniteReport is_finite_dimensional(const Presentation& p, int budget, const TruncationOptions& opt)
{
    FiniteReport rep;
    auto dec = pinched_decompose(p, {}, false);
    if (p.decomposition) dec = pinched_decompose(p, false);
    if (dec.ok) {
        if (!dec.decomposition.loops.empty()) {
            int l = dec.decomposition.loops.front();
            rep.verdict = FiniteReport::Verdict::Infinite;
            rep.witness = p.arrow_path(l);
            rep.message = "pinched loop " + p.arrows[l].name + " has nonzero powers";
            return rep;
        }
        Presentation q = p;
        q.decomposition = dec.decomposition;
        auto cyc = nonzero_cycle(q, gentle_view(q));
        if (cyc) {
            rep.verdict = FiniteReport::Verdict::Infinite;
            rep.witness = cyc;
            rep.message = "relation-free cycle " + p.format_path(*cyc);
        } else {
            rep.message = "no relation-free cycle";
        }
        return rep;
    }

    // General relations: look for closed basis paths whose powers survive.
    TruncatedAlgebra A(p, budget, opt);
    std::vector<Path> cycles;
    for (int v = 0; v < static_cast<int>(p.vertices.size()); ++v)
        for (const Path& c : A.basis(v, v))
            if (c.length() >= 1 && 2 * c.length() <= budget) cycles.push_back(c);
    std::sort(cycles.begin(), cycles.end());
    for (const Path& c : cycles) {
        Element pw = element_of(c);
        bool alive = true;
        for (int k = 2; k * c.length() <= budget && alive; ++k) {
            pw = A.mul(pw, element_of(c));
            alive = !pw.empty();
        }
        if (alive) {
            rep.verdict = FiniteReport::Verdict::Infinite;
            rep.witness = c;
            rep.message = "powers of " + p.format_path(c) + " survive up to length " + std::to_string(budget);
            return rep;
        }
    }
    bool top_empty = true;
    for (int i = 0; i < static_cast<int>(p.vertices.size()) && top_empty; ++i)
        for (int j = 0; j < static_cast<int>(p.vertices.size()) && top_empty; ++j)
            for (const Path& q : A.basis(i, j))
                if (q.length() == budget) top_empty = false;
    if (top_empty) {
        rep.message = "no basis path of length " + std::to_string(budget);
        return rep;
    }
    rep.verdict = FiniteReport::Verdict::Undecided;
    rep.message = "undecidable within budget " + std::to_string(budget);
    return rep;
}

} // namespace gdg
