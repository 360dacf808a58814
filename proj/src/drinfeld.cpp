#include "gdg/drinfeld.hpp"

#include <algorithm>
#include <future>
#include <sstream>
#include <stdexcept>

namespace gdg {

std::vector<int> FilteredComplex::part(int p, int n) const
{
    std::vector<int> out;
    for (int b = 0; b < size(); ++b)
        if (filtration[b] <= p && degree[b] == n) out.push_back(b);
    return out;
}

std::vector<int> FilteredComplex::cell(int p, int n) const
{
    std::vector<int> out;
    for (int b = 0; b < size(); ++b)
        if (filtration[b] == p && degree[b] == n) out.push_back(b);
    return out;
}

std::pair<int, int> FilteredComplex::degree_range() const
{
    if (degree.empty()) return {0, -1};
    auto [lo, hi] = std::minmax_element(degree.begin(), degree.end());
    return {*lo, *hi};
}

FilteredCheck check_filtered(const FilteredComplex& fc)
{
    FilteredCheck out;
    for (int b = 0; b < fc.size(); ++b) {
        for (const auto& [i, c] : fc.d[b]) {
            if (fc.filtration[i] > fc.filtration[b]) {
                out.ok = false;
                out.violations.push_back("d raises filtration: basis " + std::to_string(b) + " (F^" +
                                         std::to_string(fc.filtration[b]) + ") hits basis " + std::to_string(i) +
                                         " (F^" + std::to_string(fc.filtration[i]) + ")");
            }
            if (fc.degree[i] != fc.degree[b] + 1) {
                out.ok = false;
                out.violations.push_back("d is not of degree 1 at basis " + std::to_string(b));
            }
        }
        if (!apply_columns(fc.field, fc.d, fc.d[b]).empty()) {
            out.ok = false;
            out.violations.push_back("d^2 != 0 on basis " + std::to_string(b));
        }
    }
    return out;
}

int SSPage::dim(int p, int q) const
{
    auto it = dims.find({p, q});
    return it == dims.end() ? 0 : it->second;
}

namespace {

Scalar parity_sign(int s) { return (s & 1) ? Scalar(-1) : Scalar(1); }

// Subspace tower with cached pieces. cycles(p, s, n) = {x in F^p C^n : dx in F^s}.
class Tower {
public:
    explicit Tower(const FilteredComplex& fc) : fc_(fc) {}

    const std::vector<SparseVec>& cycles(int p, int s, int n)
    {
        static const std::vector<SparseVec> none;
        if (p < 0) return none;
        p = std::min(p, fc_.p_max);
        s = std::clamp(s, -1, p);
        auto key = std::make_tuple(p, s, n);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto dom = fc_.part(p, n);
        std::vector<SparseVec> cols;
        cols.reserve(dom.size());
        for (int b : dom) {
            SparseVec v;
            for (const auto& [i, c] : fc_.d[b])
                if (fc_.filtration[i] > s) v.emplace_back(i, c);
            cols.push_back(std::move(v));
        }
        std::vector<SparseVec> out;
        for (const auto& k : kernel_basis(fc_.field, cols)) {
            SparseVec z;
            for (const auto& [pos, c] : k) z.emplace_back(dom[pos], c);
            out.push_back(std::move(z));
        }
        return cache_.emplace(key, std::move(out)).first->second;
    }

    // Z_r^{p} in degree n.
    const std::vector<SparseVec>& Z(int r, int p, int n) { return cycles(p, p - r, n); }

    // Z_{r-1}^{p-1} + B_r^p, B_r^p = d(Z_{r-1}^{p+r-1}).
    std::vector<SparseVec> denominator(int r, int p, int n)
    {
        std::vector<SparseVec> out = Z(r - 1, p - 1, n);
        for (const auto& y : cycles(p + r - 1, p, n - 1)) {
            SparseVec dy = apply_columns(fc_.field, fc_.d, y);
            if (!dy.empty()) out.push_back(std::move(dy));
        }
        return out;
    }

private:
    const FilteredComplex& fc_;
    std::map<std::tuple<int, int, int>, std::vector<SparseVec>> cache_;
};

SSPage build_page(const FilteredComplex& fc, Tower& T, int r)
{
    SSPage page;
    page.r = r;
    auto [lo, hi] = fc.degree_range();
    std::map<Bidegree, std::vector<SparseVec>> denom;
    for (int p = 0; p <= fc.p_max; ++p)
        for (int n = lo; n <= hi; ++n) {
            const auto& Z = T.Z(r, p, n);
            if (Z.empty()) continue;
            auto D = T.denominator(r, p, n);
            Echelon E(fc.field);
            for (const auto& v : D) E.insert(v);
            std::vector<SparseVec> reps;
            for (const auto& z : Z) {
                SparseVec res = E.reduce(z);
                if (res.empty()) continue;
                E.insert(res);
                reps.push_back(std::move(res));
            }
            if (reps.empty()) continue;
            Bidegree c{p, n - p};
            page.dims[c] = static_cast<int>(reps.size());
            page.reps[c] = std::move(reps);
            denom[c] = std::move(D);
        }
    for (const auto& [c, reps] : page.reps) {
        auto [p, q] = c;
        Bidegree t{p - r, q + r + 1};
        std::vector<SparseVec> images;
        auto rt = page.reps.find(t);
        for (const auto& x : reps) {
            SparseVec dx = apply_columns(fc.field, fc.d, x);
            if (rt == page.reps.end()) {
                // The target cell is zero on this page, so dx lies in its denominator.
                images.emplace_back();
                continue;
            }
            Echelon E(fc.field, true);
            for (const auto& v : denom[t]) E.insert_tagged(v, {});
            for (int k = 0; k < static_cast<int>(rt->second.size()); ++k) E.insert_tagged(rt->second[k], sparse_unit(k));
            SparseVec coeffs;
            if (!E.reduce(dx, &coeffs).empty()) throw std::logic_error("d_r leaves Z_r");
            images.push_back(std::move(coeffs));
        }
        page.dr[c] = std::move(images);
    }
    return page;
}

std::vector<SparseVec> boundaries(const FilteredComplex& fc, int n)
{
    std::vector<SparseVec> out;
    for (int b : fc.part(fc.p_max, n - 1)) {
        if (!fc.d[b].empty()) out.push_back(fc.d[b]);
    }
    return out;
}

std::vector<SparseVec> differential_at(const FilteredComplex& fc, int n)
{
    std::vector<SparseVec> out;
    for (int b : fc.part(fc.p_max, n)) out.push_back(fc.d[b]);
    return out;
}

std::vector<SparseVec> plain_cycles(const FilteredComplex& fc, int p, int n)
{
    Tower T(fc);
    return T.cycles(p, -1, n);
}

} // namespace

std::vector<SSPage> ss_pages(const FilteredComplex& fc, int r_max)
{
    Tower T(fc);
    std::vector<SSPage> pages;
    for (int r = 0; r <= r_max; ++r) pages.push_back(build_page(fc, T, r));
    return pages;
}

SSPage e_infinity_page(const FilteredComplex& fc)
{
    Tower T(fc);
    return build_page(fc, T, fc.p_max + 1);
}

int stabilization_index(const std::vector<SSPage>& pages, const SSPage& einf)
{
    for (const auto& pg : pages)
        if (pg.dims == einf.dims) return pg.r;
    return einf.r;
}

std::map<Bidegree, int> page_homology(const Field& F, const SSPage& page)
{
    std::map<Bidegree, int> out;
    int r = page.r;
    for (const auto& [c, d] : page.dims) {
        auto [p, q] = c;
        int outgoing = 0, incoming = 0;
        auto it = page.dr.find(c);
        if (it != page.dr.end()) outgoing = rank_of(F, it->second);
        auto in = page.dr.find({p + r, q - r - 1});
        if (in != page.dr.end()) incoming = rank_of(F, in->second);
        int h = d - outgoing - incoming;
        if (h != 0) out[c] = h;
    }
    return out;
}

std::map<int, int> total_cohomology(const FilteredComplex& fc)
{
    std::map<int, int> out;
    auto [lo, hi] = fc.degree_range();
    for (int n = lo; n <= hi; ++n) {
        auto cols = differential_at(fc, n);
        int z = static_cast<int>(cols.size()) - rank_of(fc.field, cols);
        int b = rank_of(fc.field, differential_at(fc, n - 1));
        if (z - b != 0) out[n] = z - b;
    }
    return out;
}

int filtered_image_dim(const FilteredComplex& fc, int p, int n)
{
    auto Bd = boundaries(fc, n);
    return rank_of_union(fc.field, plain_cycles(fc, p, n), Bd) - rank_of(fc.field, Bd);
}

bool spans_new_class(const FilteredComplex& fc, const SparseVec& x, int p)
{
    if (x.empty()) return false;
    int n = fc.degree[x.front().first];
    for (const auto& [i, c] : x)
        if (fc.filtration[i] > p || fc.degree[i] != n) return false;
    if (!apply_columns(fc.field, fc.d, x).empty()) return false;
    auto base = boundaries(fc, n);
    auto lower = plain_cycles(fc, p - 1, n);
    base.insert(base.end(), lower.begin(), lower.end());
    return rank_of_union(fc.field, base, {x}) > rank_of(fc.field, base);
}

FilteredReduction::FilteredReduction(const FilteredComplex& fc)
    : fc_(fc), R_(fc.size()), kind_(fc.size(), Kind::Essential), partner_(fc.size(), -1)
{
    for (int b = 1; b < fc.size(); ++b)
        if (fc.filtration[b] < fc.filtration[b - 1])
            throw std::invalid_argument("FilteredReduction: basis is not sorted by filtration");
    const Field& F = fc.field;
    // Degrees ascending, so a vector already known to be a birth is a cycle
    // and its column can be skipped.
    std::vector<int> order(fc.size());
    for (int j = 0; j < fc.size(); ++j) order[j] = j;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return fc.degree[x] < fc.degree[y]; });
    for (int j : order) {
        if (kind_[j] == Kind::Birth) continue;
        SparseVec v = fc.d[j];
        while (!v.empty()) {
            auto it = low_.find(v.back().first);
            if (it == low_.end()) break;
            const SparseVec& col = R_[it->second];
            v = sparse_axpy(F, F.neg(F.div(v.back().second, col.back().second)), col, v);
        }
        if (v.empty()) continue;
        int i = v.back().first;
        low_[i] = j;
        kind_[i] = Kind::Birth;
        kind_[j] = Kind::Death;
        partner_[i] = j;
        partner_[j] = i;
        R_[j] = std::move(v);
    }
}

int FilteredReduction::gap(int b) const
{
    if (partner_[b] < 0) return -1;
    return std::abs(fc_.filtration[b] - fc_.filtration[partner_[b]]);
}

std::map<Bidegree, int> FilteredReduction::page_dims(int r) const
{
    std::map<Bidegree, int> out;
    for (int b = 0; b < fc_.size(); ++b)
        if (kind_[b] == Kind::Essential || gap(b) >= r) {
            int p = fc_.filtration[b];
            out[{p, fc_.degree[b] - p}]++;
        }
    return out;
}

int FilteredReduction::stabilization_index() const
{
    int r = 0;
    for (int b = 0; b < fc_.size(); ++b)
        if (partner_[b] >= 0) r = std::max(r, gap(b) + 1);
    return r;
}

std::map<int, int> FilteredReduction::cohomology() const
{
    std::map<int, int> out;
    for (int b = 0; b < fc_.size(); ++b)
        if (kind_[b] == Kind::Essential) out[fc_.degree[b]]++;
    return out;
}

bool FilteredReduction::spans_new_class(const SparseVec& x, int p) const
{
    if (x.empty()) return false;
    for (const auto& [i, c] : x)
        if (fc_.filtration[i] > p) return false;
    const Field& F = fc_.field;
    if (!apply_columns(F, fc_.d, x).empty()) return false;
    SparseVec v = x;
    while (!v.empty()) {
        auto it = low_.find(v.back().first);
        if (it == low_.end()) break;
        const SparseVec& col = R_[it->second];
        v = sparse_axpy(F, F.neg(F.div(v.back().second, col.back().second)), col, v);
    }
    return !v.empty() && fc_.filtration[v.back().first] == p;
}

// ---------------------------------------------------------------- quotient

QuotientComplex::QuotientComplex(std::shared_ptr<const TruncatedAlgebra> A, int i, int j, const TwistedComplex& B,
                                 int p_max, QuotientOptions opt)
    : A_(std::move(A)), i_(i), j_(j), p_max_(p_max)
{
    if (p_max < 0) throw std::invalid_argument("filtration bound must be >= 0");
    auto Pi = TwistedComplex::projective(i);
    auto Pj = TwistedComplex::projective(j);
    xy_ = std::make_unique<HomComplex>(A_, Pi, Pj);
    xb_ = std::make_unique<HomComplex>(A_, Pi, B);
    bb_ = std::make_unique<HomComplex>(A_, B, B);
    by_ = std::make_unique<HomComplex>(A_, B, Pj);

    long total = 0;
    for (int p = 0; p <= p_max; ++p) {
        offset_.push_back(static_cast<int>(total));
        long count = 1;
        for (int t = 0; t <= p; ++t) {
            count *= factor_space(p, t).dim();
            if (count > opt.word_cap) break;
        }
        total += count;
        if (total > opt.word_cap)
            throw BudgetExceeded("quotient complex exceeds " + std::to_string(opt.word_cap) + " words at filtration " +
                                 std::to_string(p));
        for (long idx = 0; idx < count; ++idx) {
            QuotientWord w;
            w.p = p;
            long rest = idx;
            int deg = -p;
            for (int t = 0; t <= p; ++t) {
                const HomComplex& H = factor_space(p, t);
                int f = static_cast<int>(rest % H.dim());
                rest /= H.dim();
                w.factors.push_back(f);
                deg += H.basis()[f].degree;
            }
            w.degree = deg;
            words_.push_back(std::move(w));
        }
    }
    fc_.field = A_->field();
    fc_.p_max = p_max;
    for (const auto& w : words_) {
        fc_.filtration.push_back(w.p);
        fc_.degree.push_back(w.degree);
    }
    for (const auto& w : words_) fc_.d.push_back(word_differential(w));
}

const HomComplex& QuotientComplex::factor_space(int p, int t) const
{
    if (p == 0) return *xy_;
    if (t == 0) return *xb_;
    if (t == p) return *by_;
    return *bb_;
}

int QuotientComplex::index(int p, const std::vector<int>& factors) const
{
    long idx = 0, stride = 1;
    for (int t = 0; t <= p; ++t) {
        idx += factors[t] * stride;
        stride *= factor_space(p, t).dim();
    }
    return offset_.at(p) + static_cast<int>(idx);
}

const SparseVec& QuotientComplex::composed(const HomComplex& G, int g, const HomComplex& F, int f, const HomComplex& H)
{
    auto key = std::make_tuple(&G, g, &F, f);
    auto it = ccache_.find(key);
    if (it != ccache_.end()) return it->second;
    return ccache_.emplace(key, compose(G, sparse_unit(g), F, sparse_unit(f), H)).first->second;
}

// Leibniz terms keep p; the epsilon between f_k and f_{k-1} merges them.
SparseVec QuotientComplex::word_differential(const QuotientWord& w)
{
    const Field& F = A_->field();
    int p = w.p;
    std::vector<int> deg(p + 1);
    for (int t = 0; t <= p; ++t) deg[t] = factor_space(p, t).basis()[w.factors[t]].degree;
    std::map<int, Scalar> acc;
    int above = 0;  // sum of deg f_l for l > k
    for (int k = p; k >= 0; --k) {
        Scalar sign = parity_sign(above + (p - k));
        for (const auto& [idx, c] : factor_space(p, k).differential(w.factors[k])) {
            auto f = w.factors;
            f[k] = idx;
            Scalar& slot = acc[index(p, f)];
            slot = F.add(slot, F.mul(sign, c));
        }
        if (k >= 1) {
            Scalar msign = parity_sign(above + deg[k] + (p - k));
            const auto& g = composed(factor_space(p, k), w.factors[k], factor_space(p, k - 1), w.factors[k - 1],
                                     factor_space(p - 1, k - 1));
            for (const auto& [idx, c] : g) {
                std::vector<int> f;
                f.reserve(p);
                for (int t = 0; t < k - 1; ++t) f.push_back(w.factors[t]);
                f.push_back(idx);
                for (int t = k + 1; t <= p; ++t) f.push_back(w.factors[t]);
                Scalar& slot = acc[index(p - 1, f)];
                slot = F.add(slot, F.mul(msign, c));
            }
        }
        above += deg[k];
    }
    return sparse_from_map(F, acc);
}

SparseVec QuotientComplex::tensor(const std::vector<SparseVec>& factors) const
{
    const Field& F = A_->field();
    int p = static_cast<int>(factors.size()) - 1;
    if (p < 0 || p > p_max_) throw std::invalid_argument("tensor: bad number of factors");
    std::vector<std::pair<std::vector<int>, Scalar>> terms{{{}, Scalar(1)}};
    for (int t = 0; t <= p; ++t) {
        std::vector<std::pair<std::vector<int>, Scalar>> next;
        for (const auto& [f, c] : terms)
            for (const auto& [idx, a] : factors[t]) {
                auto g = f;
                g.push_back(idx);
                next.emplace_back(std::move(g), F.mul(c, a));
            }
        terms = std::move(next);
    }
    std::map<int, Scalar> acc;
    for (const auto& [f, c] : terms) {
        Scalar& slot = acc[index(p, f)];
        slot = F.add(slot, c);
    }
    return sparse_from_map(F, acc);
}

std::string QuotientComplex::format_word(int idx) const
{
    const auto& w = words_.at(idx);
    std::string s;
    for (int t = w.p; t >= 0; --t) {
        s += factor_space(w.p, t).format(sparse_unit(w.factors[t]));
        if (t > 0) s += " eps ";
    }
    return s;
}

std::string QuotientComplex::format(const SparseVec& v) const
{
    if (v.empty()) return "0";
    std::string s;
    for (const auto& [i, c] : v) {
        if (!s.empty()) s += " + ";
        if (c != 1) s += format_scalar(c) + "*";
        s += "(" + format_word(i) + ")";
    }
    return s;
}

// ---------------------------------------------------------------- Kunneth

namespace {

CohomologyTable full_cohomology(const HomComplex& H)
{
    auto ds = H.degrees();
    if (ds.empty()) return {};
    return cohomology(H, ds.front(), ds.back());
}

} // namespace

KunnethResult e1_kunneth(const QuotientComplex& Q, int pg, int q)
{
    std::vector<CohomologyTable> tabs;
    std::vector<std::string> names;
    if (pg == 0) {
        tabs.push_back(full_cohomology(Q.hom_xy()));
        names.push_back("Hom(X,Y)");
    } else {
        tabs.push_back(full_cohomology(Q.hom_xb()));
        names.push_back("Hom(X,B)");
        auto mid = full_cohomology(Q.end_b());
        for (int t = 1; t < pg; ++t) {
            tabs.push_back(mid);
            names.push_back("End(B)");
        }
        tabs.push_back(full_cohomology(Q.hom_by()));
        names.push_back("Hom(B,Y)");
    }
    KunnethResult res;
    int target = q + 2 * pg;
    std::vector<int> ks(tabs.size());
    // Depth-first over factor degrees with nonzero cohomology.
    std::function<void(int, int, long)> walk = [&](int t, int sum, long prod) {
        if (t == static_cast<int>(tabs.size())) {
            if (sum != target) return;
            res.dim += static_cast<int>(prod);
            std::string w;
            for (int u = static_cast<int>(tabs.size()) - 1; u >= 0; --u) {
                w += "H^" + std::to_string(ks[u]) + names[u];
                if (u > 0) w += " eps ";
            }
            res.words.push_back(w + " (dim " + std::to_string(prod) + ")");
            return;
        }
        for (const auto& [k, d] : tabs[t].dims) {
            if (d == 0) continue;
            ks[t] = k;
            walk(t + 1, sum + k, prod * d);
        }
    };
    walk(0, 0, 1);
    return res;
}

// ---------------------------------------------------------------- reports

namespace {

FilteredComplex truncate_filtration(const FilteredComplex& fc, int p)
{
    FilteredComplex out;
    out.field = fc.field;
    out.p_max = p;
    std::vector<int> remap(fc.size(), -1);
    for (int b = 0; b < fc.size(); ++b)
        if (fc.filtration[b] <= p) {
            remap[b] = static_cast<int>(out.filtration.size());
            out.filtration.push_back(fc.filtration[b]);
            out.degree.push_back(fc.degree[b]);
        }
    for (int b = 0; b < fc.size(); ++b) {
        if (remap[b] < 0) continue;
        SparseVec v;
        for (const auto& [i, c] : fc.d[b]) v.emplace_back(remap[i], c);
        out.d.push_back(std::move(v));
    }
    return out;
}

std::string join_ints(const std::vector<int>& v)
{
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s + "]";
}

} // namespace

QuotientCohomology quotient_cohomology(std::shared_ptr<const TruncatedAlgebra> A, int i, int j,
                                       const TwistedComplex& B, int lo, int hi, int p_max)
{
    QuotientComplex Q(A, i, j, B, p_max);
    const auto& fc = Q.filtered();
    FilteredReduction red(fc);
    auto tot = red.cohomology();
    std::map<int, int> prev;
    if (p_max > 0) {
        auto lower = truncate_filtration(fc, p_max - 1);
        prev = FilteredReduction(lower).cohomology();
    }
    auto einf = red.page_dims(p_max + 1);
    QuotientCohomology out;
    out.i = i;
    out.j = j;
    out.p_max = p_max;
    for (int n = lo; n <= hi; ++n) {
        QuotientDegree d;
        d.n = n;
        d.dim = tot.count(n) ? tot[n] : 0;
        d.stable = p_max > 0 && d.dim == (prev.count(n) ? prev[n] : 0);
        for (int p = 0; p <= p_max; ++p) {
            auto it = einf.find({p, n - p});
            d.profile.push_back(it == einf.end() ? 0 : it->second);
        }
        out.degrees.push_back(std::move(d));
    }
    return out;
}

std::string format_quotient_line(const QuotientDegree& d)
{
    return "dim=" + std::to_string(d.dim) + " stable=" + (d.stable ? "true" : "false") +
           " filtration_profile=" + join_ints(d.profile);
}

namespace {

struct ClosedFormData {
    bool ok = true;
    std::string problem;
    SparseVec z, y, t;
    int dz = 0, dy = 0, dt = 0;
};

// The single classes z in H Hom(B, Y), t in H Hom(X, B) and the degree-1 class y of End(B).
ClosedFormData closed_form_classes(const QuotientComplex& Q)
{
    ClosedFormData out;
    auto one = [&](const HomComplex& H, const std::string& name, SparseVec& v, int& deg) {
        auto tab = full_cohomology(H);
        if (tab.total() != 1) {
            out.ok = false;
            out.problem = "H*" + name + " has dimension " + std::to_string(tab.total()) + ", expected 1";
            return;
        }
        for (const auto& [n, reps] : tab.reps)
            if (!reps.empty()) {
                v = reps.front();
                deg = n;
            }
    };
    one(Q.hom_by(), "Hom(B,P_j)", out.z, out.dz);
    if (!out.ok) return out;
    one(Q.hom_xb(), "Hom(P_i,B)", out.t, out.dt);
    if (!out.ok) return out;
    auto e = full_cohomology(Q.end_b());
    if (e.total() != 2 || e.dims[0] != 1 || e.dims[1] != 1) {
        out.ok = false;
        out.problem = "H*End(B) is not one class in degree 0 and one in degree 1";
        return out;
    }
    out.y = e.reps[1].front();
    out.dy = 1;
    return out;
}

SparseVec closed_form_word(const QuotientComplex& Q, const ClosedFormData& c, int p)
{
    std::vector<SparseVec> f{c.t};
    for (int k = 1; k < p; ++k) f.push_back(c.y);
    f.push_back(c.z);
    return Q.tensor(f);
}

std::string cell_name(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

} // namespace

EInfReport e_infinity_check(std::shared_ptr<const TruncatedAlgebra> A, const Kronecker& k, const TwistedComplex& B,
                            int i, int j, int lo, int hi, int p_max)
{
    auto inside = [&](int v) { return v == k.src || v == k.tgt; };
    if (!inside(i) || !inside(j)) throw std::invalid_argument("e_infinity_check needs both vertices on the Kronecker");
    EInfReport rep;
    QuotientComplex Q(A, i, j, B, p_max);
    const auto& fc = Q.filtered();
    FilteredReduction red(fc);
    SSPage einf, e2;
    einf.dims = red.page_dims(p_max + 1);
    e2.dims = red.page_dims(2);
    rep.margin = red.stabilization_index();
    auto cf = closed_form_classes(Q);
    if (!cf.ok) {
        rep.ok = false;
        rep.mismatches.push_back(cf.problem);
        return rep;
    }
    rep.a = cf.dz + cf.dt - 1;
    int top = p_max - rep.margin;
    for (int p = 0; p <= top; ++p)
        for (int n = lo; n <= hi; ++n) {
            int q = n - p;
            int want = p == 0 ? static_cast<int>(Q.hom_xy().degree_part(q).size()) : (q == rep.a - p ? 1 : 0);
            int got = einf.dim(p, q);
            if (got != want) {
                rep.ok = false;
                rep.mismatches.push_back("E_inf" + cell_name(p, q) + " has dimension " + std::to_string(got) +
                                         ", closed form gives " + std::to_string(want));
            }
            if (got) rep.lines.push_back("E_inf" + cell_name(p, q) + " dim=" + std::to_string(got));
        }
    for (int p = 1; p <= top; ++p) {
        auto x = closed_form_word(Q, cf, p);
        if (!red.spans_new_class(x, p)) {
            rep.ok = false;
            rep.mismatches.push_back("z eps (y eps)^" + std::to_string(p - 1) + " t is not a nonzero class in E_inf" +
                                     cell_name(p, rep.a - p));
        }
    }
    for (int p = 1; p <= top; ++p)
        for (int q = rep.a + 2 - 2 * p; q < rep.a - p; ++q)
            if (e2.dim(p, q) != 0) {
                rep.ok = false;
                rep.mismatches.push_back("E_2" + cell_name(p, q) + " is nonzero inside the acyclic band");
            }
    return rep;
}

FormalityReport formality_check(const Presentation& p, const Kronecker& k, const Scalar& mu, int lo, int hi,
                                int p_max, int L, const Field& F)
{
    if (sgn(F.normalize(mu)) == 0) throw TransformError("mu must be a nonzero scalar");
    FormalityReport rep;
    if (!k.acyclic) {
        rep.ok = false;
        rep.failures.push_back("Kronecker (" + p.arrows[k.alpha].name + "," + p.arrows[k.beta].name +
                               ") is not acyclic");
        return rep;
    }
    TruncationOptions opt;
    opt.field = F;
    auto A = std::make_shared<const TruncatedAlgebra>(p, L, opt);
    auto B = band_object(p, k, F.normalize(mu));
    auto loc = localize(p, k, F.normalize(mu));
    const Presentation& lp = loc.presentation;
    int Lloc = std::max(L, 2 * p_max + 4);
    TruncatedAlgebra Aloc(lp, Lloc, opt);
    int delta = lp.arrow_index(loc.delta);

    int nv = static_cast<int>(p.vertices.size());
    struct PairResult {
        std::map<Bidegree, int> einf;
        int margin = 0;
        std::unique_ptr<QuotientComplex> Q;
        std::unique_ptr<FilteredReduction> red;
    };
    std::vector<std::future<PairResult>> jobs;
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            jobs.push_back(std::async(std::launch::async, [&, i, j] {
                PairResult r;
                r.Q = std::make_unique<QuotientComplex>(A, i, j, B, p_max);
                r.red = std::make_unique<FilteredReduction>(r.Q->filtered());
                r.einf = r.red->page_dims(p_max + 1);
                r.margin = r.red->stabilization_index();
                return r;
            }));
    std::vector<PairResult> results;
    for (auto& f : jobs) results.push_back(f.get());
    for (const auto& r : results) rep.margin = std::max(rep.margin, r.margin);
    int top = p_max - rep.margin;
    if (top < 0) {
        rep.ok = false;
        rep.failures.push_back("no filtration level survives the stabilization margin " + std::to_string(rep.margin));
        return rep;
    }

    auto name = [&](int v) { return p.vertices[v]; };
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j) {
            auto& r = results[i * nv + j];
            int li = lp.vertex_index(name(i)), lj = lp.vertex_index(name(j));
            std::map<std::pair<int, int>, int> counts;  // (delta count, degree)
            for (const Path& path : Aloc.basis(li, lj)) {
                int dc = static_cast<int>(std::count(path.w.begin(), path.w.end(), delta));
                if (dc > top) continue;
                if (path.length() >= Lloc) {
                    rep.ok = false;
                    rep.failures.push_back("localization bound " + std::to_string(Lloc) + " too short for pair (" +
                                           name(i) + "," + name(j) + ")");
                }
                counts[{dc, lp.degree(path)}]++;
            }
            bool pair_ok = true;
            for (int n = lo; n <= hi; ++n) {
                std::vector<int> qside, lside;
                int lsum = 0;
                for (int pp = 0; pp <= top; ++pp) {
                    auto e = r.einf.find({pp, n - pp});
                    qside.push_back(e == r.einf.end() ? 0 : e->second);
                    auto c = counts.find({pp, n});
                    lside.push_back(c == counts.end() ? 0 : c->second);
                    lsum += lside.back();
                }
                if (qside != lside) {
                    pair_ok = false;
                    rep.failures.push_back("pair (" + name(i) + "," + name(j) + ") degree " + std::to_string(n) +
                                           ": quotient " + join_ints(qside) + ", localization " + join_ints(lside));
                }
                int qsum = 0;
                for (int v : qside) qsum += v;
                if (lsum || qsum)
                    rep.lines.push_back("pair (" + name(i) + "," + name(j) + ") degree " + std::to_string(n) +
                                        ": quotient=" + join_ints(qside) + " localization=" + join_ints(lside));
            }
            rep.lines.push_back("pair (" + name(i) + "," + name(j) + "): " + (pair_ok ? "pass" : "FAIL"));
            if (!pair_ok) rep.ok = false;
        }

    // Generator dictionary on the four pairs over the Kronecker.
    const std::string& a = p.arrows[k.alpha].name;
    const std::string& dn = loc.delta;
    for (int i : {k.src, k.tgt})
        for (int j : {k.src, k.tgt}) {
            auto& r = results[i * nv + j];
            auto cf = closed_form_classes(*r.Q);
            if (!cf.ok) {
                rep.ok = false;
                rep.failures.push_back("dictionary (" + name(i) + "," + name(j) + "): " + cf.problem);
                continue;
            }
            for (int m = 0; m + 1 <= top; ++m) {
                std::vector<std::string> w;
                if (j == k.tgt) w.push_back(a);
                w.push_back(dn);
                for (int t = 0; t < m; ++t) {
                    w.push_back(a);
                    w.push_back(dn);
                }
                if (i == k.src) w.push_back(a);
                Path expect = lp.path_of(w);
                int li = lp.vertex_index(name(i)), lj = lp.vertex_index(name(j));
                std::vector<Path> found;
                for (const Path& path : Aloc.basis(li, lj))
                    if (std::count(path.w.begin(), path.w.end(), delta) == m + 1) found.push_back(path);
                auto x = closed_form_word(*r.Q, cf, m + 1);
                int xdeg = r.Q->filtered().degree[x.front().first];
                bool ok = found.size() == 1 && found.front() == expect && lp.degree(expect) == xdeg &&
                          r.red->spans_new_class(x, m + 1);
                std::string line = "dictionary (" + name(i) + "," + name(j) + ") n=" + std::to_string(m) +
                                   ": z eps (y eps)^" + std::to_string(m) + " t <-> " + lp.format_path(expect);
                rep.lines.push_back(line + (ok ? "" : "  FAIL"));
                if (!ok) {
                    rep.ok = false;
                    rep.failures.push_back(line);
                }
            }
        }
    return rep;
}

} // namespace gdg
