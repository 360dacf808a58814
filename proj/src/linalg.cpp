#include "gdg/linalg.hpp"

#include "gdg/modp_kernels.hpp"

namespace gdg {

SparseVec sparse_unit(int i)
{
    return SparseVec{{i, Scalar(1)}};
}

SparseVec sparse_axpy(const Field& F, const Scalar& a, const SparseVec& x, const SparseVec& y)
{
    SparseVec out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            Scalar v = F.mul(a, x[i].second);
            if (!F.is_zero(v)) out.emplace_back(x[i].first, v);
            ++i;
        } else if (i == x.size() || y[j].first < x[i].first) {
            out.push_back(y[j]);
            ++j;
        } else {
            Scalar v = F.add(y[j].second, F.mul(a, x[i].second));
            if (!F.is_zero(v)) out.emplace_back(x[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVec sparse_scale(const Field& F, const Scalar& a, const SparseVec& x)
{
    SparseVec out;
    if (F.is_zero(a)) return out;
    out.reserve(x.size());
    for (const auto& [i, v] : x) out.emplace_back(i, F.mul(a, v));
    return out;
}

SparseVec sparse_from_map(const Field& F, const std::map<int, Scalar>& m)
{
    SparseVec out;
    for (const auto& [i, v] : m) {
        Scalar n = F.normalize(v);
        if (!F.is_zero(n)) out.emplace_back(i, n);
    }
    return out;
}

namespace {

// Eliminates pivot entries of w from the top down; tag tracks the combination.
void eliminate(const Field& F, const std::map<int, SparseVec>& rows, const std::map<int, SparseVec>* tags,
               std::map<int, Scalar>& w, std::map<int, Scalar>* tag)
{
    auto it = w.end();
    while (it != w.begin()) {
        --it;
        auto pr = rows.find(it->first);
        if (pr == rows.end()) continue;
        int key = it->first;
        Scalar c = it->second;
        for (const auto& [j, a] : pr->second) {
            auto& slot = w[j];
            slot = F.sub(slot, F.mul(c, a));
        }
        if (tag) {
            for (const auto& [j, a] : tags->at(key)) {
                auto& slot = (*tag)[j];
                slot = F.sub(slot, F.mul(c, a));
            }
        }
        // Drop the zeros created below (and at) the pivot.
        for (auto z = w.begin(); z != w.end();) {
            if (z->first > key) break;
            if (F.is_zero(z->second)) z = w.erase(z);
            else ++z;
        }
        it = w.lower_bound(key);
    }
}

} // namespace

bool Echelon::insert(const SparseVec& v, SparseVec* relation)
{
    return insert_tagged(v, sparse_unit(inserted_), relation);
}

bool Echelon::insert_tagged(const SparseVec& v, const SparseVec& tag, SparseVec* relation)
{
    ++inserted_;
    std::map<int, Scalar> w(v.begin(), v.end());
    std::map<int, Scalar> t;
    if (tagged_) t.insert(tag.begin(), tag.end());
    eliminate(F_, rows_, tagged_ ? &tags_ : nullptr, w, tagged_ ? &t : nullptr);
    SparseVec rv = sparse_from_map(F_, w);
    if (rv.empty()) {
        if (relation) *relation = tagged_ ? sparse_from_map(F_, t) : SparseVec{};
        return false;
    }
    Scalar inv = F_.inv(rv.back().second);
    int pivot = rv.back().first;
    rows_[pivot] = sparse_scale(F_, inv, rv);
    if (tagged_) tags_[pivot] = sparse_scale(F_, inv, sparse_from_map(F_, t));
    return true;
}

SparseVec Echelon::reduce(const SparseVec& x, SparseVec* coeffs) const
{
    std::map<int, Scalar> w(x.begin(), x.end());
    std::map<int, Scalar> t;
    bool track = tagged_ && coeffs;
    eliminate(F_, rows_, track ? &tags_ : nullptr, w, track ? &t : nullptr);
    if (coeffs) {
        // x - sum c_k row_k = residual, row_k = sum tag_k  =>  coeffs = -t.
        SparseVec neg = sparse_from_map(F_, t);
        *coeffs = sparse_scale(F_, Scalar(-1), neg);
    }
    return sparse_from_map(F_, w);
}

std::vector<int> Echelon::pivots() const
{
    std::vector<int> out;
    for (const auto& kv : rows_) out.push_back(kv.first);
    return out;
}

std::vector<SparseVec> kernel_basis(const Field& F, const std::vector<SparseVec>& images)
{
    Echelon e(F, true);
    std::vector<SparseVec> out;
    for (const auto& v : images) {
        SparseVec rel;
        if (!e.insert(v, &rel)) out.push_back(rel);
    }
    return out;
}

int rank_of(const Field& F, const std::vector<SparseVec>& vectors)
{
    if (!F.is_rational() && modp::dense_preferred(F.characteristic(), vectors))
        return modp::rank_sparse(F, vectors);
    Echelon e(F);
    for (const auto& v : vectors) e.insert(v);
    return e.rank();
}

int rank_of_union(const Field& F, const std::vector<SparseVec>& a, const std::vector<SparseVec>& b)
{
    std::vector<SparseVec> all(a);
    all.insert(all.end(), b.begin(), b.end());
    return rank_of(F, all);
}

SparseVec apply_columns(const Field& F, const std::vector<SparseVec>& columns, const SparseVec& x)
{
    std::map<int, Scalar> acc;
    for (const auto& [i, c] : x)
        for (const auto& [j, a] : columns.at(i)) {
            auto& slot = acc[j];
            slot = F.add(slot, F.mul(c, a));
        }
    return sparse_from_map(F, acc);
}

} // namespace gdg
