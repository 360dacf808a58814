#include "gdg/twisted.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

namespace gdg {

TwistedComplex TwistedComplex::projective(int v, int shift)
{
    TwistedComplex X;
    X.summands.push_back({v, shift});
    X.d.assign(1, std::vector<Element>(1));
    return X;
}

TwistedComplex shift(const TwistedComplex& X, int k)
{
    TwistedComplex Y = X;
    for (auto& s : Y.summands) s.shift += k;
    return Y;
}

TwistedComplex band_object(const Presentation& p, const Kronecker& k, const Scalar& mu)
{
    if (sgn(mu) == 0) throw TransformError("mu must be nonzero");
    const Arrow& A = p.arrows[k.alpha];
    const Arrow& B = p.arrows[k.beta];
    if (A.degree != B.degree)
        throw TransformError("cannot form a graded band: |" + A.name + "| = " + std::to_string(A.degree) + " but |" +
                             B.name + "| = " + std::to_string(B.degree));
    TwistedComplex X;
    X.summands = {{k.tgt, A.degree}, {k.src, 1}};
    X.d.assign(2, std::vector<Element>(2));
    Field Q;
    X.d[0][1] = element_add(Q, element_of(p.arrow_path(k.alpha)), element_of(p.arrow_path(k.beta), mu));
    return X;
}

TwistedReport validate_twisted(const TruncatedAlgebra& A, const TwistedComplex& X)
{
    TwistedReport rep;
    const Presentation& p = A.presentation();
    auto bad = [&](const std::string& m) {
        rep.ok = false;
        rep.violations.push_back(m);
    };
    int n = X.size();
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const Element& e = X.d[k][l];
            if (e.empty()) continue;
            std::string cell = "(" + std::to_string(k + 1) + "," + std::to_string(l + 1) + ")";
            if (k >= l) bad("triangularity: entry " + cell + " is nonzero");
            for (const auto& [path, c] : e) {
                if (path.src != X.summands[l].vertex || path.tgt != X.summands[k].vertex)
                    bad("entry " + cell + ": term " + p.format_path(path) + " has wrong endpoints");
                int deg = p.degree(path) + X.summands[l].shift - X.summands[k].shift;
                if (deg != 1)
                    bad("homogeneity: entry " + cell + " term " + p.format_path(path) + " has degree " +
                        std::to_string(deg));
            }
        }
    if (!rep.ok) return rep;
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            Element acc;
            for (int m = 0; m < n; ++m) element_add_to(A.field(), acc, A.mul(X.d[k][m], X.d[m][l]));
            acc = A.reduce(acc);
            if (!acc.empty())
                bad("Maurer-Cartan: (d^2)(" + std::to_string(k + 1) + "," + std::to_string(l + 1) +
                    ") = " + p.format_element(acc));
        }
    return rep;
}

std::string serialize_twisted(const Presentation& p, const TwistedComplex& X)
{
    std::ostringstream out;
    out << "[summands]\n";
    for (const auto& s : X.summands) out << p.vertices[s.vertex] << " " << s.shift << "\n";
    out << "[differential]\n";
    for (int k = 0; k < X.size(); ++k)
        for (int l = 0; l < X.size(); ++l)
            if (!X.d[k][l].empty()) out << k + 1 << " " << l + 1 << " : " << p.format_element(X.d[k][l]) << "\n";
    return out.str();
}

TwistedComplex parse_twisted(const Presentation& p, const std::string& text)
{
    TwistedComplex X;
    std::vector<std::tuple<int, int, Element, int>> entries;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    auto trim = [](const std::string& s) {
        auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line.substr(0, line.find('#')));
        if (t.empty()) continue;
        if (t.size() > 2 && t.front() == '[' && t.back() == ']' &&
            t.find_first_not_of("abcdefghijklmnopqrstuvwxyz", 1) == t.size() - 1) {
            section = t;
            continue;
        }
        if (section == "[summands]") {
            std::istringstream ls(t);
            std::string v;
            int shift = 0;
            if (!(ls >> v >> shift)) throw PresentationError("expected 'vertex shift'", lineno, 1);
            int vi = p.vertex_index(v);
            if (vi < 0) throw PresentationError("unknown vertex '" + v + "'", lineno, 1);
            X.summands.push_back({vi, shift});
        } else if (section == "[differential]") {
            auto colon = t.find(':');
            if (colon == std::string::npos) throw PresentationError("expected 'k l : element'", lineno, 1);
            std::istringstream ls(t.substr(0, colon));
            int k = 0, l = 0;
            if (!(ls >> k >> l)) throw PresentationError("expected 'k l : element'", lineno, 1);
            entries.emplace_back(k, l, parse_element(p, t.substr(colon + 1), lineno), lineno);
        }
    }
    if (X.summands.empty()) throw PresentationError("no [summands] block");
    int n = X.size();
    X.d.assign(n, std::vector<Element>(n));
    Field Q;
    for (auto& [k, l, e, ln] : entries) {
        if (k < 1 || l < 1 || k > n || l > n) throw PresentationError("summand index out of range", ln, 1);
        element_add_to(Q, X.d[k - 1][l - 1], e);
    }
    return X;
}

HomComplex::HomComplex(std::shared_ptr<const TruncatedAlgebra> A, TwistedComplex X, TwistedComplex Y)
    : A_(std::move(A)), X_(std::move(X)), Y_(std::move(Y))
{
    const Presentation& p = A_->presentation();
    offset_.assign(Y_.size(), std::vector<int>(X_.size(), 0));
    for (int k = 0; k < Y_.size(); ++k)
        for (int l = 0; l < X_.size(); ++l) {
            offset_[k][l] = static_cast<int>(basis_.size());
            for (const Path& b : A_->basis(X_.summands[l].vertex, Y_.summands[k].vertex)) {
                int deg = p.degree(b) + X_.summands[l].shift - Y_.summands[k].shift;
                by_degree_[deg].push_back(static_cast<int>(basis_.size()));
                basis_.push_back({k, l, b, deg});
            }
        }
}

const std::vector<int>& HomComplex::degree_part(int n) const
{
    static const std::vector<int> empty;
    auto it = by_degree_.find(n);
    return it == by_degree_.end() ? empty : it->second;
}

std::vector<int> HomComplex::degrees() const
{
    std::vector<int> out;
    for (const auto& kv : by_degree_) out.push_back(kv.first);
    return out;
}

int HomComplex::index(int row, int col, const Path& path) const
{
    int pos = A_->basis_index(X_.summands[col].vertex, Y_.summands[row].vertex, path);
    return pos < 0 ? -1 : offset_[row][col] + pos;
}

HomComplex::Matrix HomComplex::to_matrix(const SparseVec& v) const
{
    Matrix m(Y_.size(), std::vector<Element>(X_.size()));
    for (const auto& [i, c] : v) {
        const auto& b = basis_.at(i);
        m[b.row][b.col].emplace(b.path, c);
    }
    return m;
}

SparseVec HomComplex::from_matrix(const Matrix& m) const
{
    SparseVec out;
    for (int k = 0; k < Y_.size(); ++k)
        for (int l = 0; l < X_.size(); ++l) {
            if (m[k][l].empty()) continue;
            for (const auto& [pos, c] : A_->coords(X_.summands[l].vertex, Y_.summands[k].vertex, m[k][l]))
                out.emplace_back(offset_[k][l] + pos, c);
        }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

SparseVec HomComplex::differential(int idx) const
{
    auto it = dcache_.find(idx);
    if (it != dcache_.end()) return it->second;
    const Field& F = A_->field();
    const HomBasisElem& f = basis_.at(idx);
    Element fb = element_of(f.path);
    Matrix m(Y_.size(), std::vector<Element>(X_.size()));
    for (int k2 = 0; k2 < Y_.size(); ++k2)
        if (!Y_.d[k2][f.row].empty()) element_add_to(F, m[k2][f.col], A_->mul(Y_.d[k2][f.row], fb));
    Scalar sign = (f.degree % 2 == 0) ? Scalar(-1) : Scalar(1);
    for (int l2 = 0; l2 < X_.size(); ++l2)
        if (!X_.d[f.col][l2].empty()) element_add_to(F, m[f.row][l2], A_->mul(fb, X_.d[f.col][l2]), sign);
    SparseVec out = from_matrix(m);
    dcache_.emplace(idx, out);
    return out;
}

SparseVec HomComplex::differential(const SparseVec& v) const
{
    const Field& F = A_->field();
    SparseVec acc;
    for (const auto& [i, c] : v) acc = sparse_axpy(F, c, differential(i), acc);
    return acc;
}

std::string HomComplex::format(const SparseVec& v) const
{
    if (v.empty()) return "0";
    const Presentation& p = A_->presentation();
    std::string s;
    for (const auto& [i, c] : v) {
        const auto& b = basis_[i];
        if (!s.empty()) s += " + ";
        if (c != 1) s += format_scalar(c) + "*";
        s += "[" + p.format_path(b.path) + "]_(" + std::to_string(b.row + 1) + "," + std::to_string(b.col + 1) + ")";
    }
    return s;
}

SparseVec compose(const HomComplex& G, const SparseVec& g, const HomComplex& Fh, const SparseVec& f,
                  const HomComplex& H)
{
    const TruncatedAlgebra& A = H.algebra();
    HomComplex::Matrix m(H.target().size(), std::vector<Element>(H.source().size()));
    for (const auto& [gi, gc] : g) {
        const auto& gb = G.basis()[gi];
        for (const auto& [fi, fc] : f) {
            const auto& fb = Fh.basis()[fi];
            if (fb.row != gb.col) continue;
            Element prod = A.mul(element_of(gb.path), element_of(fb.path));
            element_add_to(A.field(), m[gb.row][fb.col], prod, A.field().mul(gc, fc));
        }
    }
    return H.from_matrix(m);
}

int CohomologyTable::total() const
{
    int t = 0;
    for (const auto& kv : dims) t += kv.second;
    return t;
}

std::vector<SparseVec> differential_columns(const HomComplex& H, int n)
{
    std::vector<SparseVec> cols;
    for (int i : H.degree_part(n)) cols.push_back(H.differential(i));
    return cols;
}

CohomologyTable cohomology(const HomComplex& H, int lo, int hi)
{
    const Field& F = H.algebra().field();
    CohomologyTable t;
    t.lo = lo;
    t.hi = hi;
    for (int n = lo; n <= hi; ++n) {
        const auto& part = H.degree_part(n);
        std::vector<SparseVec> cycles;
        for (const auto& k : kernel_basis(F, differential_columns(H, n))) {
            SparseVec z;
            for (const auto& [pos, c] : k) z.emplace_back(part[pos], c);
            cycles.push_back(z);
        }
        Echelon E(F);
        for (const auto& b : differential_columns(H, n - 1)) E.insert(b);
        std::vector<SparseVec> reps;
        for (const auto& z : cycles) {
            SparseVec r = E.reduce(z);
            if (r.empty()) continue;
            reps.push_back(r);
            E.insert(r);
        }
        t.dims[n] = static_cast<int>(reps.size());
        t.reps[n] = reps;
    }
    return t;
}

TwistedComplex cone(const HomComplex& H, const SparseVec& f)
{
    for (const auto& [i, c] : f)
        if (H.basis()[i].degree != 0) throw std::invalid_argument("cone: morphism is not of degree 0");
    if (!H.differential(f).empty()) throw std::invalid_argument("cone: morphism is not closed");
    const TwistedComplex& X = H.source();
    const TwistedComplex& Y = H.target();
    const Field& F = H.algebra().field();
    int ny = Y.size(), nx = X.size();
    TwistedComplex C;
    for (const auto& s : Y.summands) C.summands.push_back(s);
    for (const auto& s : X.summands) C.summands.push_back({s.vertex, s.shift + 1});
    C.d.assign(ny + nx, std::vector<Element>(ny + nx));
    for (int k = 0; k < ny; ++k)
        for (int l = 0; l < ny; ++l) C.d[k][l] = Y.d[k][l];
    for (int k = 0; k < nx; ++k)
        for (int l = 0; l < nx; ++l) C.d[ny + k][ny + l] = element_scale(F, Scalar(-1), X.d[k][l]);
    auto m = H.to_matrix(f);
    for (int k = 0; k < ny; ++k)
        for (int l = 0; l < nx; ++l) C.d[k][ny + l] = m[k][l];
    return C;
}

} // namespace gdg
