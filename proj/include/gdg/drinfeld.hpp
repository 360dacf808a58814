// Filtered complexes, spectral-sequence pages and truncated Drinfeld quotients.
#pragma once

#include "gdg/twisted.hpp"

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace gdg {

// Finite cochain complex with an increasing filtration: basis vector b lies in
// F^p for every p >= filtration[b]. d never raises filtration.
struct FilteredComplex {
    Field field;
    int p_max = 0;
    std::vector<int> filtration;
    std::vector<int> degree;
    std::vector<SparseVec> d;

    int size() const { return static_cast<int>(d.size()); }
    std::vector<int> part(int p, int n) const;  // filtration <= p, degree n
    std::vector<int> cell(int p, int n) const;  // filtration == p, degree n
    std::pair<int, int> degree_range() const;
};

struct FilteredCheck {
    bool ok = true;
    std::vector<std::string> violations;
};
// d^2 = 0 and d(F^p) in F^p, entry by entry.
FilteredCheck check_filtered(const FilteredComplex& fc);

using Bidegree = std::pair<int, int>;  // (p, q), total degree p + q

struct SSPage {
    int r = 0;
    std::map<Bidegree, int> dims;                     // nonzero cells only
    std::map<Bidegree, std::vector<SparseVec>> reps;  // cycles spanning E_r
    // d_r of each rep at (p, q), in rep coordinates of (p - r, q + r + 1).
    std::map<Bidegree, std::vector<SparseVec>> dr;
    int dim(int p, int q) const;
};

// Pages 0..r_max from the subspace tower Z_r^p = {x in F^p : dx in F^{p-r}}.
std::vector<SSPage> ss_pages(const FilteredComplex& fc, int r_max);
SSPage e_infinity_page(const FilteredComplex& fc);
// Smallest r whose page agrees with E_infinity in every cell.
int stabilization_index(const std::vector<SSPage>& pages, const SSPage& einf);
// H(E_r, d_r) computed from the page data alone.
std::map<Bidegree, int> page_homology(const Field& F, const SSPage& page);
// dim H^n(F^{p_max}) by direct linear algebra.
std::map<int, int> total_cohomology(const FilteredComplex& fc);
// dim of the image of H^n(F^p) in H^n(F^{p_max}).
int filtered_image_dim(const FilteredComplex& fc, int p, int n);
// Nonzero in E_infinity^{p, n - p}: x is a cycle in F^p not in F^{p-1} + boundaries.
bool spans_new_class(const FilteredComplex& fc, const SparseVec& x, int p);

// Column reduction of d in basis order (pivot = largest index). The basis must
// be sorted by filtration. Each basis vector is essential or paired; a pair
// with filtration gap g survives on pages r <= g.
class FilteredReduction {
public:
    explicit FilteredReduction(const FilteredComplex& fc);
    enum class Kind { Essential, Birth, Death };
    Kind kind(int b) const { return kind_[b]; }
    int partner(int b) const { return partner_[b]; }  // -1 when essential
    int gap(int b) const;
    // Page dimensions; r > p_max gives E_infinity.
    std::map<Bidegree, int> page_dims(int r) const;
    // Smallest r with page_dims(r) == E_infinity.
    int stabilization_index() const;
    std::map<int, int> cohomology() const;
    // Reduced cycle x of F^p is nonzero in E_infinity^p.
    bool spans_new_class(const SparseVec& x, int p) const;

private:
    const FilteredComplex& fc_;
    std::vector<SparseVec> R_;
    std::map<int, int> low_;  // pivot row -> column
    std::vector<Kind> kind_;
    std::vector<int> partner_;
};

struct QuotientWord {
    int p = 0;
    std::vector<int> factors;  // f_0 .. f_p; f_0 is applied first
    int degree = 0;
};

struct QuotientOptions {
    long word_cap = 2000000;
};

// Words f_p e f_{p-1} ... e f_0 in Hom(X, B), End(B), Hom(B, Y) for the
// quotient by B, with X = P_i, Y = P_j, truncated at p <= p_max.
class QuotientComplex {
public:
    QuotientComplex(std::shared_ptr<const TruncatedAlgebra> A, int i, int j, const TwistedComplex& B, int p_max,
                    QuotientOptions opt = {});

    const FilteredComplex& filtered() const { return fc_; }
    const QuotientWord& word(int idx) const { return words_.at(idx); }
    int index(int p, const std::vector<int>& factors) const;
    int p_max() const { return p_max_; }
    int source() const { return i_; }
    int target() const { return j_; }

    const HomComplex& hom_xy() const { return *xy_; }
    const HomComplex& hom_xb() const { return *xb_; }
    const HomComplex& end_b() const { return *bb_; }
    const HomComplex& hom_by() const { return *by_; }
    // Hom space holding factor t of a word with p epsilons.
    const HomComplex& factor_space(int p, int t) const;

    // Word-basis vector of the tensor f_p e ... e f_0 (factors given f_0 first).
    SparseVec tensor(const std::vector<SparseVec>& factors) const;
    std::string format_word(int idx) const;
    std::string format(const SparseVec& v) const;

private:
    SparseVec word_differential(const QuotientWord& w);
    const SparseVec& composed(const HomComplex& G, int g, const HomComplex& F, int f, const HomComplex& H);

    std::shared_ptr<const TruncatedAlgebra> A_;
    int i_, j_, p_max_;
    std::unique_ptr<HomComplex> xy_, xb_, bb_, by_;
    std::vector<int> offset_;
    std::vector<QuotientWord> words_;
    FilteredComplex fc_;
    std::map<std::tuple<const HomComplex*, int, const HomComplex*, int>, SparseVec> ccache_;
};

struct KunnethResult {
    int dim = 0;
    std::vector<std::string> words;  // "h3 e h1 e h0" style, factor classes by degree
};
// Dimension of the tensor of factor cohomologies with pg copies of K[1] in
// total degree pg + q.
KunnethResult e1_kunneth(const QuotientComplex& Q, int pg, int q);

struct QuotientDegree {
    int n = 0;
    int dim = 0;
    bool stable = false;
    std::vector<int> profile;  // dim E_infinity^{p, n - p}, p = 0..p_max
};
struct QuotientCohomology {
    int i = 0, j = 0, p_max = 0;
    std::vector<QuotientDegree> degrees;
};
QuotientCohomology quotient_cohomology(std::shared_ptr<const TruncatedAlgebra> A, int i, int j,
                                       const TwistedComplex& B, int lo, int hi, int p_max);
std::string format_quotient_line(const QuotientDegree& d);

struct EInfReport {
    bool ok = true;
    int margin = 0;
    int a = 0;
    std::vector<std::string> lines;
    std::vector<std::string> mismatches;
};
// Closed form for i, j in {src, tgt} of the Kronecker used to build B.
EInfReport e_infinity_check(std::shared_ptr<const TruncatedAlgebra> A, const Kronecker& k, const TwistedComplex& B,
                            int i, int j, int lo, int hi, int p_max);

struct FormalityReport {
    bool ok = true;
    int margin = 0;
    std::vector<std::string> lines;
    std::vector<std::string> failures;
};
// Compares the truncated quotient by the band with the localization, pair by
// pair and filtration level by delta count. L is the localization length bound.
FormalityReport formality_check(const Presentation& p, const Kronecker& k, const Scalar& mu, int lo, int hi,
                                int p_max, int L, const Field& F = Field());

} // namespace gdg
