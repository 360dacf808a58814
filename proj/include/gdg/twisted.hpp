// One-sided twisted complexes over a presentation, hom complexes, cohomology.
#pragma once

#include "gdg/path_basis.hpp"
#include "gdg/transforms.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gdg {

struct Summand {
    int vertex = 0;
    int shift = 0;
};

// d[k][l] is a combination of paths from summand l's vertex to summand k's.
struct TwistedComplex {
    std::vector<Summand> summands;
    std::vector<std::vector<Element>> d;

    static TwistedComplex projective(int v, int shift = 0);
    int size() const { return static_cast<int>(summands.size()); }
};

TwistedComplex shift(const TwistedComplex& X, int k);
TwistedComplex band_object(const Presentation& p, const Kronecker& k, const Scalar& mu);

struct TwistedReport {
    bool ok = true;
    std::vector<std::string> violations;
};
TwistedReport validate_twisted(const TruncatedAlgebra& A, const TwistedComplex& X);

std::string serialize_twisted(const Presentation& p, const TwistedComplex& X);
// Reads the [summands] / [differential] blocks of a file; other sections are skipped.
TwistedComplex parse_twisted(const Presentation& p, const std::string& text);

struct HomBasisElem {
    int row = 0;  // summand of the target
    int col = 0;  // summand of the source
    Path path;
    int degree = 0;
};

// Graded Hom(X, Y) with df = d_Y f - (-1)^{|f|} f d_X.
class HomComplex {
public:
    HomComplex(std::shared_ptr<const TruncatedAlgebra> A, TwistedComplex X, TwistedComplex Y);

    const TruncatedAlgebra& algebra() const { return *A_; }
    const TwistedComplex& source() const { return X_; }
    const TwistedComplex& target() const { return Y_; }
    const std::vector<HomBasisElem>& basis() const { return basis_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    // Basis indices of degree n (ascending).
    const std::vector<int>& degree_part(int n) const;
    std::vector<int> degrees() const;

    SparseVec differential(int idx) const;
    SparseVec differential(const SparseVec& v) const;

    using Matrix = std::vector<std::vector<Element>>;
    Matrix to_matrix(const SparseVec& v) const;
    SparseVec from_matrix(const Matrix& m) const;  // throws on truncation overflow
    int index(int row, int col, const Path& p) const;  // -1 when not a basis element
    std::string format(const SparseVec& v) const;

private:
    std::shared_ptr<const TruncatedAlgebra> A_;
    TwistedComplex X_, Y_;
    std::vector<HomBasisElem> basis_;
    std::vector<std::vector<int>> offset_;
    std::map<int, std::vector<int>> by_degree_;
    mutable std::map<int, SparseVec> dcache_;
};

// g in Hom(U, V), f in Hom(T, U) -> g f in Hom(T, V).
SparseVec compose(const HomComplex& G, const SparseVec& g, const HomComplex& F, const SparseVec& f,
                  const HomComplex& H);

struct CohomologyTable {
    int lo = 0;
    int hi = 0;
    std::map<int, int> dims;
    std::map<int, std::vector<SparseVec>> reps;
    int total() const;
};

// Degree-n differential as columns (images of degree_part(n)).
std::vector<SparseVec> differential_columns(const HomComplex& H, int n);
CohomologyTable cohomology(const HomComplex& H, int lo, int hi);

// Cone(f) = (Y + X[1], [[dY, f], [0, -dX]]); f closed of degree 0.
TwistedComplex cone(const HomComplex& H, const SparseVec& f);

} // namespace gdg
