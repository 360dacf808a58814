// Truncated normal forms in KQ/<I> and hom-space bases e_j A e_i.
#pragma once

#include "gdg/linalg.hpp"
#include "gdg/quiver.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdg {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A product or element left the enumerated length range.
struct TruncationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationOptions {
    int slack = 2;
    std::size_t path_cap = 1000000;
    Field field{};
};

struct PathBasis {
    int src = 0;
    int tgt = 0;
    int length_bound = 0;
    int slack = 0;
    std::vector<Path> paths;  // ascending
    bool slack_stable = true;
    bool length_stable = true;
};

// Normal forms for all paths of length <= L, computed per vertex pair on demand
// by row-reducing every m r m' whose terms have length <= L + slack.
class TruncatedAlgebra {
public:
    TruncatedAlgebra(const Presentation& p, int L, TruncationOptions opt = {});
    ~TruncatedAlgebra();
    TruncatedAlgebra(const TruncatedAlgebra&) = delete;
    TruncatedAlgebra& operator=(const TruncatedAlgebra&) = delete;

    const Presentation& presentation() const { return p_; }
    const Field& field() const { return opt_.field; }
    int length_bound() const { return L_; }
    int enumeration_bound() const { return L_ + opt_.slack; }
    const TruncationOptions& options() const { return opt_; }

    // Basis paths of length <= L from i to j (no stability flags).
    const std::vector<Path>& basis(int i, int j) const;
    Element reduce(const Element& x) const;
    Element mul(const Element& a, const Element& b) const;
    // Coordinates in basis(i, j); throws TruncationOverflow if the normal form
    // leaves the basis.
    SparseVec coords(int i, int j, const Element& x) const;
    Element from_coords(int i, int j, const SparseVec& c) const;
    int basis_index(int i, int j, const Path& p) const;  // -1 when absent

private:
    struct PairData;
    const PairData& pair(int i, int j) const;
    const std::vector<Path>& paths_from(int v) const;
    bool monomial_zero(const Path& path) const;

    Presentation p_;
    int L_;
    TruncationOptions opt_;
    std::vector<Path> monomials_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, std::unique_ptr<PairData>> pairs_;
    mutable std::map<int, std::vector<Path>> from_;
};

// Basis with stability flags (a second run at L + 1).
PathBasis enumerate_paths(const Presentation& p, int i, int j, int L, const TruncationOptions& opt = {});

struct FiniteReport {
    enum class Verdict { Finite, Infinite, Undecided };
    Verdict verdict = Verdict::Finite;
    std::optional<Path> witness;
    std::string message;
};

FiniteReport is_finite_dimensional(const Presentation& p, int budget = 8, const TruncationOptions& opt = {});

} // namespace gdg
