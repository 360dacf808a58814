// Kroneckers, localization, pinching, loop resolution, idempotent subalgebras, iso checks.
#pragma once

#include "gdg/path_basis.hpp"
#include "gdg/quiver.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gdg {

struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Kronecker {
    int alpha = -1;
    int beta = -1;
    int src = -1;  // vertex 1
    int tgt = -1;  // vertex 2
    bool acyclic = true;        // adopted reading: relation-free cyclic path
    bool plain_acyclic = true;  // plain quiver-cycle reading
    std::optional<Path> witness;
    bool reading_discrepancy() const { return acyclic != plain_acyclic; }
};

std::vector<Kronecker> find_graded_kroneckers(const Presentation& p);
// Validates the pair and annotates acyclicity.
Kronecker kronecker_by_names(const Presentation& p, const std::string& a, const std::string& b);
bool is_acyclic_kronecker(const Presentation& p, const Kronecker& k);

std::string fresh_arrow_name(const Presentation& p, const std::string& base);
std::string fresh_vertex_name(const Presentation& p, const std::string& base);

struct LocalizeResult {
    Presentation presentation;
    std::string delta;  // name used for the inverse arrow
    bool renamed = false;
};
LocalizeResult localize(const Presentation& p, const Kronecker& k, const Scalar& mu);

struct PinchResult {
    Presentation presentation;
    std::map<std::string, std::string> vertex_map;  // old -> new
    std::string loop;
    // Arrow names in the roles of alpha+, alpha-, beta+, beta- (empty if absent).
    std::string alpha_plus, alpha_minus, beta_plus, beta_minus;
};
PinchResult pinch(const Presentation& p, const Kronecker& k);

struct LoopPair {
    std::string vertex, loop;
    std::string vertex_alpha, vertex_beta;
    std::string loop_alpha, loop_beta;
};
struct ResolveResult {
    Presentation presentation;
    std::vector<LoopPair> pairing;
};
ResolveResult resolve_loops(const Presentation& p);
// Inverse of resolve_loops.
Presentation unresolve_loops(const Presentation& resolved, const std::vector<LoopPair>& pairing);

struct SubalgebraResult {
    Presentation presentation;
    bool stabilized = true;
    std::string unresolved;  // shortest through-path beyond the bound
    std::map<std::string, Path> generator_paths;
};
SubalgebraResult idempotent_subalgebra(const Presentation& p, const std::vector<std::string>& vbar, int L);

struct IsoCandidate {
    std::map<std::string, std::string> vertex_map;
    std::map<std::string, Element> arrow_images;  // elements of the target
    bool needs_char_not_2 = false;
};

struct IsoReport {
    bool ok = true;
    bool refused = false;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
};
IsoReport verify_iso(const Presentation& source, const Presentation& target, const IsoCandidate& cand, int L,
                     const TruncationOptions& opt = {});

IsoCandidate identity_candidate(const Presentation& p);

struct LemmaSetup {
    PinchResult pinched;
    LocalizeResult localized;
    SubalgebraResult subalgebra;
    IsoCandidate candidate;
};
// Pinching of p at k against e Lambda[w^-1] e with e omitting vertex 2.
LemmaSetup lemma_setup(const Presentation& p, const Kronecker& k, const Scalar& mu);

Presentation rename_arrows(const Presentation& p, const std::map<std::string, std::string>& names);

} // namespace gdg
