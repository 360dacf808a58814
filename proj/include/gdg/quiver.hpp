// Graded quivers, paths, algebra elements and presentations.
#pragma once

#include "gdg/field.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdg {

struct Arrow {
    std::string name;
    int src = 0;
    int tgt = 0;
    int degree = 0;
};

// Arrows in written order: w = {b, a} is the path "b a", a first.
struct Path {
    int src = 0;
    int tgt = 0;
    std::vector<int> w;

    static Path trivial(int v) { return Path{v, v, {}}; }
    int length() const { return static_cast<int>(w.size()); }
    bool is_trivial() const { return w.empty(); }
};

// Length first, then lexicographic on written arrow indices, then endpoints.
bool operator<(const Path& a, const Path& b);
bool operator==(const Path& a, const Path& b);
inline bool operator!=(const Path& a, const Path& b) { return !(a == b); }

// a * b (b first). Requires a.src == b.tgt.
Path concat(const Path& a, const Path& b);
bool contains_subpath(const Path& hay, const Path& needle);

using Element = std::map<Path, Scalar>;

Element element_of(const Path& p, const Scalar& c = Scalar(1));
void element_add_to(const Field& F, Element& acc, const Element& x, const Scalar& c = Scalar(1));
Element element_add(const Field& F, const Element& a, const Element& b);
Element element_scale(const Field& F, const Scalar& c, const Element& a);
// Product in the path algebra; non-composable pairs vanish.
Element element_mul(const Field& F, const Element& a, const Element& b);
Element element_normalize(const Field& F, const Element& a);
int element_max_length(const Element& a);

struct LoopRoles {
    int loop = -1;
    int vertex = -1;
    int alpha_plus = -1;
    int alpha_minus = -1;
    int beta_plus = -1;
    int beta_minus = -1;
};

struct Decomposition {
    std::vector<int> gentle_arrows;
    std::vector<int> loops;
    std::vector<int> gentle_relations;
    std::vector<int> pinched_relations;
    std::vector<LoopRoles> roles;
};

struct PresentationError : std::runtime_error {
    PresentationError(const std::string& msg, int line = 0, int column = 0);
    int line;
    int column;
};

class Presentation {
public:
    std::vector<std::string> vertices;
    std::vector<Arrow> arrows;
    std::vector<Element> relations;
    std::optional<Decomposition> decomposition;
    std::vector<std::string> provenance;

    int vertex_index(const std::string& name) const;
    int arrow_index(const std::string& name) const;
    const std::string& vertex_name(int v) const { return vertices.at(v); }
    std::vector<int> out_arrows(int v) const;
    std::vector<int> in_arrows(int v) const;

    Path arrow_path(int a) const;
    Path path_of(const std::vector<std::string>& written) const;
    int degree(const Path& p) const;
    bool is_loop(int a) const { return arrows[a].src == arrows[a].tgt; }

    std::string format_path(const Path& p) const;
    std::string format_element(const Element& e) const;
    // Homogeneity: all terms share endpoints; returns false otherwise.
    bool endpoints(const Element& e, int& src, int& tgt) const;
};

struct Term {
    Scalar coeff{1};
    std::vector<std::string> arrows;  // written order
    std::string trivial_vertex;       // set for e(v)
};

// Collects names, then sorts vertices and arrows bytewise so indices are
// lexicographic ranks, and sorts relations canonically.
class PresentationBuilder {
public:
    void add_vertex(const std::string& name);
    void add_arrow(const std::string& name, const std::string& src, const std::string& tgt, int degree);
    void add_relation(const std::vector<Term>& terms);
    void add_relation(const Element& e, const Presentation& ctx);
    void declare_pinched(const std::string& loop) { pinched_.push_back(loop); }
    void add_provenance(const std::string& line) { provenance_.push_back(line); }
    bool has_vertex(const std::string& name) const;
    bool has_arrow(const std::string& name) const;
    const std::vector<std::string>& pinched() const { return pinched_; }

    Presentation build() const;

private:
    struct RawArrow {
        std::string name, src, tgt;
        int degree;
    };
    std::vector<std::string> vertices_;
    std::vector<RawArrow> arrows_;
    std::vector<std::vector<Term>> relations_;
    std::vector<std::string> pinched_;
    std::vector<std::string> provenance_;
};

Presentation parse_presentation(const std::string& text);
// A sum of terms in the relation syntax, against p's names.
Element parse_element(const Presentation& p, const std::string& text, int lineno = 0);
Presentation load_presentation(const std::string& path);
std::string serialize(const Presentation& p, bool with_provenance = true);

// Rebuilds p with the given decomposition loops declared (re-sorting relations).
Presentation with_pinched(const Presentation& p, const std::vector<std::string>& loops);

} // namespace gdg
