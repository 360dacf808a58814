#include "gdg/quiver.hpp"

#include "gdg/gentle.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace gdg {

bool operator<(const Path& a, const Path& b)
{
    if (a.w.size() != b.w.size()) return a.w.size() < b.w.size();
    if (a.w != b.w) return a.w < b.w;
    if (a.src != b.src) return a.src < b.src;
    return a.tgt < b.tgt;
}

bool operator==(const Path& a, const Path& b)
{
    return a.src == b.src && a.tgt == b.tgt && a.w == b.w;
}

Path concat(const Path& a, const Path& b)
{
    if (a.src != b.tgt) throw std::logic_error("concat: paths not composable");
    Path out{b.src, a.tgt, a.w};
    out.w.insert(out.w.end(), b.w.begin(), b.w.end());
    return out;
}

bool contains_subpath(const Path& hay, const Path& needle)
{
    if (needle.w.empty()) return false;
    return std::search(hay.w.begin(), hay.w.end(), needle.w.begin(), needle.w.end()) != hay.w.end();
}

Element element_of(const Path& p, const Scalar& c)
{
    Element e;
    if (sgn(c) != 0) e.emplace(p, c);
    return e;
}

void element_add_to(const Field& F, Element& acc, const Element& x, const Scalar& c)
{
    for (const auto& [p, a] : x) {
        auto it = acc.find(p);
        Scalar v = F.mul(c, a);
        if (it == acc.end()) {
            if (!F.is_zero(v)) acc.emplace(p, v);
        } else {
            it->second = F.add(it->second, v);
            if (F.is_zero(it->second)) acc.erase(it);
        }
    }
}

Element element_add(const Field& F, const Element& a, const Element& b)
{
    Element out = a;
    element_add_to(F, out, b);
    return out;
}

Element element_scale(const Field& F, const Scalar& c, const Element& a)
{
    Element out;
    element_add_to(F, out, a, c);
    return out;
}

Element element_mul(const Field& F, const Element& a, const Element& b)
{
    Element out;
    for (const auto& [p, x] : a)
        for (const auto& [q, y] : b) {
            if (p.src != q.tgt) continue;
            element_add_to(F, out, element_of(concat(p, q), F.mul(x, y)));
        }
    return out;
}

Element element_normalize(const Field& F, const Element& a)
{
    Element out;
    for (const auto& [p, x] : a) {
        Scalar v = F.normalize(x);
        if (!F.is_zero(v)) out.emplace(p, v);
    }
    return out;
}

int element_max_length(const Element& a)
{
    int m = -1;
    for (const auto& kv : a) m = std::max(m, kv.first.length());
    return m;
}

PresentationError::PresentationError(const std::string& msg, int line_, int column_)
    : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ", column " + std::to_string(column_) +
                                         ": " + msg
                                   : msg),
      line(line_), column(column_)
{
}

int Presentation::vertex_index(const std::string& name) const
{
    auto it = std::lower_bound(vertices.begin(), vertices.end(), name);
    if (it == vertices.end() || *it != name) return -1;
    return static_cast<int>(it - vertices.begin());
}

int Presentation::arrow_index(const std::string& name) const
{
    auto it = std::lower_bound(arrows.begin(), arrows.end(), name,
                               [](const Arrow& a, const std::string& n) { return a.name < n; });
    if (it == arrows.end() || it->name != name) return -1;
    return static_cast<int>(it - arrows.begin());
}

std::vector<int> Presentation::out_arrows(int v) const
{
    std::vector<int> out;
    for (int a = 0; a < static_cast<int>(arrows.size()); ++a)
        if (arrows[a].src == v) out.push_back(a);
    return out;
}

std::vector<int> Presentation::in_arrows(int v) const
{
    std::vector<int> out;
    for (int a = 0; a < static_cast<int>(arrows.size()); ++a)
        if (arrows[a].tgt == v) out.push_back(a);
    return out;
}

Path Presentation::arrow_path(int a) const
{
    return Path{arrows[a].src, arrows[a].tgt, {a}};
}

Path Presentation::path_of(const std::vector<std::string>& written) const
{
    if (written.empty()) throw std::invalid_argument("path_of: empty path");
    Path p;
    for (std::size_t k = 0; k < written.size(); ++k) {
        int a = arrow_index(written[k]);
        if (a < 0) throw std::invalid_argument("unknown arrow '" + written[k] + "'");
        p.w.push_back(a);
    }
    p.tgt = arrows[p.w.front()].tgt;
    p.src = arrows[p.w.back()].src;
    for (std::size_t k = 0; k + 1 < p.w.size(); ++k)
        if (arrows[p.w[k]].src != arrows[p.w[k + 1]].tgt)
            throw std::invalid_argument("arrows '" + arrows[p.w[k]].name + "' and '" + arrows[p.w[k + 1]].name +
                                        "' are not composable");
    return p;
}

int Presentation::degree(const Path& p) const
{
    int d = 0;
    for (int a : p.w) d += arrows[a].degree;
    return d;
}

std::string Presentation::format_path(const Path& p) const
{
    if (p.w.empty()) return "e(" + vertices[p.src] + ")";
    std::string s;
    for (std::size_t k = 0; k < p.w.size(); ++k) {
        if (k) s += ' ';
        s += arrows[p.w[k]].name;
    }
    return s;
}

std::string Presentation::format_element(const Element& e) const
{
    if (e.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto it = e.rbegin(); it != e.rend(); ++it) {
        Scalar c = it->second;
        bool neg = sgn(c) < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) s += "- ";
        } else {
            s += neg ? " - " : " + ";
        }
        if (c != 1) s += format_scalar(c) + " * ";
        s += format_path(it->first);
        first = false;
    }
    return s;
}

bool Presentation::endpoints(const Element& e, int& src, int& tgt) const
{
    bool first = true;
    for (const auto& kv : e) {
        if (first) {
            src = kv.first.src;
            tgt = kv.first.tgt;
            first = false;
        } else if (kv.first.src != src || kv.first.tgt != tgt) {
            return false;
        }
    }
    return !first;
}

void PresentationBuilder::add_vertex(const std::string& name)
{
    vertices_.push_back(name);
}

void PresentationBuilder::add_arrow(const std::string& name, const std::string& src, const std::string& tgt,
                                    int degree)
{
    arrows_.push_back({name, src, tgt, degree});
}

void PresentationBuilder::add_relation(const std::vector<Term>& terms)
{
    relations_.push_back(terms);
}

void PresentationBuilder::add_relation(const Element& e, const Presentation& ctx)
{
    std::vector<Term> terms;
    for (const auto& [p, c] : e) {
        Term t;
        t.coeff = c;
        if (p.w.empty()) t.trivial_vertex = ctx.vertices[p.src];
        for (int a : p.w) t.arrows.push_back(ctx.arrows[a].name);
        terms.push_back(t);
    }
    relations_.push_back(terms);
}

bool PresentationBuilder::has_vertex(const std::string& name) const
{
    return std::find(vertices_.begin(), vertices_.end(), name) != vertices_.end();
}

bool PresentationBuilder::has_arrow(const std::string& name) const
{
    return std::any_of(arrows_.begin(), arrows_.end(), [&](const RawArrow& a) { return a.name == name; });
}

Presentation PresentationBuilder::build() const
{
    Presentation p;
    p.provenance = provenance_;
    p.vertices = vertices_;
    std::sort(p.vertices.begin(), p.vertices.end());
    for (std::size_t k = 1; k < p.vertices.size(); ++k)
        if (p.vertices[k] == p.vertices[k - 1]) throw PresentationError("duplicate vertex '" + p.vertices[k] + "'");
    std::vector<RawArrow> raw = arrows_;
    std::sort(raw.begin(), raw.end(), [](const RawArrow& a, const RawArrow& b) { return a.name < b.name; });
    for (std::size_t k = 1; k < raw.size(); ++k)
        if (raw[k].name == raw[k - 1].name) throw PresentationError("duplicate arrow '" + raw[k].name + "'");
    for (const auto& r : raw) {
        int s = p.vertex_index(r.src), t = p.vertex_index(r.tgt);
        if (s < 0) throw PresentationError("arrow '" + r.name + "' has undeclared source '" + r.src + "'");
        if (t < 0) throw PresentationError("arrow '" + r.name + "' has undeclared target '" + r.tgt + "'");
        p.arrows.push_back({r.name, s, t, r.degree});
    }
    Field Q;
    for (const auto& terms : relations_) {
        Element e;
        for (const auto& t : terms) {
            Path path;
            if (!t.trivial_vertex.empty()) {
                int v = p.vertex_index(t.trivial_vertex);
                if (v < 0) throw PresentationError("relation uses undeclared vertex '" + t.trivial_vertex + "'");
                path = Path::trivial(v);
            } else {
                for (const auto& n : t.arrows)
                    if (p.arrow_index(n) < 0) throw PresentationError("relation uses undeclared arrow '" + n + "'");
                try {
                    path = p.path_of(t.arrows);
                } catch (const std::invalid_argument& ex) {
                    throw PresentationError(std::string("relation term: ") + ex.what());
                }
            }
            element_add_to(Q, e, element_of(path, t.coeff));
        }
        if (e.empty()) continue;
        int s, tg;
        if (!p.endpoints(e, s, tg))
            throw PresentationError("relation '" + p.format_element(e) + "' mixes paths with different endpoints");
        p.relations.push_back(e);
    }
    std::sort(p.relations.begin(), p.relations.end(),
              [&](const Element& a, const Element& b) { return p.format_element(a) < p.format_element(b); });
    p.relations.erase(std::unique(p.relations.begin(), p.relations.end()), p.relations.end());
    return p;
}

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Token {
    std::string text;
    int column;
};

std::vector<Token> tokenize(const std::string& line)
{
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

// "[word]" with lowercase letters only; generator names like "[b.a]" never match.
bool is_section_header(const std::string& t)
{
    if (t.size() < 3 || t.front() != '[' || t.back() != ']') return false;
    for (std::size_t i = 1; i + 1 < t.size(); ++i)
        if (t[i] < 'a' || t[i] > 'z') return false;
    return true;
}

bool valid_name(const std::string& s)
{
    if (s.empty() || s == "+" || s == "-" || s == "*" || is_section_header(s)) return false;
    for (char c : s)
        if (c == ' ' || c == '\t' || c == '#' || c == ':' || c == '@') return false;
    return s.find("->") == std::string::npos;
}

std::vector<Term> parse_terms(const std::string& line, int lineno, const std::function<bool(const std::string&)>& has_vertex,
                              const std::function<bool(const std::string&)>& has_arrow)
{
    auto toks = tokenize(line);
    if (toks.empty()) throw PresentationError("expected a term", lineno, 1);
    std::vector<Term> terms;
    std::size_t k = 0;
    Scalar sign(1);
    if (toks[k].text == "+" || toks[k].text == "-") {
        if (toks[k].text == "-") sign = -1;
        ++k;
    }
    while (true) {
        if (k >= toks.size()) throw PresentationError("expected a term", lineno, static_cast<int>(line.size()) + 1);
        Term term;
        term.coeff = sign;
        if (k + 1 < toks.size() && toks[k + 1].text == "*") {
            try {
                term.coeff = sign * parse_rational(toks[k].text);
            } catch (const std::exception&) {
                throw PresentationError("invalid coefficient '" + toks[k].text + "'", lineno, toks[k].column);
            }
            k += 2;
        }
        int term_col = k < toks.size() ? toks[k].column : static_cast<int>(line.size()) + 1;
        while (k < toks.size() && toks[k].text != "+" && toks[k].text != "-") {
            const std::string& a = toks[k].text;
            if (a.size() > 3 && a.rfind("e(", 0) == 0 && a.back() == ')') {
                std::string v = a.substr(2, a.size() - 3);
                if (!has_vertex(v))
                    throw PresentationError("undeclared vertex '" + v + "' in trivial path", lineno,
                                            toks[k].column);
                if (!term.arrows.empty() || !term.trivial_vertex.empty())
                    throw PresentationError("trivial path must stand alone in its term", lineno,
                                            toks[k].column);
                term.trivial_vertex = v;
            } else {
                if (a == "*") throw PresentationError("unexpected '*'", lineno, toks[k].column);
                if (!has_arrow(a))
                    throw PresentationError("relation references undeclared arrow '" + a + "'", lineno,
                                            toks[k].column);
                if (!term.trivial_vertex.empty())
                    throw PresentationError("trivial path must stand alone in its term", lineno,
                                            toks[k].column);
                term.arrows.push_back(a);
            }
            ++k;
        }
        if (term.arrows.empty() && term.trivial_vertex.empty())
            throw PresentationError("empty term", lineno, term_col);
        terms.push_back(term);
        if (k >= toks.size()) break;
        sign = toks[k].text == "-" ? Scalar(-1) : Scalar(1);
        ++k;
    }
    return terms;
}

} // namespace

Presentation parse_presentation(const std::string& text)
{
    PresentationBuilder b;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    std::string section;
    std::set<std::string> seen_sections;
    std::set<std::string> vnames, anames;
    std::map<std::string, std::pair<std::string, std::string>> aends;
    bool declared_pinched = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            std::string comment = trim(line.substr(hash + 1));
            if (trim(line.substr(0, hash)).empty() && comment.rfind("provenance:", 0) == 0)
                b.add_provenance(trim(comment.substr(11)));
            line = line.substr(0, hash);
        }
        std::string t = trim(line);
        if (t.empty()) continue;
        int col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        if (is_section_header(t)) {
            if (t == "[summands]" || t == "[differential]") {
                // Twisted-complex blocks ride along in the same file; parse_twisted reads them.
                section = "skip";
                continue;
            }
            if (t == "[vertices]" || t == "[arrows]" || t == "[relations]" || t == "[pinched]") {
                if (seen_sections.count(t)) throw PresentationError("duplicate section " + t, lineno, col);
                seen_sections.insert(t);
                section = t;
                if (t == "[pinched]") declared_pinched = true;
                continue;
            }
            throw PresentationError("unknown section " + t, lineno, col);
        }
        if (section.empty()) throw PresentationError("content before any section", lineno, col);
        if (section == "skip") continue;
        if (section == "[vertices]") {
            auto toks = tokenize(line);
            if (toks.size() != 1) throw PresentationError("expected one vertex name per line", lineno, col);
            if (!valid_name(toks[0].text))
                throw PresentationError("invalid vertex name '" + toks[0].text + "'", lineno, toks[0].column);
            if (!vnames.insert(toks[0].text).second)
                throw PresentationError("duplicate vertex '" + toks[0].text + "'", lineno, toks[0].column);
            b.add_vertex(toks[0].text);
        } else if (section == "[arrows]") {
            std::size_t colon = line.find(':');
            std::size_t arrow = line.find("->", colon == std::string::npos ? 0 : colon);
            std::size_t at = line.find('@', arrow == std::string::npos ? 0 : arrow);
            if (colon == std::string::npos || arrow == std::string::npos || at == std::string::npos)
                throw PresentationError("expected 'name : src -> tgt @ degree'", lineno, col);
            std::string name = trim(line.substr(0, colon));
            std::string src = trim(line.substr(colon + 1, arrow - colon - 1));
            std::string tgt = trim(line.substr(arrow + 2, at - arrow - 2));
            std::string deg = trim(line.substr(at + 1));
            if (!valid_name(name)) throw PresentationError("invalid arrow name '" + name + "'", lineno, col);
            if (!vnames.count(src))
                throw PresentationError("arrow '" + name + "' has undeclared source '" + src + "'", lineno,
                                        static_cast<int>(line.find(src, colon)) + 1);
            if (!vnames.count(tgt))
                throw PresentationError("arrow '" + name + "' has undeclared target '" + tgt + "'", lineno,
                                        static_cast<int>(line.find(tgt, arrow)) + 1);
            int d = 0;
            try {
                std::size_t used = 0;
                d = std::stoi(deg, &used);
                if (used != deg.size()) throw std::invalid_argument(deg);
            } catch (const std::exception&) {
                throw PresentationError("invalid degree '" + deg + "'", lineno, static_cast<int>(at) + 2);
            }
            if (!anames.insert(name).second) throw PresentationError("duplicate arrow '" + name + "'", lineno, col);
            aends[name] = {src, tgt};
            b.add_arrow(name, src, tgt, d);
        } else if (section == "[relations]") {
            auto terms = parse_terms(line, lineno, [&](const std::string& v) { return vnames.count(v) > 0; },
                                     [&](const std::string& a) { return anames.count(a) > 0; });
            std::string rsrc, rtgt;
            for (const auto& term : terms) {
                std::string s, t;
                if (!term.trivial_vertex.empty()) {
                    s = t = term.trivial_vertex;
                } else {
                    for (std::size_t q = 0; q + 1 < term.arrows.size(); ++q)
                        if (aends[term.arrows[q]].first != aends[term.arrows[q + 1]].second)
                            throw PresentationError("arrows '" + term.arrows[q] + "' and '" + term.arrows[q + 1] +
                                                        "' are not composable",
                                                    lineno, col);
                    t = aends[term.arrows.front()].second;
                    s = aends[term.arrows.back()].first;
                }
                if (rsrc.empty()) {
                    rsrc = s;
                    rtgt = t;
                } else if (s != rsrc || t != rtgt) {
                    throw PresentationError("relation mixes paths with different endpoints", lineno, col);
                }
            }
            b.add_relation(terms);
        } else {
            auto toks = tokenize(line);
            if (toks.size() != 1) throw PresentationError("expected one loop name per line", lineno, col);
            if (!anames.count(toks[0].text))
                throw PresentationError("pinched loop '" + toks[0].text + "' is not a declared arrow", lineno,
                                        toks[0].column);
            b.declare_pinched(toks[0].text);
        }
    }
    Presentation p;
    try {
        p = b.build();
    } catch (const PresentationError& e) {
        throw PresentationError(e.what(), 0, 0);
    }
    if (declared_pinched) {
        auto res = pinched_decompose(p, b.pinched(), false);
        if (!res.ok) throw PresentationError("pinched decomposition failed: " + res.message);
        p.decomposition = res.decomposition;
    }
    return p;
}

Element parse_element(const Presentation& p, const std::string& text, int lineno)
{
    auto terms = parse_terms(text, lineno, [&](const std::string& v) { return p.vertex_index(v) >= 0; },
                             [&](const std::string& a) { return p.arrow_index(a) >= 0; });
    Field Q;
    Element e;
    for (const auto& t : terms) {
        Path path;
        if (!t.trivial_vertex.empty()) {
            path = Path::trivial(p.vertex_index(t.trivial_vertex));
        } else {
            try {
                path = p.path_of(t.arrows);
            } catch (const std::invalid_argument& ex) {
                throw PresentationError(ex.what(), lineno, 1);
            }
        }
        element_add_to(Q, e, element_of(path, t.coeff));
    }
    int s, tg;
    if (!e.empty() && !p.endpoints(e, s, tg))
        throw PresentationError("element mixes paths with different endpoints", lineno, 1);
    return e;
}

Presentation load_presentation(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PresentationError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

std::string serialize(const Presentation& p, bool with_provenance)
{
    std::ostringstream out;
    if (with_provenance)
        for (const auto& line : p.provenance) out << "# provenance: " << line << "\n";
    out << "[vertices]\n";
    for (const auto& v : p.vertices) out << v << "\n";
    out << "[arrows]\n";
    for (const auto& a : p.arrows)
        out << a.name << " : " << p.vertices[a.src] << " -> " << p.vertices[a.tgt] << " @ " << a.degree << "\n";
    out << "[relations]\n";
    for (const auto& r : p.relations) out << p.format_element(r) << "\n";
    if (p.decomposition && !p.decomposition->loops.empty()) {
        out << "[pinched]\n";
        for (int l : p.decomposition->loops) out << p.arrows[l].name << "\n";
    }
    return out.str();
}

Presentation with_pinched(const Presentation& p, const std::vector<std::string>& loops)
{
    Presentation q = p;
    q.decomposition.reset();
    if (loops.empty()) return q;
    auto res = pinched_decompose(q, loops, false);
    if (!res.ok) throw PresentationError("pinched decomposition failed: " + res.message);
    q.decomposition = res.decomposition;
    return q;
}

} // namespace gdg
