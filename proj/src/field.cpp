#include "gdg/field.hpp"

#include <cctype>

namespace gdg {

bool is_prime(std::uint64_t n)
{
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

Field::Field(std::uint64_t p) : p_(p)
{
    if (p != 0 && !is_prime(p))
        throw ArithmeticError("field characteristic must be 0 or a prime, got " + std::to_string(p));
    if (p >= (1ull << 31))
        throw ArithmeticError("prime field characteristic must be below 2^31");
}

static mpz_class mod_p(const mpz_class& z, std::uint64_t p)
{
    mpz_class r = z % mpz_class(static_cast<unsigned long>(p));
    if (r < 0) r += static_cast<unsigned long>(p);
    return r;
}

Scalar Field::normalize(const Scalar& x) const
{
    if (p_ == 0) return x;
    mpz_class num = mod_p(x.get_num(), p_);
    mpz_class den = mod_p(x.get_den(), p_);
    if (den == 0) throw ArithmeticError("denominator vanishes modulo " + std::to_string(p_));
    if (den != 1) {
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mpz_class(static_cast<unsigned long>(p_)).get_mpz_t());
        num = mod_p(num * inv, p_);
    }
    return Scalar(num);
}

Scalar Field::inv(const Scalar& a) const
{
    if (sgn(a) == 0) throw ArithmeticError("division by zero");
    if (p_ == 0) return Scalar(1) / a;
    mpz_class r = mod_p(a.get_num(), p_);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), r.get_mpz_t(), mpz_class(static_cast<unsigned long>(p_)).get_mpz_t());
    return Scalar(inv);
}

std::uint32_t Field::residue(const Scalar& a) const
{
    if (p_ == 0) throw ArithmeticError("residue requested over the rationals");
    Scalar n = normalize(a);
    return static_cast<std::uint32_t>(n.get_num().get_ui());
}

Scalar parse_rational(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    if (t.empty()) throw ArithmeticError("empty rational literal");
    std::string body = t;
    bool negative = false;
    if (body[0] == '+' || body[0] == '-') {
        negative = body[0] == '-';
        body = body.substr(1);
    }
    auto slash = body.find('/');
    std::string num = body.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : body.substr(slash + 1);
    auto digits = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (!digits(num) || !digits(den)) throw ArithmeticError("malformed rational literal '" + text + "'");
    mpz_class n(num), d(den);
    if (d == 0) throw ArithmeticError("zero denominator in '" + text + "'");
    Scalar q(n, d);
    q.canonicalize();
    return negative ? Scalar(-q) : q;
}

std::string format_scalar(const Scalar& q)
{
    return q.get_str();
}

} // namespace gdg
