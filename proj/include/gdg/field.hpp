// Exact scalars: rationals, or residues modulo a prime.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gdg {

using Scalar = mpq_class;

class Field {
public:
    Field() = default;
    // p == 0 selects the rationals.
    explicit Field(std::uint64_t p);

    std::uint64_t characteristic() const { return p_; }
    bool is_rational() const { return p_ == 0; }

    Scalar normalize(const Scalar& x) const;
    Scalar add(const Scalar& a, const Scalar& b) const { return normalize(a + b); }
    Scalar sub(const Scalar& a, const Scalar& b) const { return normalize(a - b); }
    Scalar mul(const Scalar& a, const Scalar& b) const { return normalize(a * b); }
    Scalar neg(const Scalar& a) const { return normalize(-a); }
    Scalar inv(const Scalar& a) const;
    Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
    bool is_zero(const Scalar& a) const { return sgn(a) == 0; }

    // Residue in [0, p) for prime fields; throws for the rationals.
    std::uint32_t residue(const Scalar& a) const;

    bool operator==(const Field& o) const { return p_ == o.p_; }

private:
    std::uint64_t p_ = 0;
};

struct ArithmeticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts "3", "-1/3", "+2".
Scalar parse_rational(const std::string& text);
std::string format_scalar(const Scalar& q);

bool is_prime(std::uint64_t n);

} // namespace gdg
