#pragma once

// Dense univariate integer polynomials, arithmetic modulo an integer, and
// factorization over Q (degree <= 8).

#include <string>
#include <string_view>
#include <vector>

#include "qt/exact/number.hpp"

namespace qt::exact {

class IntPoly {
public:
    IntPoly() = default;
    /// coeffs[i] is the coefficient of x^i; trailing zeros are stripped.
    explicit IntPoly(std::vector<Integer> coeffs);
    static IntPoly constant(const Integer& c);
    static IntPoly monomial(const Integer& c, unsigned degree);
    static IntPoly x() { return monomial(1, 1); }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Integer>& coeffs() const { return coeffs_; }
    /// Coefficient of x^i (0 beyond the degree).
    Integer coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Integer(0); }
    const Integer& leading() const;

    Integer eval(const Integer& x) const;
    Rat eval(const Rat& x) const;
    IntPoly derivative() const;
    /// Positive gcd of the coefficients (0 for the zero polynomial).
    Integer content() const;
    /// f / content, with positive leading coefficient.
    IntPoly primitive_part() const;

    IntPoly operator-() const;
    friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend IntPoly operator*(const Integer& c, const IntPoly& a);
    bool operator==(const IntPoly&) const = default;

private:
    void normalize();
    std::vector<Integer> coeffs_;
};

/// "5*x^6 + 21*x^5 - 343"; variable name configurable.
std::string to_string(const IntPoly& f, std::string_view var = "x");
/// Accepts sums of terms c, c*x, cx^k, x^k, -x ... with integer c; throws ParseError.
IntPoly parse_int_poly(std::string_view text);

/// Exact division over Z. Returns false when b does not divide a in Z[x].
bool divides_exactly(const IntPoly& a, const IntPoly& b, IntPoly* quotient = nullptr);
/// Primitive gcd over Z[x] with positive leading coefficient.
IntPoly gcd(const IntPoly& a, const IntPoly& b);
Integer resultant(const IntPoly& a, const IntPoly& b);
Integer discriminant(const IntPoly& f);

/// Polynomials over Z/mZ, coefficients in [0, m).
namespace modp {

using Poly = std::vector<Integer>;

Poly reduce(const IntPoly& f, const Integer& m);
Poly reduce(Poly f, const Integer& m);
Poly add(const Poly& a, const Poly& b, const Integer& m);
Poly sub(const Poly& a, const Poly& b, const Integer& m);
Poly mul(const Poly& a, const Poly& b, const Integer& m);
/// Division by a polynomial with unit leading coefficient.
void divmod(const Poly& a, const Poly& b, const Integer& m, Poly& q, Poly& r);
Poly rem(const Poly& a, const Poly& b, const Integer& m);
/// Monic gcd; m must be prime.
Poly gcd(Poly a, Poly b, const Integer& p);
/// s*a + t*b = gcd (monic); p prime.
Poly ext_gcd(const Poly& a, const Poly& b, const Integer& p, Poly& s, Poly& t);
Poly powmod(const Poly& base, Integer e, const Poly& modulus, const Integer& m);
Poly make_monic(const Poly& a, const Integer& p);
int degree(const Poly& a);
/// Irreducible monic factors of a squarefree polynomial over F_p, p odd prime.
std::vector<Poly> factor_squarefree(const Poly& f, const Integer& p, unsigned long seed = 1);

}  // namespace modp

struct RationalFactorization {
    Rat content;
    /// Primitive irreducible factors with positive leading coefficient,
    /// repeated by multiplicity, ordered by (degree, coefficients).
    std::vector<IntPoly> factors;
};

/// Irreducible factorization over Q; deg f <= 8 (UnsupportedError otherwise).
RationalFactorization factor_poly_q(const IntPoly& f);

}  // namespace qt::exact
