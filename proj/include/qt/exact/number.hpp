#pragma once

// Arbitrary precision integers and rationals, prime factorization, p-adic
// valuations, and the residue symbols built on them.

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qt::exact {

using Integer = mpz_class;
/// Always canonical: gcd(num, den) = 1, den > 0, zero is 0/1.
using Rat = mpq_class;

Rat make_rat(const Integer& num, const Integer& den);
/// "p/q" or "p"; throws ParseError.
Rat parse_rat(std::string_view text);
std::string to_string(const Rat& x);
std::string to_string(const Integer& x);

bool is_integer(const Rat& x);
Integer floor_sqrt(const Integer& n);
bool is_square(const Integer& n);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
/// Nonnegative residue of a mod m (m > 0).
Integer mod(const Integer& a, const Integer& m);
Integer pow(const Integer& base, unsigned long exponent);

struct PrimePower {
    Integer prime;
    unsigned exponent;

    bool operator==(const PrimePower&) const = default;
};

bool is_prime(const Integer& n);
/// Factorization of |n| (n != 0) in increasing prime order; empty for |n| = 1.
std::vector<PrimePower> factor_integer(const Integer& n);
std::vector<Integer> prime_divisors(const Integer& n);
/// All positive divisors of |n| in increasing order.
std::vector<Integer> divisors(const Integer& n);
/// Returns (p, k) when n = p^k with p prime and k >= 1; otherwise p = 0.
std::pair<Integer, unsigned> as_prime_power(const Integer& n);

/// Exponent of p in x. Throws DomainError for x = 0.
long padic_valuation(const Rat& x, const Integer& p);
long padic_valuation(const Integer& x, const Integer& p);

/// Kronecker symbol (a/n) for arbitrary integers; values in {-1, 0, 1}.
int kronecker_symbol(const Integer& a, const Integer& n);

/// A place of Q: a prime p, or the real place (stored as p = 0).
struct Place {
    Integer p;

    static Place infinity() { return Place{0}; }
    static Place prime(const Integer& q) { return Place{q}; }
    bool is_infinite() const { return p == 0; }
    bool operator==(const Place&) const = default;
};

std::string to_string(const Place& v);

/// Hilbert symbol (a, b)_v: 1 iff the quaternion algebra (a, b) splits at v.
int hilbert_symbol(const Rat& a, const Rat& b, const Place& v);

struct SquareClass {
    /// Unique squarefree integer with x = squarefree * (rational square).
    Integer squarefree;
    bool is_square;
};

SquareClass rational_square_class(const Rat& x);
bool is_rational_square(const Rat& x);

}  // namespace qt::exact
