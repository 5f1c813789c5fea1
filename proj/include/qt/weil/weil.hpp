#pragma once

// Weil polynomials of abelian surfaces over F_q: isogeny labels, validity,
// Honda-Tate admissibility, base change and the torsion scans built on them.

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qt/exact/poly.hpp"

namespace qt::weil {

using exact::Integer;
using exact::IntPoly;

/// T^2 + a T + q.
struct WeilPoly1 {
    Integer q;
    Integer a;

    IntPoly poly() const;
    bool operator==(const WeilPoly1&) const = default;
};

/// T^4 + a1 T^3 + a2 T^2 + q a1 T + q^2.
struct WeilPoly2 {
    Integer q;
    Integer a1;
    Integer a2;

    IntPoly poly() const;
    /// f(1) = #A(F_q).
    Integer point_count() const;
    bool operator==(const WeilPoly2&) const = default;
    bool operator<(const WeilPoly2& o) const {
        if (q != o.q) return q < o.q;
        if (a1 != o.a1) return a1 < o.a1;
        return a2 < o.a2;
    }
};

/// Base-26 letter code: a = 0, ..., z = 25, a leading 'a' marks a negative value.
std::string encode_coefficient(const Integer& c);
Integer decode_coefficient(std::string_view s, std::size_t offset = 0);

/// "2.q.c1_c2"; throws ParseError with the offending position.
WeilPoly2 parse_label(std::string_view label);
std::string format_label(const WeilPoly2& w);

bool is_weil_valid(const WeilPoly1& w);
/// Both roots of x^2 + a1 x + (a2 - 2q) are real and lie in [-2 sqrt q, 2 sqrt q].
bool is_weil_valid(const WeilPoly2& w);

/// Honda-Tate: every irreducible factor P^k of f has e(P) | k, where e(P) is
/// the lcm of the denominators of the local invariants of Q[T]/P.
bool honda_tate_admissible(const WeilPoly2& w);
/// e(P) for a monic irreducible P dividing a Weil polynomial over F_q.
Integer honda_tate_index(const IntPoly& p, const Integer& q);
/// Offline shortcut: ordinary classes (p does not divide a2) are admissible.
bool ordinary(const WeilPoly2& w);

struct SurfaceClass {
    WeilPoly2 w;
    bool admissible;
};

/// All Weil-valid (a1, a2) over F_q, q in {2, 3, 4, 5, 7, 9}, ordered by
/// (a1, a2). Throws DomainError otherwise.
std::vector<SurfaceClass> enumerate_surfaces(const Integer& q);
std::vector<WeilPoly2> admissible_surfaces(const Integer& q);

/// Monic polynomial whose roots are the n-th powers of the roots of f.
IntPoly base_change(const IntPoly& f, unsigned n);
WeilPoly2 base_change(const WeilPoly2& w, unsigned n);
WeilPoly1 base_change(const WeilPoly1& w, unsigned n);

/// a with f = (T^2 + a T + q)^2 and T^2 + a T + q a valid Weil polynomial.
std::optional<Integer> square_root_class(const WeilPoly2& w);

struct SplitWitness {
    unsigned n;
    Integer a;
};

/// Smallest n <= nmax with base_change(w, n) = (T^2 + a T + q^n)^2.
std::optional<SplitWitness> geometric_split_analysis(const WeilPoly2& w, unsigned nmax = 24);

struct TorsionScan {
    Integer max_gcd;
    std::vector<WeilPoly2> attaining;
};

/// max gcd(f(1), ell^100) over admissible classes (optionally only those
/// that become squares of an elliptic class over some F_{q^n}, n <= 24).
TorsionScan torsion_gcd_scan(const Integer& q, const Integer& ell, bool geometric_square_only);

/// Primes dividing 1 + a + q for some |a| <= 2 sqrt q.
std::set<Integer> qm_prime_bound(const Integer& q);

/// Reads a JSON array of {"label", "a1", "a2"}; throws IngestError on schema
/// violations, including a label that disagrees with its coefficients.
std::vector<WeilPoly2> load_class_fixture(const std::string& path);

}  // namespace qt::weil
