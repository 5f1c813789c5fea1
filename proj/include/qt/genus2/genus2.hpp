#pragma once

// The explicit (Z/2)^2 PQM family (Igusa invariants, field of moduli, Mestre
// obstruction) and torsion certification of genus-2 Jacobians over Q by
// point counting, Cantor arithmetic and 2-torsion combinatorics.

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qt/exact/matrix.hpp"
#include "qt/exact/poly.hpp"
#include "qt/weil/weil.hpp"

namespace qt::genus2 {

using exact::Integer;
using exact::AbelianInvariants;
using exact::IntPoly;
using exact::Rat;

struct IgusaPoint {
    Rat J2, J4, J6, J8, J10;
};

/// j(t) of the family; throws DomainError at singular t.
Rat family_j(const Rat& t);
IgusaPoint family_igusa(const Rat& t);

struct ModelChecks {
    /// -27 - 16/j is a rational square.
    bool field_of_moduli_ok;
    /// (-6j, -2(27j + 16)) has no finite ramification.
    bool mestre_splits;
};

ModelChecks rational_model_checks(const Rat& t);
/// Same checks for an arbitrary j (off the family); j must avoid 0 and -16/27.
ModelChecks model_checks_for_j(const Rat& j);

/// y^2 = f(x) with deg f in {5, 6}, integral coefficients, disc f != 0.
class GenusTwoCurve {
public:
    explicit GenusTwoCurve(IntPoly f);
    const IntPoly& f() const { return f_; }
    const Integer& discriminant() const { return disc_; }

private:
    IntPoly f_;
    Integer disc_;
};

/// "5x^6 + 21x^5 - 343" or {"f": [c0, ..., c6]}.
GenusTwoCurve parse_curve(std::string_view text);
GenusTwoCurve curve_from_json(const nlohmann::json& doc);

/// p odd prime with p not dividing disc(f) * lead(f).
bool good_prime(const GenusTwoCurve& c, const Integer& p);
/// #C(F_{p^n}), n in {1, 2}; throws DomainError at bad p.
Integer count_points_curve(const GenusTwoCurve& c, const Integer& p, unsigned n);
/// Throws InvariantError when the counts give a non-integral or invalid a2.
weil::WeilPoly2 lpoly_from_counts(const Integer& c1, const Integer& c2, const Integer& p);
weil::WeilPoly2 lpoly_mod_p(const GenusTwoCurve& c, const Integer& p);

/// Reduced divisor class: u monic, deg v < deg u <= 2, u | f - v^2.
struct MumfordDivisor {
    exact::modp::Poly u;
    exact::modp::Poly v;

    bool operator==(const MumfordDivisor&) const = default;
    bool operator<(const MumfordDivisor& o) const { return u != o.u ? u < o.u : v < o.v; }
};

/// Jac(C)(F_p) on a monic quintic model Y^2 = F(X), isomorphic to the given curve.
class JacobianModP {
public:
    /// Throws UnsupportedError for a sextic with no root mod p.
    JacobianModP(const GenusTwoCurve& c, const Integer& p);
    /// Directly from a monic squarefree quintic over F_p.
    JacobianModP(exact::modp::Poly monic_quintic, const Integer& p);

    const Integer& p() const { return p_; }
    const exact::modp::Poly& model() const { return f_; }

    MumfordDivisor identity() const { return {{1}, {}}; }
    MumfordDivisor add(const MumfordDivisor& a, const MumfordDivisor& b) const;
    MumfordDivisor negate(const MumfordDivisor& a) const;
    MumfordDivisor multiply(const MumfordDivisor& a, Integer n) const;
    bool is_valid(const MumfordDivisor& a) const;
    /// [(x0, y0) - infinity]; throws DomainError if the point is not on the model.
    MumfordDivisor point(const Integer& x0, const Integer& y0) const;
    /// Roots of the model mod p.
    std::vector<Integer> weierstrass_roots() const;
    MumfordDivisor random_element(std::mt19937_64& rng) const;

private:
    exact::modp::Poly f_;
    Integer p_;
};

/// Number of elements of g killed by n.
Integer torsion_count(const AbelianInvariants& g, const Integer& n);
/// "Z/2 x Z/6", "2x2", "(Z/3)^2", "trivial"; throws ParseError.
AbelianInvariants parse_invariants(std::string_view text);
/// "Z/2 x Z/6" or "trivial".
std::string group_name(const AbelianInvariants& g);

struct GroupStructure {
    Integer p;
    Integer order;
    /// Absent when the model has no odd-degree form over F_p.
    std::optional<AbelianInvariants> invariants;
};

GroupStructure jacobian_group_mod_p(const GenusTwoCurve& c, const Integer& p, unsigned long seed = 1);

/// Fixed classes of even root subsets modulo complement under a permutation with
/// the given cycle lengths (a quintic gets the point at infinity as a fixed root).
unsigned two_torsion_count(const std::vector<unsigned>& degrees);
/// Classes that are unions of whole factor blocks: a lower bound for the
/// rational 2-torsion when the degrees are those of the factorization over Q.
unsigned two_torsion_block_bound(const std::vector<unsigned>& degrees);

enum class Verdict { Consistent, Inconsistent, Undetermined };
std::string to_string(Verdict v);

struct PrimeCheck {
    Integer p;
    Integer order;
    bool divisible;
};

struct TorsionReport {
    AbelianInvariants claimed;
    std::vector<PrimeCheck> primes;
    Integer gcd;
    unsigned two_torsion_lower;
    /// #claimed[2].
    Integer claimed_two;
    /// 2-part of the gcd.
    Integer gcd_two_part;
    Verdict verdict;
};

/// Consistent when the claimed order divides every #J(F_p) and
/// #claimed[2] <= lower bound <= 2-part of the gcd; inconsistent when a
/// divisibility fails or the factorization forces more 2-torsion than claimed.
TorsionReport certify_torsion(const GenusTwoCurve& c, const AbelianInvariants& claimed, const Integer& p_max);

struct TableRow {
    AbelianInvariants torsion;
    Integer disc;
    std::string endomorphisms;
    GenusTwoCurve curve;
};

std::vector<TableRow> load_table(const std::string& path);

}  // namespace qt::genus2
