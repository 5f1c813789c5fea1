#pragma once

// Dense integer / rational matrices: Smith and Hermite normal forms,
// determinants and inverses.

#include <string>
#include <vector>

#include "qt/exact/number.hpp"

namespace qt::exact {

using IntMatrix = std::vector<std::vector<Integer>>;
using RatMatrix = std::vector<std::vector<Rat>>;

/// Finite abelian group Z/d1 x ... x Z/dk with d1 | d2 | ... | dk, each di >= 2.
/// A divisor 0 stands for a free Z summand (only produced for cokernels of
/// rank-deficient maps).
struct AbelianInvariants {
    std::vector<Integer> divisors;

    /// Group order; 0 if there is a free summand.
    Integer order() const;
    /// Number of cyclic factors of order divisible by ell.
    std::size_t rank_at(const Integer& ell) const;
    bool operator==(const AbelianInvariants&) const = default;
};

/// "[2,2]", "[]" for the trivial group.
std::string to_string(const AbelianInvariants& g);
/// Normalizes an arbitrary list of cyclic orders to invariant-factor form.
AbelianInvariants abelian_from_cyclic(const std::vector<Integer>& cyclic_orders);

/// Diagonal of the Smith normal form of M (length min(rows, cols)),
/// nonnegative with d1 | d2 | ...
std::vector<Integer> smith_diagonal(IntMatrix m);
/// Elementary divisors of coker(M : Z^cols -> Z^rows), 1's dropped.
AbelianInvariants smith_invariants(const IntMatrix& m);

/// Row Hermite normal form: upper triangular with positive pivots and
/// reduced entries above each pivot; zero rows removed.
IntMatrix hermite_normal_form(IntMatrix rows);

Integer determinant(IntMatrix m);
Rat determinant(RatMatrix m);
/// Throws DomainError if singular.
RatMatrix inverse(const RatMatrix& m);
RatMatrix multiply(const RatMatrix& a, const RatMatrix& b);
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);
IntMatrix identity_matrix(std::size_t n);

}  // namespace qt::exact
