#pragma once

// Arithmetic in O/NO for small N: conjugation matrices, left submodules over
// F_ell and the semidirect group law on Aut(O) x (O/NO)^x.

#include <array>
#include <vector>

#include "qt/exact/matrix.hpp"
#include "qt/quat/order.hpp"

namespace qt::aut {

using exact::Integer;
using exact::Rat;
using quat::QuatElt;
using quat::QuatOrder;

/// Coordinates of an element of O/NO in the order basis, each in [0, N).
using Residue = std::array<long, 4>;

class ResidueRing {
public:
    ResidueRing(const QuatOrder& order, long modulus);

    long modulus() const { return n_; }
    const QuatOrder& order() const { return order_; }
    Residue reduce(const QuatElt& x) const;
    Residue reduce(const quat::IntVec4& c) const;
    Residue one() const { return one_; }
    Residue zero() const { return {0, 0, 0, 0}; }
    Residue mul(const Residue& x, const Residue& y) const;
    Residue add(const Residue& x, const Residue& y) const;
    Residue neg(const Residue& x) const;
    Residue scale(long c, const Residue& x) const;
    /// nrd of any lift, modulo N.
    long nrd(const Residue& x) const;
    bool is_unit(const Residue& x) const;
    /// All N^4 residues in order of their base-N code (first coordinate fastest).
    Residue from_code(long code) const;
    long size() const { return n_ * n_ * n_ * n_; }

private:
    QuatOrder order_;
    long n_;
    long mult_[4][4][4];
    long gram_[4][4];
    Residue one_;
};

/// Integral matrix of x -> g^{-1} x g in the order basis: row i holds the
/// coordinates of g^{-1} e_i g. Requires g in the normalizer of O.
exact::IntMatrix conjugation_matrix(const QuatOrder& order, const QuatElt& g);
Residue apply(const exact::IntMatrix& m, const Residue& x, long modulus);

/// An F_ell-subspace of O/ell O, stored as a reduced row echelon basis.
struct Submodule {
    long ell;
    std::vector<Residue> basis;

    std::size_t dimension() const { return basis.size(); }
    /// ell^dimension.
    Integer order() const;
    bool operator==(const Submodule&) const = default;
};

/// Row-reduced span of the given vectors over F_ell.
Submodule span_mod_ell(std::vector<Residue> vectors, long ell);
/// The left submodule O * x of O/ell O.
Submodule generated_by(const ResidueRing& ring, const Residue& x);
/// All left O-submodules of O/ell O (ell prime), ordered by (dimension, basis).
std::vector<Submodule> submodule_lattice_mod_ell(const QuatOrder& order, long ell);

/// First element of span(V) (dim V = 3), scanning coefficient vectors in
/// canonical order, that generates O/ell O as a left module. Throws
/// InvariantError if none exists.
Residue three_dim_generator_check(const QuatOrder& order, long ell, const std::vector<Residue>& v);

/// (gamma, x) with gamma in the normalizer and x a unit of O/NO.
struct EnhancedElement {
    QuatElt gamma;
    Residue x;
};

/// Normalizes gamma to the primitive element of O on its line, first nonzero
/// coordinate positive, so that equal classes in Aut(O) compare equal.
QuatElt canonical_aut_rep(const QuatOrder& order, const QuatElt& gamma);

/// (g1, x1) * (g2, x2) = (g1 g2, g2^{-1} x1 g2 * x2). Throws InvariantError for non-units.
EnhancedElement enhanced_mul(const ResidueRing& ring, const EnhancedElement& e1, const EnhancedElement& e2);
EnhancedElement enhanced_identity(const ResidueRing& ring);
bool enhanced_equal(const ResidueRing& ring, const EnhancedElement& a, const EnhancedElement& b);

}  // namespace qt::aut
