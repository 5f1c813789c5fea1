#pragma once

// Orders in rational quaternion algebras: lattices, maximality, normalizers,
// Atkin-Lehner representatives and bounded element searches.

#include <array>
#include <map>
#include <vector>

#include "json.hpp"
#include "qt/exact/matrix.hpp"
#include "qt/quat/algebra.hpp"

namespace qt::quat {

using IntVec4 = std::array<Integer, 4>;

class QuatOrder {
public:
    /// Validates rank 4, 1 in the lattice, closure under multiplication and
    /// integrality; throws InvariantError otherwise.
    QuatOrder(const QuatAlgebra& alg, std::array<QuatElt, 4> basis);

    /// Z<1, i, j, ij>; requires a, b integral.
    static QuatOrder standard(const QuatAlgebra& alg);
    /// The smallest order containing 1 and gens. Throws InvariantError when
    /// the generated ring is not integral.
    static QuatOrder generated_by(const QuatAlgebra& alg, const std::vector<QuatElt>& gens);

    const QuatAlgebra& algebra() const { return alg_; }
    const std::array<QuatElt, 4>& basis() const { return basis_; }

    /// Rational coordinates of x in the order basis.
    std::array<Rat, 4> coordinates(const QuatElt& x) const;
    bool contains(const QuatElt& x) const;
    /// Integral coordinates of x; throws DomainError if x is not in the order.
    IntVec4 integral_coordinates(const QuatElt& x) const;
    QuatElt element(const IntVec4& c) const;

    /// mult[i][j] = coordinates of e_i * e_j.
    const std::array<std::array<IntVec4, 4>, 4>& structure_constants() const { return mult_; }
    /// trd(e_i).
    const IntVec4& basis_traces() const { return traces_; }
    /// trd(e_i * conj(e_j)); nrd(x) = x^T G x / 2.
    const exact::IntMatrix& norm_gram() const { return norm_gram_; }

    Integer reduced_discriminant() const;
    bool is_maximal() const;

private:
    QuatAlgebra alg_;
    std::array<QuatElt, 4> basis_;
    exact::RatMatrix inverse_;
    std::array<std::array<IntVec4, 4>, 4> mult_;
    IntVec4 traces_;
    exact::IntMatrix norm_gram_;
};

/// A maximal order containing O (O itself when already maximal).
QuatOrder saturate_to_maximal(const QuatOrder& order);

struct NormalizerTest {
    bool in_normalizer;
    /// The primitive element of O on the line Q*b.
    QuatElt primitive;
    Rat primitive_nrd;
    /// |nrd(primitive)| divides disc(B).
    bool norm_divides_disc;
};

/// b O b^{-1} == O. Throws DomainError for b = 0.
bool is_in_normalizer(const QuatOrder& order, const QuatElt& b);
NormalizerTest normalizer_test(const QuatOrder& order, const QuatElt& b);

/// Elements x of O with trd(x) = 0 and x^2 = m, all coordinates in [-height, height],
/// in lexicographic coordinate order.
std::vector<QuatElt> find_trace_zero(const QuatOrder& order, const Integer& m, int height = 30);

/// For every positive divisor m of disc(B), an element of O in the normalizer
/// with |nrd| = m, preferring small |trd| then lexicographically small
/// coordinates. Throws NotFoundError naming the divisor if the search fails.
std::map<Integer, QuatElt> atkin_lehner_group(const QuatOrder& order, int height = 30);

nlohmann::json order_to_json(const QuatOrder& order);
/// Throws IngestError on schema problems.
QuatOrder order_from_json(const nlohmann::json& doc);

}  // namespace qt::quat
