#pragma once

// Rational quaternion algebras (a, b / Q) with basis 1, i, j, ij.

#include <array>
#include <string>
#include <vector>

#include "qt/exact/number.hpp"

namespace qt::quat {

using exact::Integer;
using exact::Rat;

struct QuatAlgebra {
    Rat a;
    Rat b;

    QuatAlgebra(Rat a_, Rat b_);
    bool operator==(const QuatAlgebra&) const = default;
};

struct Ramification {
    std::vector<Integer> finite_primes;
    bool at_infinity = false;
};

Ramification ramified_places(const QuatAlgebra& alg);
/// Product of the finite ramified primes.
Integer discriminant(const QuatAlgebra& alg);
bool is_division(const QuatAlgebra& alg);

class QuatElt {
public:
    QuatElt(const QuatAlgebra& alg, std::array<Rat, 4> coords);
    static QuatElt scalar(const QuatAlgebra& alg, const Rat& c);
    static QuatElt one(const QuatAlgebra& alg) { return scalar(alg, 1); }
    static QuatElt i(const QuatAlgebra& alg) { return QuatElt(alg, {0, 1, 0, 0}); }
    static QuatElt j(const QuatAlgebra& alg) { return QuatElt(alg, {0, 0, 1, 0}); }
    static QuatElt ij(const QuatAlgebra& alg) { return QuatElt(alg, {0, 0, 0, 1}); }

    const QuatAlgebra& algebra() const { return alg_; }
    const std::array<Rat, 4>& coords() const { return c_; }
    const Rat& operator[](std::size_t k) const { return c_[k]; }

    Rat trd() const { return 2 * c_[0]; }
    Rat nrd() const;
    QuatElt conj() const;
    /// Throws DomainError for zero.
    QuatElt inverse() const;
    bool is_zero() const;
    /// True when x lies in Q (x, y and z coordinates vanish).
    bool is_scalar() const;

    QuatElt operator-() const;
    friend QuatElt operator+(const QuatElt& x, const QuatElt& y);
    friend QuatElt operator-(const QuatElt& x, const QuatElt& y);
    friend QuatElt operator*(const QuatElt& x, const QuatElt& y);
    friend QuatElt operator*(const Rat& c, const QuatElt& x);
    bool operator==(const QuatElt& other) const;

private:
    QuatAlgebra alg_;
    std::array<Rat, 4> c_;
};

/// "1/2 + 1/2*i - j + ij" style rendering.
std::string to_string(const QuatElt& x);

}  // namespace qt::quat
