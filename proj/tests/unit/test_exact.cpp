#include <random>

#include "doctest.h"
#include "qt/errors.hpp"
#include "qt/exact/matrix.hpp"
#include "qt/exact/number.hpp"
#include "qt/exact/poly.hpp"

using namespace qt::exact;

namespace {

int legendre_brute(long a, long p) {
    long r = ((a % p) + p) % p;
    if (r == 0) return 0;
    for (long x = 1; x < p; ++x)
        if (x * x % p == r) return 1;
    return -1;
}

// Product over the places where a symbol can be nontrivial.
int hilbert_product(const Rat& a, const Rat& b) {
    int prod = hilbert_symbol(a, b, Place::infinity());
    Integer n = 2 * a.get_num() * a.get_den() * b.get_num() * b.get_den();
    for (const auto& p : prime_divisors(n)) prod *= hilbert_symbol(a, b, Place::prime(p));
    return prod;
}

// Elementary divisors from gcds of minors (independent of elimination).
std::vector<Integer> divisors_from_minors_2x2(const IntMatrix& m) {
    Integer d1 = gcd(gcd(m[0][0], m[0][1]), gcd(m[1][0], m[1][1]));
    Integer det = abs(Integer(m[0][0] * m[1][1] - m[0][1] * m[1][0]));
    std::vector<Integer> out;
    if (d1 != 1) out.push_back(d1);
    if (det / d1 != 1) out.push_back(det / d1);
    return out;
}

bool has_small_factor(const IntPoly& h) {
    // rational roots
    const Integer lc = h.leading();
    const Integer c0 = h.coeff(0);
    if (c0 == 0) return true;
    for (const auto& num : divisors(c0))
        for (const auto& den : divisors(lc))
            for (int s : {1, -1})
                if (h.eval(make_rat(s * num, den)) == 0) return true;
    if (h.degree() < 4) return false;
    // quadratic factors a x^2 + b x + c with bounded b
    Integer norm2 = 0;
    for (const auto& c : h.coeffs()) norm2 += c * c;
    Integer bound = abs(lc) * 4 * (floor_sqrt(norm2) + 1);
    for (const auto& a : divisors(lc))
        for (const auto& c : divisors(c0))
            for (int s : {1, -1})
                for (Integer b = -bound; b <= bound; ++b)
                    if (divides_exactly(h, IntPoly({s * c, b, a}))) return true;
    return false;
}

IntPoly product(const RationalFactorization& f) {
    IntPoly p = IntPoly::constant(1);
    for (const auto& h : f.factors) p = p * h;
    return p;
}

}  // namespace

TEST_CASE("kronecker symbol examples") {
    CHECK(kronecker_symbol(1, 7) == 1);
    CHECK(kronecker_symbol(-1, 3) == -1);
    CHECK(kronecker_symbol(2, 15) == 1);
    CHECK(kronecker_symbol(5, 0) == 0);
    CHECK(kronecker_symbol(-1, 0) == 1);
}

TEST_CASE("kronecker agrees with residue search for odd primes") {
    for (long p = 3; p <= 97; p += 2) {
        if (!is_prime(p)) continue;
        for (long a = -50; a <= 50; ++a) CHECK(kronecker_symbol(a, p) == legendre_brute(a, p));
    }
}

TEST_CASE("kronecker is multiplicative") {
    for (long a = -20; a <= 20; ++a)
        for (long m = 1; m <= 30; ++m)
            for (long n = 1; n <= 30; ++n)
                CHECK(kronecker_symbol(a, m * n) == kronecker_symbol(a, m) * kronecker_symbol(a, n));
}

TEST_CASE("hilbert symbol examples") {
    CHECK(hilbert_symbol(-1, 6, Place::prime(2)) == -1);
    CHECK(hilbert_symbol(-1, 6, Place::prime(3)) == -1);
    CHECK(hilbert_symbol(-1, 6, Place::infinity()) == 1);
    for (long b : {-7, 2, 3, 10})
        for (long p : {2, 3, 5, 7}) CHECK(hilbert_symbol(1, b, Place::prime(p)) == 1);
    CHECK_THROWS_AS(hilbert_symbol(0, 3, Place::prime(2)), qt::DomainError);
}

TEST_CASE("hilbert product formula on random pairs") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 1000);
    for (int k = 0; k < 300; ++k) {
        long an = 0, bn = 0;
        while (an == 0) an = num(rng);
        while (bn == 0) bn = num(rng);
        Rat a = make_rat(an, den(rng)), b = make_rat(bn, den(rng));
        CHECK(hilbert_product(a, b) == 1);
    }
}

TEST_CASE("rational square classes") {
    auto c = rational_square_class(18);
    CHECK(c.squarefree == 2);
    CHECK_FALSE(c.is_square);
    c = rational_square_class(make_rat(4, 9));
    CHECK(c.squarefree == 1);
    CHECK(c.is_square);
    c = rational_square_class(make_rat(-45, 5));
    CHECK(c.squarefree == -1);
    CHECK_FALSE(c.is_square);
    c = rational_square_class(make_rat(-6, 25));
    CHECK(c.squarefree == -6);
    CHECK_THROWS_AS(rational_square_class(0), qt::DomainError);
}

TEST_CASE("padic valuation") {
    CHECK(padic_valuation(Rat(12), 2) == 2);
    CHECK(padic_valuation(make_rat(5, 8), 2) == -3);
    CHECK(padic_valuation(make_rat(7, 3), 5) == 0);
    CHECK_THROWS_AS(padic_valuation(Rat(0), 3), qt::DomainError);
}

TEST_CASE("integer factorization") {
    auto f = factor_integer(Integer("1000000016000000063"));  // (10^9+7)(10^9+9)
    REQUIRE(f.size() == 2);
    CHECK(f[0].prime == Integer(1000000007));
    CHECK(f[1].prime == Integer(1000000009));
    f = factor_integer(Integer(2) * 2 * 3 * 3 * 3 * 97);
    REQUIRE(f.size() == 3);
    CHECK(f[1] == PrimePower{3, 3});
    CHECK(divisors(12) == std::vector<Integer>{1, 2, 3, 4, 6, 12});
    CHECK(as_prime_power(9).first == 3);
    CHECK(as_prime_power(12).first == 0);
}

TEST_CASE("rational parsing") {
    CHECK(parse_rat("3/6") == make_rat(1, 2));
    CHECK(parse_rat("-7") == -7);
    CHECK(to_string(parse_rat("-10/4")) == "-5/2");
    CHECK_THROWS_AS(parse_rat("1/0"), qt::ParseError);
    CHECK_THROWS_AS(parse_rat("1x"), qt::ParseError);
}

TEST_CASE("smith invariants examples") {
    CHECK(smith_invariants({{2, 0}, {0, 2}}).divisors == std::vector<Integer>{2, 2});
    CHECK(smith_invariants({{1, 0}, {0, 6}}).divisors == std::vector<Integer>{6});
    CHECK(smith_invariants({{2, 4}, {2, 8}}).divisors == std::vector<Integer>{2, 4});
    CHECK(smith_invariants({{6, 0}, {0, 4}}).divisors == std::vector<Integer>{2, 12});
    CHECK(to_string(smith_invariants({{1}})) == "[]");
}

TEST_CASE("smith invariants match gcd-of-minors oracle on small 2x2 matrices") {
    for (int a = 0; a <= 8; ++a)
        for (int b = 0; b <= 8; ++b)
            for (int c = 0; c <= 8; ++c)
                for (int d = 0; d <= 8; d += 2) {
                    if (a * d - b * c == 0) continue;
                    IntMatrix m{{a, b}, {c, d}};
                    CHECK(smith_invariants(m).divisors == divisors_from_minors_2x2(m));
                }
}

TEST_CASE("smith invariants under unimodular operations") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> entry(-9, 9), pick(0, 3), mult(-3, 3);
    for (int k = 0; k < 100; ++k) {
        IntMatrix m(4, std::vector<Integer>(4));
        for (auto& row : m)
            for (auto& x : row) x = entry(rng);
        auto base = smith_invariants(m);
        for (int op = 0; op < 20; ++op) {
            int i = pick(rng), j = pick(rng), c = mult(rng);
            if (i == j) continue;
            if (op % 2) {
                for (int t = 0; t < 4; ++t) m[i][t] += c * m[j][t];
            } else {
                for (int t = 0; t < 4; ++t) m[t][i] += c * m[t][j];
            }
        }
        CHECK(smith_invariants(m) == base);
    }
}

TEST_CASE("hermite normal form") {
    auto h = hermite_normal_form({{2, 4}, {3, 5}, {0, 0}});
    REQUIRE(h.size() == 2);
    CHECK(h[0][0] == 1);
    CHECK(h[1][0] == 0);
    CHECK(h[1][1] == 2);
    CHECK(abs(determinant(IntMatrix{{2, 4}, {3, 5}})) == 2);
}

TEST_CASE("polynomial parsing and printing") {
    auto f = parse_int_poly("5x^6+21x^5-63x^4-49x^3+294x^2-343");
    CHECK(f.degree() == 6);
    CHECK(f.coeff(0) == -343);
    CHECK(parse_int_poly(to_string(f)) == f);
    CHECK(parse_int_poly("x - 1") == IntPoly({-1, 1}));
    CHECK(parse_int_poly("-x^2") == IntPoly({0, 0, -1}));
    CHECK_THROWS_AS(parse_int_poly("3x^"), qt::ParseError);
    CHECK_THROWS_AS(parse_int_poly(""), qt::ParseError);
}

TEST_CASE("resultant and discriminant") {
    CHECK(discriminant(IntPoly({-2, 0, 1})) == 8);
    CHECK(discriminant(IntPoly({1, 1, 1})) == -3);
    CHECK(discriminant(IntPoly({-1, 0, 0, 1})) == -27);
    CHECK(resultant(IntPoly({-1, 1}), IntPoly({-2, 1})) == -1);
}

TEST_CASE("factor_poly_q examples") {
    auto f = factor_poly_q(IntPoly({-1, 0, 1}));
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == IntPoly({-1, 1}));
    CHECK(f.factors[1] == IntPoly({1, 1}));

    f = factor_poly_q(IntPoly({9, 0, -2, 0, 1}));
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0] == IntPoly({9, 0, -2, 0, 1}));

    f = factor_poly_q(IntPoly({0, 0, 4, 0, 0, 0, 1}));
    CHECK(f.content == 1);
    REQUIRE(f.factors.size() == 4);
    CHECK(f.factors[0] == IntPoly({0, 1}));
    CHECK(f.factors[1] == IntPoly({0, 1}));
    CHECK(f.factors[2] == IntPoly({2, -2, 1}));
    CHECK(f.factors[3] == IntPoly({2, 2, 1}));

    f = factor_poly_q(IntPoly({-6, 0, 4}));
    CHECK(f.content == 2);
    CHECK(f.factors == std::vector<IntPoly>{IntPoly({-3, 0, 2})});
    CHECK_THROWS_AS(factor_poly_q(IntPoly::monomial(1, 9)), qt::UnsupportedError);
}

TEST_CASE("factor_poly_q multiplies back and factors are irreducible") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> coeff(-5, 5), deg(1, 3);
    for (int k = 0; k < 60; ++k) {
        IntPoly f = IntPoly::constant(1);
        while (f.degree() < 2) {
            int target = deg(rng);
            std::vector<Integer> c(target + 1);
            for (auto& x : c) x = coeff(rng);
            if (c.back() == 0) c.back() = 1;
            IntPoly g(c);
            if (f.degree() + g.degree() <= 8) f = f * g;
        }
        auto fac = factor_poly_q(f);
        CHECK(fac.content != 0);
        IntPoly back = product(fac);
        CHECK(IntPoly::constant(fac.content.get_num()) * back == f);
        for (const auto& h : fac.factors)
            if (h.degree() >= 2 && h.degree() <= 4) CHECK_FALSE(has_small_factor(h));
    }
}

TEST_CASE("factor_poly_q on a Swinnerton-Dyer polynomial") {
    // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime
    auto f = factor_poly_q(IntPoly({1, 0, -10, 0, 1}));
    CHECK(f.factors.size() == 1);
    // (x^4-10x^2+1)(x^2-3) = x^6 - 13x^4 + 31x^2 - 3
    f = factor_poly_q(IntPoly({-3, 0, 31, 0, -13, 0, 1}));
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0] == IntPoly({-3, 0, 1}));
}
