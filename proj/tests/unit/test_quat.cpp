#include <random>

#include "doctest.h"
#include "qt/errors.hpp"
#include "qt/quat/order.hpp"

using namespace qt::quat;
using qt::exact::make_rat;

namespace {

QuatAlgebra alg16() { return QuatAlgebra(-1, 6); }

QuatElt elt(const QuatAlgebra& A, Rat t, Rat x, Rat y, Rat z) { return QuatElt(A, {t, x, y, z}); }

// {1, (1+i+ij)/2, (1-i+ij)/2, (j+ij)/2}
QuatOrder reference_maximal_16() {
    auto A = alg16();
    Rat h(1, 2);
    return QuatOrder(A, {QuatElt::one(A), elt(A, h, h, 0, h), elt(A, h, -h, 0, h), elt(A, 0, 0, h, h)});
}

// |det(trd(e_i e_j))| for the basis 1, i, j, ij computed from the diagonal
// Gram matrix diag(2, 2a, 2b, -2ab).
Integer standard_gram_sqrt(long a, long b) { return Integer(4 * std::abs(a * b)); }

// Q(sqrt m) splits at some prime dividing disc => no embedding.
bool embeds_locally(long m, const Integer& disc) {
    auto sq = qt::exact::rational_square_class(m).squarefree;
    Integer dk = (qt::exact::mod(sq, 4) == 1) ? sq : 4 * sq;
    for (const auto& p : qt::exact::prime_divisors(disc))
        if (qt::exact::kronecker_symbol(dk, p) == 1) return false;
    return true;
}

}  // namespace

TEST_CASE("quaternion arithmetic") {
    auto A = alg16();
    auto one = QuatElt::one(A), i = QuatElt::i(A), j = QuatElt::j(A);
    CHECK((one + i).nrd() == 2);
    CHECK(i.conj() == -i);
    CHECK(i.trd() == 0);
    CHECK(i * i == QuatElt::scalar(A, -1));
    CHECK(j * j == QuatElt::scalar(A, 6));
    CHECK(i * j == -(j * i));
    CHECK(i * j == QuatElt::ij(A));
    CHECK((i * j) * (i * j) == QuatElt::scalar(A, 6));
    QuatAlgebra B(make_rat(3, 2), -7);
    auto ij = QuatElt::ij(B);
    // (ij)^2 = -ab and ij has trace zero, so nrd(ij) = ab
    CHECK(ij * ij == QuatElt::scalar(B, -B.a * B.b));
    CHECK(ij.nrd() == B.a * B.b);
    CHECK_THROWS_AS(i + QuatElt::i(B), qt::DomainError);
    CHECK_THROWS_AS(QuatAlgebra(0, 1), qt::DomainError);
}

TEST_CASE("nrd is multiplicative and x * conj(x) = nrd(x)") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> c(-9, 9), d(1, 5);
    QuatAlgebra A(make_rat(-3, 2), 5);
    for (int k = 0; k < 300; ++k) {
        QuatElt x(A, {make_rat(c(rng), d(rng)), make_rat(c(rng), d(rng)), make_rat(c(rng), d(rng)),
                      make_rat(c(rng), d(rng))});
        QuatElt y(A, {make_rat(c(rng), d(rng)), make_rat(c(rng), d(rng)), make_rat(c(rng), d(rng)),
                      make_rat(c(rng), d(rng))});
        CHECK((x * y).nrd() == x.nrd() * y.nrd());
        CHECK(x * x.conj() == QuatElt::scalar(A, x.nrd()));
        CHECK(x + x.conj() == QuatElt::scalar(A, x.trd()));
        CHECK((x * y).conj() == y.conj() * x.conj());
    }
}

TEST_CASE("ramified places") {
    auto r = ramified_places(alg16());
    CHECK(r.finite_primes == std::vector<Integer>{2, 3});
    CHECK_FALSE(r.at_infinity);
    CHECK(discriminant(alg16()) == 6);
    CHECK(discriminant(QuatAlgebra(-3, 6)) == 6);
    CHECK(discriminant(QuatAlgebra(-3, 2)) == 6);
    CHECK(discriminant(QuatAlgebra(-2, 5)) == 10);
    CHECK(discriminant(QuatAlgebra(1, 1)) == 1);
    CHECK(ramified_places(QuatAlgebra(1, 1)).finite_primes.empty());
    CHECK(ramified_places(QuatAlgebra(-1, -1)).at_infinity);
    // indefinite algebras are split at infinity
    for (long a : {-7, -3, -1, 2, 5})
        for (long b : {2, 3, 6, 10}) CHECK_FALSE(ramified_places(QuatAlgebra(a, b)).at_infinity);
}

TEST_CASE("reduced discriminants") {
    CHECK(reference_maximal_16().reduced_discriminant() == 6);
    CHECK(reference_maximal_16().is_maximal());
    auto std16 = QuatOrder::standard(alg16());
    // Gram matrix diag(2, -2, 12, 12): |det| = 576
    CHECK(std16.reduced_discriminant() == standard_gram_sqrt(-1, 6));
    CHECK(std16.reduced_discriminant() == 24);
    CHECK_FALSE(std16.is_maximal());
    CHECK(QuatOrder::standard(QuatAlgebra(-3, 6)).reduced_discriminant() == standard_gram_sqrt(-3, 6));
}

TEST_CASE("order validation") {
    auto A = alg16();
    Rat h(1, 2);
    CHECK_THROWS_AS(QuatOrder(A, {QuatElt::one(A), elt(A, h, h, 0, 0), QuatElt::j(A), QuatElt::ij(A)}),
                    qt::InvariantError);
    CHECK_THROWS_AS(QuatOrder(A, {QuatElt::one(A), QuatElt::i(A), QuatElt::i(A), QuatElt::ij(A)}),
                    qt::InvariantError);
    CHECK_THROWS_AS(QuatOrder::generated_by(A, {elt(A, 0, h, 0, 0)}), qt::InvariantError);
}

TEST_CASE("saturation to maximal orders") {
    auto m16 = saturate_to_maximal(QuatOrder::standard(alg16()));
    CHECK(m16.reduced_discriminant() == 6);
    auto std16 = QuatOrder::standard(alg16());
    for (const auto& e : std16.basis()) CHECK(m16.contains(e));
    auto fix = saturate_to_maximal(reference_maximal_16());
    CHECK(fix.basis() == reference_maximal_16().basis());

    auto m36 = saturate_to_maximal(QuatOrder::standard(QuatAlgebra(-3, 6)));
    CHECK(m36.reduced_discriminant() == 6);
    // no element v/p with v outside pO enlarges a maximal order
    for (long p : {2, 3}) {
        for (long code = 1; code < p * p * p * p; ++code) {
            IntVec4 v;
            long rest = code;
            for (auto& c : v) {
                c = rest % p;
                rest /= p;
            }
            QuatElt x = Rat(1, p) * m36.element(v);
            bool integral = qt::exact::is_integer(x.trd()) && qt::exact::is_integer(x.nrd());
            if (!integral) continue;
            std::vector<QuatElt> gens(m36.basis().begin(), m36.basis().end());
            gens.push_back(x);
            CHECK_THROWS_AS(QuatOrder::generated_by(m36.algebra(), gens), qt::InvariantError);
        }
    }
    auto m25 = saturate_to_maximal(QuatOrder::standard(QuatAlgebra(-2, 5)));
    CHECK(m25.reduced_discriminant() == 10);
}

TEST_CASE("normalizer membership") {
    auto O = reference_maximal_16();
    auto A = O.algebra();
    CHECK(is_in_normalizer(O, QuatElt::j(A)));
    CHECK(is_in_normalizer(O, QuatElt::one(A)));
    CHECK(is_in_normalizer(O, QuatElt::one(A) + QuatElt::i(A)));
    CHECK_FALSE(is_in_normalizer(O, QuatElt::one(A) + QuatElt::j(A)));
    auto t = normalizer_test(O, Rat(4) * QuatElt::j(A));
    CHECK(t.in_normalizer);
    CHECK(t.primitive_nrd == -6);
    CHECK(t.norm_divides_disc);
    t = normalizer_test(O, QuatElt::one(A) + QuatElt::j(A));
    CHECK(t.primitive_nrd == -5);
    CHECK_FALSE(t.norm_divides_disc);
    CHECK_THROWS_AS(is_in_normalizer(O, QuatElt::scalar(A, 0)), qt::DomainError);
}

TEST_CASE("normalizer agrees with the reduced norm criterion") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> c(-2, 2);
    for (const auto& O : {reference_maximal_16(), saturate_to_maximal(QuatOrder::standard(QuatAlgebra(-2, 5)))}) {
        int positives = 0;
        for (int k = 0; k < 200; ++k) {
            IntVec4 v{c(rng), c(rng), c(rng), c(rng)};
            if (v == IntVec4{0, 0, 0, 0}) continue;
            auto t = normalizer_test(O, O.element(v));
            CHECK(t.in_normalizer == t.norm_divides_disc);
            positives += t.in_normalizer;
        }
        CHECK(positives > 10);
    }
}

TEST_CASE("trace zero search") {
    auto O = reference_maximal_16();
    auto A = O.algebra();
    auto r = find_trace_zero(O, -1, 5);
    CHECK(std::find(r.begin(), r.end(), QuatElt::i(A)) != r.end());
    r = find_trace_zero(O, 6, 5);
    CHECK(std::find(r.begin(), r.end(), QuatElt::ij(A)) != r.end());
    r = find_trace_zero(O, -6, 5);
    REQUIRE_FALSE(r.empty());
    for (const auto& x : r) CHECK(x * x == QuatElt::scalar(A, -6));
    // (i + j)^2 = -1 + 6 = 5
    r = find_trace_zero(O, 5, 5);
    CHECK(std::find(r.begin(), r.end(), QuatElt::i(A) + QuatElt::j(A)) != r.end());
    for (long m : {7, 17, -15, 2, 3, -2, -3, 5, 6, -6}) {
        bool found = !find_trace_zero(O, m, 6).empty();
        if (!embeds_locally(m, 6)) CHECK_FALSE(found);
    }
}

TEST_CASE("Atkin-Lehner representatives") {
    auto O = reference_maximal_16();
    auto A = O.algebra();
    auto w = atkin_lehner_group(O, 10);
    REQUIRE(w.size() == 4);
    CHECK(w.at(1) == QuatElt::one(A));
    for (const auto& [m, x] : w) {
        CHECK(abs(x.nrd()) == Rat(m));
        CHECK(O.contains(x));
        CHECK(is_in_normalizer(O, x));
    }
    CHECK(w.at(6).trd() == 0);
    CHECK(w.at(6) * w.at(6) == QuatElt::scalar(A, -w.at(6).nrd()));
    // w_m w_n = g * w_{mn/g^2} * unit, g = gcd(m, n)
    for (const auto& [m, x] : w)
        for (const auto& [n, y] : w) {
            Integer g = qt::exact::gcd(m, n);
            Integer k = m * n / (g * g);
            QuatElt u = Rat(1, 1) / Rat(g) * (x * y * w.at(k).inverse());
            CHECK(O.contains(u));
            CHECK(abs(u.nrd()) == 1);
        }
}

TEST_CASE("order json round trip") {
    auto O = reference_maximal_16();
    auto doc = order_to_json(O);
    CHECK(doc["basis"][1][0] == "1/2");
    auto back = order_from_json(doc);
    CHECK(back.basis() == O.basis());
    CHECK_THROWS_AS(order_from_json(nlohmann::json::object()), qt::IngestError);
}
