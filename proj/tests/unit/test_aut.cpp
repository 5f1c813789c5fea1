#include <random>
#include <set>

#include "doctest.h"
#include "qt/aut/dihedral.hpp"
#include "qt/errors.hpp"

using namespace qt::aut;
using qt::exact::AbelianInvariants;
using qt::quat::IntVec4;
using qt::quat::QuatAlgebra;

namespace {

QuatElt elt(const QuatAlgebra& A, Rat t, Rat x, Rat y, Rat z) { return QuatElt(A, {t, x, y, z}); }

QuatOrder maximal_16() {
    QuatAlgebra A(-1, 6);
    Rat h(1, 2);
    return QuatOrder(A, {QuatElt::one(A), elt(A, h, h, 0, h), elt(A, h, -h, 0, h), elt(A, 0, 0, h, h)});
}

QuatOrder maximal(long a, long b) { return qt::quat::saturate_to_maximal(QuatOrder::standard(QuatAlgebra(a, b))); }

AbelianInvariants inv(std::vector<Integer> d) { return AbelianInvariants{std::move(d)}; }

IntVec4 digits(long code, long n) {
    IntVec4 v;
    for (auto& c : v) {
        c = code % n;
        code /= n;
    }
    return v;
}

bool divisible_in(const QuatOrder& O, const QuatElt& x, long n) {
    for (const auto& c : O.integral_coordinates(x))
        if (!mpz_divisible_ui_p(c.get_mpz_t(), n)) return false;
    return true;
}

// Number of x in O/NO with g^{-1} x g = x for all g, by exact arithmetic.
long count_fixed(const QuatOrder& O, const std::vector<QuatElt>& gens, long n) {
    long count = 0;
    for (long code = 0; code < n * n * n * n; ++code) {
        QuatElt x = O.element(digits(code, n));
        bool fixed = true;
        for (const auto& g : gens)
            if (!divisible_in(O, g.inverse() * x * g - x, n)) {
                fixed = false;
                break;
            }
        count += fixed;
    }
    return count;
}

std::vector<DihedralAction> sample_actions() {
    auto O = maximal_16();
    std::vector<DihedralAction> out;
    out.push_back(build_dihedral_action(O, DihedralKind::D1, {QuatElt::i(O.algebra()), std::nullopt}));
    out.push_back(*find_dihedral_action(O, DihedralKind::D2, -1, 3));
    out.push_back(build_dihedral_action(O, DihedralKind::D4, {QuatElt::i(O.algebra()), QuatElt::j(O.algebra())}));
    auto O3 = maximal(-3, 2);
    out.push_back(*find_dihedral_action(O3, DihedralKind::D3, 2));
    out.push_back(*find_dihedral_action(O3, DihedralKind::D6, 2));
    return out;
}

}  // namespace

TEST_CASE("dihedral actions are validated") {
    auto O = maximal_16();
    auto A = O.algebra();
    auto i = QuatElt::i(A), j = QuatElt::j(A);
    auto d4 = build_dihedral_action(O, DihedralKind::D4, {i, j});
    CHECK(d4.m == 6);
    CHECK(d4.generators[0] == QuatElt::one(A) + i);
    auto d1 = build_dihedral_action(O, DihedralKind::D1, {i, std::nullopt});
    CHECK(d1.m == -1);
    auto d2 = find_dihedral_action(O, DihedralKind::D2, -1, 3);
    REQUIRE(d2.has_value());
    QuatElt k = d2->presentation.x * *d2->presentation.y;
    CHECK(k * k == QuatElt::scalar(A, 3));
    // i and j commute-fail: ij = -ji is required
    CHECK_THROWS_WITH_AS(build_dihedral_action(O, DihedralKind::D2, {i, i}), doctest::Contains("ij = -ji"),
                         qt::DomainError);
    CHECK_THROWS_AS(build_dihedral_action(O, DihedralKind::D1, {QuatElt::one(A), std::nullopt}), qt::DomainError);
    // 5 does not divide disc = 6
    CHECK_THROWS_WITH_AS(build_dihedral_action(O, DihedralKind::D1, {i + j, std::nullopt}),
                         doctest::Contains("m | disc"), qt::DomainError);
    CHECK(parse_kind("D6") == DihedralKind::D6);
    CHECK_THROWS_AS(parse_kind("D5"), qt::ParseError);
    for (const auto& a : sample_actions()) {
        auto back = action_from_json(action_to_json(a));
        CHECK(back.kind == a.kind);
        CHECK(back.generators == a.generators);
    }
}

TEST_CASE("fixed points lie in the theorem's option sets") {
    for (const auto& a : sample_actions()) {
        for (long n : {2, 3, 5, 7, 11}) {
            auto fixed = residue_fixed_subgroup(a, n);
            auto options = theorem_options(a.kind, n);
            INFO(to_string(a.kind), " N=", n, " fixed=", qt::exact::to_string(fixed));
            CHECK(std::find(options.begin(), options.end(), fixed) != options.end());
        }
    }
    auto d4 = sample_actions()[2];
    CHECK(residue_fixed_subgroup(d4, 2) == inv({2, 2}));
    CHECK(residue_fixed_subgroup(d4.order, {d4.generators[0]}, 2) == inv({2, 2}));
    CHECK(residue_fixed_subgroup(sample_actions()[0], 2) == inv({2, 2, 2}));
    CHECK(residue_fixed_subgroup(sample_actions()[1], 5) == inv({5}));
    CHECK(theorem_options(DihedralKind::D2, 4).empty());
}

TEST_CASE("Smith fixed points agree with enumeration") {
    for (const auto& a : sample_actions()) {
        for (long n : {2, 3, 4}) {
            auto smith = residue_fixed_subgroup(a, n);
            CHECK(residue_fixed_subgroup_enumerated(a.order, a.generators, n) == smith);
            CHECK(smith.order() == count_fixed(a.order, a.generators, n));
        }
        CHECK(residue_fixed_subgroup(a, 5).order() == count_fixed(a.order, a.generators, 5));
        CHECK(residue_fixed_subgroup(a, 6).order() == count_fixed(a.order, a.generators, 6));
    }
}

TEST_CASE("involutions modulo 2") {
    auto O = maximal_16();
    auto A = O.algebra();
    auto r = classify_involution_mod2(O, QuatElt::i(A));
    CHECK(r.fixed == inv({2, 2, 2}));
    CHECK(r.criterion);
    CHECK(r.arithmetic_predicate);
    r = classify_involution_mod2(O, QuatElt::ij(A));
    CHECK(r.fixed == inv({2, 2}));
    CHECK_FALSE(r.criterion);
    CHECK_FALSE(r.arithmetic_predicate);
    CHECK_THROWS_AS(classify_involution_mod2(O, QuatElt::i(A) + QuatElt::j(A)), qt::DomainError);

    auto O10 = maximal(-2, 5);
    r = classify_involution_mod2(O10, QuatElt::j(O10.algebra()));
    CHECK_FALSE(r.criterion);
    CHECK_FALSE(r.arithmetic_predicate);

    // criterion matches 2 | disc and m = 3 mod 4 on every qualifying b
    for (const auto& ord : {maximal_16(), maximal(-3, 6), O10}) {
        Integer disc = qt::quat::discriminant(ord.algebra());
        int seen = 0;
        for (const auto& m : qt::exact::divisors(disc))
            for (Integer s : {Integer(m), Integer(-m)}) {
                if (s == 1) continue;
                for (const auto& b : qt::quat::find_trace_zero(ord, s, 4)) {
                    if (!qt::quat::is_in_normalizer(ord, b)) continue;
                    auto c = classify_involution_mod2(ord, b);
                    CHECK(c.criterion == c.arithmetic_predicate);
                    CHECK(c.fixed.order() == count_fixed(ord, {b}, 2));
                    ++seen;
                }
            }
        CHECK(seen > 0);
    }
}

TEST_CASE("no anticommuting lift modulo 4") {
    for (const auto& O : {maximal_16(), maximal(-3, 6), maximal(-2, 5)}) {
        Integer disc = qt::quat::discriminant(O.algebra());
        int qualifying = 0;
        for (const auto& m : qt::exact::divisors(disc))
            for (Integer s : {Integer(m), Integer(-m)}) {
                if (s == 1) continue;
                for (const auto& b : qt::quat::find_trace_zero(O, s, 10)) {
                    if (!qt::quat::is_in_normalizer(O, b) || !classify_involution_mod2(O, b).criterion) continue;
                    ++qualifying;
                    CHECK(search_mod4_anticommutator(O, b).empty());
                    // sanity mode against exact arithmetic over all 256 residues
                    auto hits = search_mod4_anticommutator(O, b, true);
                    std::size_t expected = 0;
                    QuatElt minus_one = QuatElt::scalar(O.algebra(), -1);
                    for (long code = 0; code < 256; ++code) {
                        QuatElt x = O.element(digits(code, 4));
                        expected += divisible_in(O, b.inverse() * x * b * x - minus_one, 4);
                    }
                    CHECK(hits.size() == expected);
                }
            }
        CHECK(qualifying > 0);
    }
    auto O = maximal_16();
    CHECK_THROWS_AS(search_mod4_anticommutator(O, QuatElt::ij(O.algebra())), qt::DomainError);
}

TEST_CASE("C2 x C2 modulo 2") {
    auto d2 = sample_actions()[1];
    auto r = classify_c2c2_mod2(d2);
    CHECK(r.fixed == inv({2, 2, 2}));
    CHECK(r.criterion);
    CHECK(r.arithmetic_predicate);

    auto O = maximal_16();
    std::optional<DihedralAction> even;
    for (long n : {-1, 3, -3, 6, -6, -2})
        if (!even) even = find_dihedral_action(O, DihedralKind::D2, 2, n, 6);
    REQUIRE(even.has_value());
    r = classify_c2c2_mod2(*even);
    CHECK_FALSE(r.criterion);
    CHECK_FALSE(r.arithmetic_predicate);

    auto O15 = maximal(-3, 5);
    CHECK(qt::quat::discriminant(O15.algebra()) == 15);
    auto odd = find_dihedral_action(O15, DihedralKind::D2, -3, 5, 6);
    REQUIRE(odd.has_value());
    r = classify_c2c2_mod2(*odd);
    CHECK_FALSE(r.criterion);
    CHECK(r.fixed.order() == count_fixed(O15, odd->generators, 2));
    CHECK_THROWS_AS(classify_c2c2_mod2(sample_actions()[0]), qt::DomainError);
}

TEST_CASE("left submodules of O / ell O") {
    auto O = maximal_16();
    auto five = submodule_lattice_mod_ell(O, 5);
    REQUIRE(five.size() == 8);
    CHECK(five.front().dimension() == 0);
    CHECK(five.back().dimension() == 4);
    for (std::size_t k = 1; k + 1 < five.size(); ++k) CHECK(five[k].order() == 25);

    auto two = submodule_lattice_mod_ell(O, 2);
    REQUIRE(two.size() == 3);
    CHECK(two[1].order() == 4);

    // every listed submodule is closed under left multiplication
    ResidueRing ring(O, 5);
    for (const auto& s : five)
        for (const auto& v : s.basis)
            for (long k = 0; k < 4; ++k) {
                Residue e{0, 0, 0, 0};
                e[k] = 1;
                auto rows = s.basis;
                rows.push_back(ring.mul(e, v));
                CHECK(span_mod_ell(rows, 5).dimension() == s.dimension());
            }

    ResidueRing r3(O, 3);
    CHECK(generated_by(r3, r3.zero()).dimension() == 0);
    for (long code = 0; code < r3.size(); ++code) {
        auto d = generated_by(r3, r3.from_code(code)).dimension();
        CHECK((d == 0 || d == 2 || d == 4));
    }
}

TEST_CASE("three-dimensional subspaces contain a generator") {
    auto O = maximal_16();
    std::mt19937 rng(11);
    int done = 0;
    for (long ell : {2, 3, 5}) {
        std::uniform_int_distribution<long> c(0, ell - 1);
        int count = 0;
        while (count < 34) {
            std::vector<Residue> v(3);
            for (auto& r : v) r = {c(rng), c(rng), c(rng), c(rng)};
            if (span_mod_ell(v, ell).dimension() != 3) continue;
            ++count;
            Residue x = three_dim_generator_check(O, ell, v);
            auto with = v;
            with.push_back(x);
            CHECK(span_mod_ell(with, ell).dimension() == 3);
            // generators of the free rank-one module are exactly the units
            QuatElt lift = O.element({x[0], x[1], x[2], x[3]});
            CHECK_FALSE(mpz_divisible_ui_p(lift.nrd().get_num_mpz_t(), ell));
        }
        done += count;
    }
    CHECK(done >= 100);
    ResidueRing r3(O, 3);
    std::vector<Residue> v{r3.one(), {0, 1, 0, 0}, {0, 0, 1, 0}};
    CHECK(three_dim_generator_check(O, 3, v) == r3.one());
    CHECK_THROWS_AS(three_dim_generator_check(O, 3, {r3.one(), r3.one(), r3.zero()}), qt::DomainError);
}

TEST_CASE("enhanced group law") {
    auto O = maximal_16();
    auto A = O.algebra();
    ResidueRing ring(O, 4);
    std::vector<QuatElt> gammas{QuatElt::one(A), QuatElt::i(A), QuatElt::one(A) + QuatElt::i(A), QuatElt::j(A),
                                O.basis()[3], (QuatElt::one(A) + QuatElt::i(A)) * QuatElt::j(A)};
    std::vector<Residue> units;
    for (long code = 0; code < ring.size(); ++code)
        if (ring.is_unit(ring.from_code(code))) units.push_back(ring.from_code(code));
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pg(0, gammas.size() - 1), pu(0, units.size() - 1);
    auto lift = [&](const Residue& x) { return O.element({x[0], x[1], x[2], x[3]}); };
    auto id = enhanced_identity(ring);
    for (int t = 0; t < 500; ++t) {
        EnhancedElement a{gammas[pg(rng)], units[pu(rng)]}, b{gammas[pg(rng)], units[pu(rng)]},
            c{gammas[pg(rng)], units[pu(rng)]};
        auto left = enhanced_mul(ring, enhanced_mul(ring, a, b), c);
        auto right = enhanced_mul(ring, a, enhanced_mul(ring, b, c));
        CHECK(enhanced_equal(ring, left, right));
        // direct evaluation of b^{-1} x_a b x_b
        auto ab = enhanced_mul(ring, a, b);
        CHECK(ab.x == ring.reduce(b.gamma.inverse() * lift(a.x) * b.gamma * lift(b.x)));
        CHECK(enhanced_equal(ring, enhanced_mul(ring, id, a), a));
        CHECK(enhanced_equal(ring, enhanced_mul(ring, a, id), a));
    }
    Residue x = units[1], y = units[2];
    CHECK(enhanced_mul(ring, {QuatElt::one(A), x}, {QuatElt::one(A), y}).x == ring.mul(x, y));
    auto g = enhanced_mul(ring, {QuatElt::j(A), ring.one()}, {QuatElt::one(A), x});
    CHECK(enhanced_equal(ring, g, {QuatElt::j(A), x}));
    CHECK_THROWS_AS(enhanced_mul(ring, {QuatElt::one(A), ring.zero()}, id), qt::InvariantError);
}

TEST_CASE("polarization arithmetic") {
    auto O = maximal_16();
    auto A = O.algebra();
    auto nu = qt::quat::find_trace_zero(O, -6, 4);
    REQUIRE_FALSE(nu.empty());
    auto r = polarization_analysis(O, nu.front(), true);
    CHECK(r.degree_class == 1);
    CHECK(r.subfield == -6);
    CHECK(r.jacobian_consistent);
    r = polarization_analysis(O, QuatElt::i(A), false);
    CHECK(r.degree_class == 6);
    CHECK(r.subfield == -1);
    CHECK(r.jacobian_consistent);
    CHECK_FALSE(r.prop_c2c2_applicable);
    CHECK_THROWS_AS(polarization_analysis(O, QuatElt::j(A), false), qt::DomainError);
    CHECK_THROWS_AS(polarization_analysis(O, QuatElt::one(A), false), qt::DomainError);

    auto d2 = sample_actions()[1];
    r = polarization_analysis(O, QuatElt::i(A), false, &d2);
    CHECK(r.prop_c2c2_applicable);
    CHECK(r.prop_c2c2_holds);
}

TEST_CASE("distinguished quadratic subrings") {
    auto acts = sample_actions();
    auto d4 = distinguished_subring(acts[2]);
    CHECK(d4.field == -1);
    CHECK(d4.discriminant == -4);
    auto d3 = distinguished_subring(acts[3]);
    CHECK(d3.field == -3);
    CHECK(d3.discriminant == -3);
    CHECK(d3.conductor == 1);
    CHECK(distinguished_subring(acts[4]).discriminant == -3);
    auto d2 = distinguished_subring(acts[1]);
    CHECK(d2.field < 0);

    auto O = maximal_16();
    auto real = distinguished_subring(build_dihedral_action(O, DihedralKind::D1, {QuatElt::j(O.algebra()), std::nullopt}));
    CHECK(real.field == 6);
    CHECK(real.discriminant == 24);
    for (const auto& a : acts) {
        auto s = distinguished_subring(a);
        CHECK(s.maximal_away_from_2);
        CHECK(s.unramified_away_from_6disc);
    }
    // Z[(1 + sqrt 5)/2] inside O: i + j has square 5, so check the index search
    auto s5 = quadratic_subring(O, QuatElt::i(O.algebra()) + QuatElt::j(O.algebra()));
    CHECK(s5.field == 5);
    CHECK((s5.discriminant == 5 || s5.discriminant == 20));
}
