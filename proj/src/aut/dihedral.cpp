#include "qt/aut/dihedral.hpp"

#include <algorithm>

#include "qt/errors.hpp"

namespace qt::aut {

using exact::AbelianInvariants;
using exact::IntMatrix;

std::string to_string(DihedralKind kind) {
    switch (kind) {
        case DihedralKind::D1: return "D1";
        case DihedralKind::D2: return "D2";
        case DihedralKind::D3: return "D3";
        case DihedralKind::D4: return "D4";
        case DihedralKind::D6: return "D6";
    }
    return "?";
}

DihedralKind parse_kind(const std::string& text) {
    for (auto k : {DihedralKind::D1, DihedralKind::D2, DihedralKind::D3, DihedralKind::D4, DihedralKind::D6})
        if (to_string(k) == text) return k;
    throw ParseError("unknown dihedral kind '" + text + "'", 0);
}

namespace {

// x^2 as an integer, or nullopt if x^2 is not in Z.
std::optional<Integer> integral_square(const QuatElt& x) {
    QuatElt s = x * x;
    if (!s.is_scalar() || !exact::is_integer(s[0])) return std::nullopt;
    return s[0].get_num();
}

bool divides_disc(const Integer& m, const Integer& disc) {
    return m != 0 && mpz_divisible_p(disc.get_mpz_t(), Integer(abs(m)).get_mpz_t());
}

void require(bool ok, const std::string& relation) {
    if (!ok) throw DomainError("dihedral relation violated: " + relation);
}

Integer square_of(const QuatElt& x, const std::string& name) {
    auto s = integral_square(x);
    require(s.has_value(), name + "^2 in Z");
    return *s;
}

}  // namespace

DihedralAction build_dihedral_action(const QuatOrder& order, DihedralKind kind, const Presentation& p) {
    const auto& A = order.algebra();
    const Integer disc = quat::discriminant(A);
    require(order.contains(p.x), "x in O");
    if (kind != DihedralKind::D1) {
        require(p.y.has_value(), "second presentation element present");
        require(order.contains(*p.y), "y in O");
    }
    DihedralAction act{kind, order, p, {}, 0, 0};
    const QuatElt one = QuatElt::one(A);
    switch (kind) {
        case DihedralKind::D1: {
            act.m = square_of(p.x, "b");
            require(act.m != 1, "m != 1");
            require(!p.x.is_scalar(), "b not central");
            require(divides_disc(act.m, disc), "m | disc(B)");
            act.generators = {p.x};
            break;
        }
        case DihedralKind::D2: {
            act.m = square_of(p.x, "i");
            act.n = square_of(*p.y, "j");
            require(p.x * *p.y == -(*p.y * p.x), "ij = -ji");
            require(divides_disc(act.m, disc), "m | disc(B)");
            require(divides_disc(act.n, disc), "n | disc(B)");
            act.generators = {p.x, *p.y};
            break;
        }
        case DihedralKind::D4: {
            require(p.x * p.x == QuatElt::scalar(A, -1), "i^2 = -1");
            act.m = square_of(*p.y, "j");
            require(p.x * *p.y == -(*p.y * p.x), "ij = -ji");
            require(divides_disc(act.m, disc), "m | disc(B)");
            act.generators = {one + p.x, *p.y};
            break;
        }
        case DihedralKind::D3:
        case DihedralKind::D6: {
            require((p.x * p.x + p.x + one).is_zero(), "omega^2 + omega + 1 = 0");
            act.m = square_of(*p.y, "j");
            require(p.x * *p.y == *p.y * (-one - p.x), "omega j = j(-1 - omega)");
            require(divides_disc(act.m, disc), "m | disc(B)");
            act.generators = {kind == DihedralKind::D3 ? one + p.x : one - p.x, *p.y};
            break;
        }
    }
    for (const auto& g : act.generators) require(quat::is_in_normalizer(order, g), "generator normalizes O");
    return act;
}

std::optional<DihedralAction> find_dihedral_action(const QuatOrder& order, DihedralKind kind, const Integer& m,
                                                   const Integer& n, int height) {
    const auto& A = order.algebra();
    std::vector<int> heights;
    for (int h = 1; h < height; h *= 2) heights.push_back(h);
    heights.push_back(height);
    for (int h : heights) {
        auto normalizing = [&](const Integer& s) {
            std::vector<QuatElt> out;
            for (auto& x : quat::find_trace_zero(order, s, h))
                if (quat::is_in_normalizer(order, x)) out.push_back(std::move(x));
            return out;
        };
        if (kind == DihedralKind::D1) {
            auto xs = normalizing(m);
            if (!xs.empty()) return build_dihedral_action(order, kind, {xs.front(), std::nullopt});
            continue;
        }
        std::vector<QuatElt> xs;
        Integer second = m;
        if (kind == DihedralKind::D2) {
            xs = normalizing(m);
            second = n;
        } else if (kind == DihedralKind::D4) {
            xs = normalizing(-1);
        } else {
            // omega = (theta - 1)/2 with theta^2 = -3
            for (const auto& t : quat::find_trace_zero(order, -3, h)) {
                QuatElt w = Rat(1, 2) * (t - QuatElt::one(A));
                if (order.contains(w)) xs.push_back(w);
            }
        }
        if (xs.empty()) continue;
        auto ys = normalizing(second);
        for (const auto& x : xs)
            for (const auto& y : ys) {
                try {
                    return build_dihedral_action(order, kind, {x, y});
                } catch (const DomainError&) {
                }
            }
    }
    return std::nullopt;
}

AbelianInvariants residue_fixed_subgroup(const QuatOrder& order, const std::vector<QuatElt>& generators,
                                         long modulus) {
    // kernel of c -> c * [M_g - I | ...] modulo N is sum of Z/gcd(d_i, N)
    IntMatrix a(4);
    for (const auto& g : generators) {
        IntMatrix mg = conjugation_matrix(order, g);
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) a[i].push_back(mg[i][k] - (i == k ? 1 : 0));
    }
    if (generators.empty())
        for (auto& row : a) row.assign(4, 0);
    auto diag = exact::smith_diagonal(a);
    std::vector<Integer> cyclic;
    for (const auto& d : diag) cyclic.push_back(exact::gcd(d, Integer(modulus)));
    return exact::abelian_from_cyclic(cyclic);
}

AbelianInvariants residue_fixed_subgroup(const DihedralAction& action, long modulus) {
    return residue_fixed_subgroup(action.order, action.generators, modulus);
}

AbelianInvariants residue_fixed_subgroup_enumerated(const QuatOrder& order, const std::vector<QuatElt>& generators,
                                                    long modulus) {
    auto [p, e] = exact::as_prime_power(modulus);
    if (modulus > 4 || p == 0) throw DomainError("enumeration is only used for N in {2, 3, 4}");
    const long pl = p.get_si();
    ResidueRing ring(order, modulus);
    std::vector<IntMatrix> mats;
    for (const auto& g : generators) mats.push_back(conjugation_matrix(order, g));
    // counts[j] = #H[p^j]
    std::vector<long> counts(e + 1, 0);
    for (long code = 0; code < ring.size(); ++code) {
        Residue x = ring.from_code(code);
        bool fixed = true;
        for (const auto& m : mats)
            if (apply(m, x, modulus) != x) {
                fixed = false;
                break;
            }
        if (!fixed) continue;
        long pj = 1;
        for (unsigned j = 0; j <= e; ++j, pj *= pl)
            if (ring.scale(pj, x) == ring.zero()) ++counts[j];
    }
    std::vector<Integer> cyclic;
    // cyclic factors of order >= p^j: log_p(counts[j] / counts[j-1])
    std::vector<long> at_least(e + 1, 0);
    for (unsigned j = 1; j <= e; ++j) {
        long ratio = counts[j] / counts[j - 1];
        long r = 0;
        while (ratio > 1) {
            ratio /= pl;
            ++r;
        }
        at_least[j] = r;
    }
    for (unsigned j = 1; j <= e; ++j) {
        long exact_j = at_least[j] - (j < e ? at_least[j + 1] : 0);
        for (long k = 0; k < exact_j; ++k) cyclic.push_back(exact::pow(p, j));
    }
    return exact::abelian_from_cyclic(cyclic);
}

std::vector<AbelianInvariants> theorem_options(DihedralKind kind, long modulus) {
    auto rep = [](long n, int k) {
        AbelianInvariants g;
        g.divisors.assign(k, Integer(n));
        return g;
    };
    if (std::gcd(modulus, 6L) == 1) {
        return {rep(modulus, kind == DihedralKind::D1 ? 2 : 1)};
    }
    if (modulus == 3) {
        switch (kind) {
            case DihedralKind::D1: return {rep(3, 2)};
            case DihedralKind::D3: return {rep(3, 1), rep(3, 2)};
            default: return {rep(3, 1)};
        }
    }
    if (modulus == 2) {
        switch (kind) {
            case DihedralKind::D1: return {rep(2, 2), rep(2, 3), rep(2, 4)};
            case DihedralKind::D2: return {rep(2, 2), rep(2, 3)};
            case DihedralKind::D4: return {rep(2, 2)};
            default: return {rep(2, 1)};
        }
    }
    return {};
}

InvolutionMod2 classify_involution_mod2(const QuatOrder& order, const QuatElt& b) {
    const Integer disc = quat::discriminant(order.algebra());
    if (!order.contains(b) || !quat::is_in_normalizer(order, b))
        throw DomainError("b must lie in O and normalize O");
    auto m = integral_square(b);
    if (!m || *m == 1 || b.is_scalar() || !divides_disc(*m, disc))
        throw DomainError("b^2 must be an integer m != 1 dividing disc(B)");
    InvolutionMod2 out;
    out.fixed = residue_fixed_subgroup(order, {b}, 2);
    ResidueRing ring(order, 2);
    Residue bb = ring.reduce(b);
    long count = 0;
    for (long code = 0; code < ring.size(); ++code) {
        Residue x = ring.from_code(code);
        if (ring.mul(bb, x) == ring.mul(x, bb)) ++count;
    }
    std::vector<Integer> cyclic;
    for (long c = count; c > 1; c /= 2) cyclic.push_back(2);
    out.centralizer = exact::abelian_from_cyclic(cyclic);
    out.criterion = out.fixed == AbelianInvariants{{2, 2, 2}};
    out.arithmetic_predicate = mpz_even_p(disc.get_mpz_t()) && exact::mod(*m, 4) == 3;
    return out;
}

std::vector<Residue> search_mod4_anticommutator(const QuatOrder& order, const QuatElt& b, bool sanity) {
    if (!sanity && !classify_involution_mod2(order, b).criterion)
        throw DomainError("b does not have (Z/2)^3 fixed points modulo 2");
    ResidueRing ring(order, 4);
    IntMatrix conj = conjugation_matrix(order, b);
    const Residue minus_one = ring.neg(ring.one());
    std::vector<Residue> hits;
    for (long code = 0; code < ring.size(); ++code) {
        Residue x = ring.from_code(code);
        if (!sanity) {
            // x = 1 mod 2O
            Residue d = ring.add(x, minus_one);
            if (d[0] % 2 || d[1] % 2 || d[2] % 2 || d[3] % 2) continue;
        }
        if (ring.mul(apply(conj, x, 4), x) == minus_one) hits.push_back(x);
    }
    return hits;
}

C2C2Mod2 classify_c2c2_mod2(const DihedralAction& action) {
    if (action.kind != DihedralKind::D2) throw DomainError("C2 x C2 classification needs a D2 action");
    const Integer disc = quat::discriminant(action.order.algebra());
    C2C2Mod2 out;
    out.fixed = residue_fixed_subgroup(action, 2);
    out.criterion = out.fixed == AbelianInvariants{{2, 2, 2}};
    out.arithmetic_predicate =
        mpz_even_p(disc.get_mpz_t()) && exact::mod(action.m, 4) == 3 && exact::mod(action.n, 4) == 3;
    return out;
}

PolarizationReport polarization_analysis(const QuatOrder& order, const QuatElt& mu, bool jacobian_mode,
                                         const DihedralAction* c2c2) {
    const Integer disc = quat::discriminant(order.algebra());
    if (mu.trd() != 0 || mu.nrd() <= 0) throw DomainError("mu needs trd(mu) = 0 and mu^2 < 0");
    PolarizationReport r;
    r.degree_class = exact::rational_square_class(Rat(disc) * mu.nrd()).squarefree;
    r.subfield = exact::rational_square_class(-mu.nrd()).squarefree;
    Integer target = exact::rational_square_class(Rat(-disc)).squarefree;
    r.jacobian_consistent = (r.degree_class == 1) == (r.subfield == target);
    if (jacobian_mode && !r.jacobian_consistent)
        throw InvariantError("principal polarization does not match Q(sqrt(-disc))");
    if (c2c2 != nullptr && classify_c2c2_mod2(*c2c2).criterion) {
        r.prop_c2c2_applicable = true;
        r.prop_c2c2_holds = mpz_even_p(r.degree_class.get_mpz_t()) != 0;
    }
    return r;
}

QuadraticRing quadratic_subring(const QuatOrder& order, const QuatElt& x) {
    const auto& A = order.algebra();
    auto s_opt = integral_square(x);
    if (x.trd() != 0 || !s_opt || x.is_scalar() || !order.contains(x))
        throw DomainError("quadratic subring needs a trace-zero x in O with x^2 in Z");
    const Integer s = *s_opt;
    const Integer s0 = exact::rational_square_class(Rat(s)).squarefree;
    const Integer k = exact::floor_sqrt(s / s0);
    Integer denom = 1;
    for (Integer d = 2 * k; d >= 2 && denom == 1; --d) {
        for (Integer u = 0; u < d; ++u) {
            if (order.contains(Rat(1) / Rat(d) * (QuatElt::scalar(A, Rat(u)) + x))) {
                denom = d;
                break;
            }
        }
    }
    QuadraticRing r;
    r.generator_square = s;
    r.field = s0;
    r.discriminant = 4 * s / (denom * denom);
    const Integer disc_k = exact::mod(s0, 4) == 1 ? s0 : 4 * s0;
    r.conductor = exact::floor_sqrt(r.discriminant / disc_k);
    Integer f = r.conductor;
    while (mpz_even_p(f.get_mpz_t())) f /= 2;
    r.maximal_away_from_2 = f == 1;
    const Integer bound = 6 * quat::discriminant(A);
    r.unramified_away_from_6disc = true;
    for (const auto& p : exact::prime_divisors(disc_k))
        if (!mpz_divisible_p(bound.get_mpz_t(), p.get_mpz_t())) r.unramified_away_from_6disc = false;
    return r;
}

QuadraticRing distinguished_subring(const DihedralAction& action) {
    const auto& O = action.order;
    const auto& A = O.algebra();
    switch (action.kind) {
        case DihedralKind::D1: return quadratic_subring(O, action.presentation.x);
        case DihedralKind::D4: return quadratic_subring(O, action.presentation.x);
        case DihedralKind::D3:
        case DihedralKind::D6: {
            QuatElt theta = Rat(2) * action.presentation.x + QuatElt::one(A);
            return quadratic_subring(O, theta);
        }
        case DihedralKind::D2: {
            const QuatElt& i = action.presentation.x;
            const QuatElt& j = *action.presentation.y;
            const Integer disc = quat::discriminant(A);
            std::vector<QuatElt> imaginary;
            for (const auto& e : {i, j, i * j})
                if (*integral_square(e) < 0) imaginary.push_back(e);
            if (imaginary.empty()) throw DomainError("D2 action without an imaginary stable subfield");
            // prefer Q(sqrt(-m)) with m >= 2 dividing disc(B)
            for (const auto& e : imaginary) {
                Integer s = *integral_square(e);
                if (s <= -2 && divides_disc(s, disc)) return quadratic_subring(O, e);
            }
            return quadratic_subring(O, imaginary.front());
        }
    }
    throw DomainError("unknown dihedral kind");
}

namespace {

nlohmann::json elt_json(const QuatElt& x) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& c : x.coords()) row.push_back(exact::to_string(c));
    return row;
}

QuatElt elt_from_json(const quat::QuatAlgebra& A, const nlohmann::json& row) {
    if (!row.is_array() || row.size() != 4) throw IngestError("presentation: expected 4 coordinates");
    std::array<Rat, 4> c;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!row[k].is_string()) throw IngestError("presentation: coordinates must be rational strings");
        c[k] = exact::parse_rat(row[k].get<std::string>());
    }
    return QuatElt(A, c);
}

}  // namespace

nlohmann::json action_to_json(const DihedralAction& action) {
    nlohmann::json doc;
    doc["kind"] = to_string(action.kind);
    doc["order"] = quat::order_to_json(action.order);
    doc["generators"] = nlohmann::json::array();
    for (const auto& g : action.generators) doc["generators"].push_back(elt_json(g));
    doc["presentation"] = nlohmann::json::array({elt_json(action.presentation.x)});
    if (action.presentation.y) doc["presentation"].push_back(elt_json(*action.presentation.y));
    doc["params"] = {{"m", action.m.get_str()}};
    if (action.kind == DihedralKind::D2) doc["params"]["n"] = action.n.get_str();
    return doc;
}

DihedralAction action_from_json(const nlohmann::json& doc) {
    if (!doc.contains("kind") || !doc["kind"].is_string()) throw IngestError("kind: missing");
    if (!doc.contains("order")) throw IngestError("order: missing");
    if (!doc.contains("presentation") || !doc["presentation"].is_array() || doc["presentation"].empty())
        throw IngestError("presentation: missing");
    QuatOrder order = quat::order_from_json(doc["order"]);
    Presentation p{elt_from_json(order.algebra(), doc["presentation"][0]), std::nullopt};
    if (doc["presentation"].size() > 1) p.y = elt_from_json(order.algebra(), doc["presentation"][1]);
    return build_dihedral_action(order, parse_kind(doc["kind"].get<std::string>()), p);
}

}  // namespace qt::aut
