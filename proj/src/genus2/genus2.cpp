#include "qt/genus2/genus2.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "qt/errors.hpp"
#include "qt/quat/algebra.hpp"

namespace qt::genus2 {

namespace modp = exact::modp;
using modp::Poly;

namespace {

const IntPoly kJNum({0, 0, 0, 0, -64, 0, 0, 0, 256, 0, 0, 0, -384, 0, 0, 0, 256, 0, 0, 0, -64});
const IntPoly kJDen({1, 0, 0, 0, 42, 0, 0, 0, 591, 0, 0, 0, 2828, 0, 0, 0, 591, 0, 0, 0, 42, 0, 0, 0, 1});

void check_j(const Rat& j) {
    if (j == 0) throw DomainError("singular parameter: j = 0");
    if (27 * j + 16 == 0) throw DomainError("singular parameter: 27j + 16 = 0");
}

Integer inverse(const Integer& a, const Integer& p) {
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0)
        throw DomainError(a.get_str() + " is not invertible mod " + p.get_str());
    return r;
}

Integer powm(const Integer& a, const Integer& e, const Integer& p) {
    Integer r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
}

// Tonelli-Shanks; nullopt for non-residues.
std::optional<Integer> sqrt_mod(const Integer& a0, const Integer& p) {
    Integer a = exact::mod(a0, p);
    if (a == 0) return Integer(0);
    if (exact::kronecker_symbol(a, p) != 1) return std::nullopt;
    Integer q = p - 1;
    unsigned s = 0;
    while (mpz_even_p(q.get_mpz_t())) {
        q >>= 1;
        ++s;
    }
    Integer z = 2;
    while (exact::kronecker_symbol(z, p) != -1) ++z;
    Integer c = powm(z, q, p), x = powm(a, (q + 1) / 2, p), t = powm(a, q, p);
    while (t != 1) {
        unsigned i = 0;
        for (Integer t2 = t; t2 != 1; t2 = t2 * t2 % p) ++i;
        Integer b = c;
        for (unsigned k = 0; k + i + 1 < s; ++k) b = b * b % p;
        x = x * b % p;
        c = b * b % p;
        t = t * c % p;
        s = i;
    }
    return x;
}

Integer eval_mod(const Poly& f, const Integer& x, const Integer& p) {
    Integer r = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = (r * x + *it) % p;
    return exact::mod(r, p);
}

// F(X) = lead^4 * G(X / lead) with G monic of degree 5.
Poly monic_quintic(const Poly& g, const Integer& p) {
    Integer c = g.back(), ci = inverse(c, p), scale = powm(c, 4, p);
    Poly out(6);
    for (std::size_t k = 0; k < 6; ++k) {
        out[k] = exact::mod(scale * g[k], p);
        scale = scale * ci % p;
    }
    return modp::reduce(out, p);
}

// Small prime-field arithmetic for point counting.
struct SmallField {
    long p;
    long nonresidue;
    std::vector<signed char> chi;

    explicit SmallField(long p_) : p(p_), nonresidue(0), chi(p_, -1) {
        chi[0] = 0;
        for (long x = 1; x < p; ++x) chi[x * x % p] = 1;
        for (long x = 2; x < p && !nonresidue; ++x)
            if (chi[x] == -1) nonresidue = x;
    }
};

void check_good(const GenusTwoCurve& c, const Integer& p) {
    if (!good_prime(c, p)) throw DomainError("p = " + p.get_str() + " is not a good odd prime for the model");
}

const unsigned kMaxRoots = 6;

unsigned fixed_classes(const std::vector<int>& perm) {
    unsigned n = perm.size(), full = (1U << n) - 1, fixed = 0;
    for (unsigned s = 0; s <= full; ++s) {
        if (__builtin_popcount(s) % 2) continue;
        unsigned image = 0;
        for (unsigned k = 0; k < n; ++k)
            if (s >> k & 1) image |= 1U << perm[k];
        if (image == s || image == (full ^ s)) ++fixed;
    }
    return fixed / 2;
}

std::vector<unsigned> with_infinity(std::vector<unsigned> degrees) {
    unsigned total = 0;
    for (unsigned d : degrees) {
        if (d == 0) throw DomainError("factor degrees must be positive");
        total += d;
    }
    if (total == 5) degrees.push_back(1);
    else if (total != kMaxRoots) throw DomainError("factor degrees must sum to 5 or 6");
    return degrees;
}

Integer two_part(Integer n) {
    Integer r = 1;
    while (n != 0 && mpz_even_p(n.get_mpz_t())) {
        n >>= 1;
        r <<= 1;
    }
    return r;
}

}  // namespace

Rat family_j(const Rat& t) {
    Rat den = kJDen.eval(t);
    if (den == 0) throw DomainError("singular parameter: denominator of j vanishes");
    Rat j = kJNum.eval(t) / den;
    check_j(j);
    return j;
}

IgusaPoint family_igusa(const Rat& t) {
    Rat j = family_j(t);
    IgusaPoint pt;
    pt.J2 = 12 * (j + 1);
    pt.J4 = 6 * (j * j + j + 1);
    pt.J6 = 4 * (j * j * j - 2 * j * j + 1);
    pt.J8 = (pt.J2 * pt.J6 - pt.J4 * pt.J4) / 4;
    pt.J10 = j * j * j;
    if (pt.J10 == 0) throw DomainError("singular parameter: J10 = 0");
    if (4 * pt.J8 != pt.J2 * pt.J6 - pt.J4 * pt.J4) throw InvariantError("J8 identity fails");
    return pt;
}

ModelChecks model_checks_for_j(const Rat& j) {
    check_j(j);
    ModelChecks m;
    m.field_of_moduli_ok = exact::is_rational_square(Rat(-27) - Rat(16) / j);
    m.mestre_splits = quat::discriminant(quat::QuatAlgebra(-6 * j, -2 * (27 * j + 16))) == 1;
    return m;
}

ModelChecks rational_model_checks(const Rat& t) { return model_checks_for_j(family_j(t)); }

GenusTwoCurve::GenusTwoCurve(IntPoly f) : f_(std::move(f)) {
    if (f_.degree() != 5 && f_.degree() != 6) throw DomainError("genus-2 model needs deg f in {5, 6}");
    disc_ = exact::discriminant(f_);
    if (disc_ == 0) throw DomainError("f has a repeated root");
}

GenusTwoCurve parse_curve(std::string_view text) {
    auto start = text.find_first_not_of(" \t");
    if (start != std::string_view::npos && text[start] == '{') {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& ex) {
            throw ParseError(std::string("curve JSON: ") + ex.what(), 0);
        }
        return curve_from_json(doc);
    }
    auto eq = text.find('=');
    if (eq != std::string_view::npos) text = text.substr(eq + 1);
    return GenusTwoCurve(exact::parse_int_poly(text));
}

GenusTwoCurve curve_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("f") || !doc["f"].is_array())
        throw IngestError("f: expected an array of integer coefficients");
    std::vector<Integer> c;
    for (const auto& x : doc["f"]) {
        if (x.is_number_integer()) c.emplace_back(x.get<long>());
        else if (x.is_string()) c.emplace_back(x.get<std::string>());
        else throw IngestError("f: expected integers");
    }
    return GenusTwoCurve(IntPoly(c));
}

bool good_prime(const GenusTwoCurve& c, const Integer& p) {
    if (p == 2 || !exact::is_prime(p)) return false;
    Integer bad = c.discriminant() * c.f().leading();
    return !mpz_divisible_p(bad.get_mpz_t(), p.get_mpz_t());
}

Integer count_points_curve(const GenusTwoCurve& c, const Integer& p, unsigned n) {
    if (n != 1 && n != 2) throw DomainError("point counts only over F_p and F_{p^2}");
    check_good(c, p);
    if (p > (n == 1 ? 1000000 : 20000)) throw UnsupportedError("p too large for naive point counting");
    SmallField k(p.get_si());
    const long P = k.p;
    std::vector<long> f;
    for (const auto& x : c.f().coeffs()) f.push_back(exact::mod(x, p).get_si());
    long count = 0;
    if (n == 1) {
        for (long x = 0; x < P; ++x) {
            long y = 0;
            for (auto it = f.rbegin(); it != f.rend(); ++it) y = (y * x + *it) % P;
            count += 1 + k.chi[y];
        }
        count += c.f().degree() == 5 ? 1 : 1 + k.chi[f.back()];
        return count;
    }
    // F_{p^2} = F_p(s), s^2 = nonresidue; chi(z) = chi_p(N z).
    const long r = k.nonresidue;
    for (long a = 0; a < P; ++a)
        for (long b = 0; b < P; ++b) {
            long ya = 0, yb = 0;
            for (auto it = f.rbegin(); it != f.rend(); ++it) {
                long na = (ya * a + yb * b % P * r + *it) % P;
                long nb = (ya * b + yb * a) % P;
                ya = na;
                yb = nb;
            }
            long norm = ((ya * ya - yb * yb % P * r) % P + P) % P;
            count += 1 + k.chi[norm];
        }
    count += c.f().degree() == 5 ? 1 : 2;
    return count;
}

weil::WeilPoly2 lpoly_from_counts(const Integer& c1, const Integer& c2, const Integer& p) {
    Integer a1 = c1 - p - 1, twice = c2 - p * p - 1 + a1 * a1;
    if (mpz_odd_p(twice.get_mpz_t())) throw InvariantError("inconsistent point counts: a2 is not integral");
    weil::WeilPoly2 w{p, a1, twice / 2};
    if (!weil::is_weil_valid(w)) throw InvariantError("inconsistent point counts: not a Weil polynomial");
    return w;
}

weil::WeilPoly2 lpoly_mod_p(const GenusTwoCurve& c, const Integer& p) {
    return lpoly_from_counts(count_points_curve(c, p, 1), count_points_curve(c, p, 2), p);
}

JacobianModP::JacobianModP(Poly monic_quintic, const Integer& p) : f_(modp::reduce(std::move(monic_quintic), p)), p_(p) {
    if (p == 2 || !exact::is_prime(p)) throw DomainError("Jacobian arithmetic needs an odd prime");
    if (modp::degree(f_) != 5 || f_.back() != 1) throw DomainError("model must be a monic quintic");
}

JacobianModP::JacobianModP(const GenusTwoCurve& c, const Integer& p) : p_(p) {
    check_good(c, p);
    Poly g = modp::reduce(c.f(), p);
    if (modp::degree(g) == 6) {
        std::optional<Integer> root;
        for (Integer x = 0; x < p && !root; ++x)
            if (eval_mod(g, x, p) == 0) root = x;
        if (!root) throw UnsupportedError("sextic model without a rational Weierstrass point mod " + p.get_str());
        // X^6 g(alpha + 1/X)
        Poly shifted, lin{1, *root};
        for (std::size_t i = 0; i < g.size(); ++i) {
            Poly term{g[i]};
            for (std::size_t k = 0; k < i; ++k) term = modp::mul(term, lin, p);
            for (std::size_t k = i; k < 6; ++k) term = modp::mul(term, Poly{0, 1}, p);
            shifted = modp::add(shifted, term, p);
        }
        g = shifted;
    }
    f_ = monic_quintic(g, p);
}

MumfordDivisor JacobianModP::add(const MumfordDivisor& a, const MumfordDivisor& b) const {
    const Integer& p = p_;
    Poly e1, e2, c1, c2;
    Poly d1 = modp::ext_gcd(a.u, b.u, p, e1, e2);
    Poly d = modp::ext_gcd(d1, modp::add(a.v, b.v, p), p, c1, c2);
    Poly s1 = modp::mul(c1, e1, p), s2 = modp::mul(c1, e2, p);
    Poly q, r;
    modp::divmod(modp::mul(a.u, b.u, p), modp::mul(d, d, p), p, q, r);
    Poly u = q;
    Poly num = modp::add(modp::add(modp::mul(modp::mul(s1, a.u, p), b.v, p), modp::mul(modp::mul(s2, b.u, p), a.v, p), p),
                         modp::mul(c2, modp::add(modp::mul(a.v, b.v, p), f_, p), p), p);
    modp::divmod(num, d, p, q, r);
    if (!r.empty()) throw InvariantError("Cantor composition: inexact division");
    Poly v = modp::rem(q, u, p);
    while (modp::degree(u) > 2) {
        Poly next;
        modp::divmod(modp::sub(f_, modp::mul(v, v, p), p), u, p, next, r);
        if (!r.empty()) throw InvariantError("Cantor reduction: inexact division");
        u = modp::make_monic(next, p);
        v = modp::rem(modp::sub(Poly{}, v, p), u, p);
    }
    return {modp::make_monic(u, p), modp::rem(v, u, p)};
}

MumfordDivisor JacobianModP::negate(const MumfordDivisor& a) const {
    return {a.u, modp::sub(Poly{}, a.v, p_)};
}

MumfordDivisor JacobianModP::multiply(const MumfordDivisor& a, Integer n) const {
    MumfordDivisor base = a, acc = identity();
    if (n < 0) {
        base = negate(base);
        n = -n;
    }
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) acc = add(acc, base);
        n >>= 1;
        if (n > 0) base = add(base, base);
    }
    return acc;
}

bool JacobianModP::is_valid(const MumfordDivisor& a) const {
    int du = modp::degree(a.u);
    if (du < 0 || du > 2 || a.u.back() != 1 || modp::degree(a.v) >= du) return false;
    return modp::rem(modp::sub(f_, modp::mul(a.v, a.v, p_), p_), a.u, p_).empty();
}

MumfordDivisor JacobianModP::point(const Integer& x0, const Integer& y0) const {
    Integer x = exact::mod(x0, p_), y = exact::mod(y0, p_);
    if (exact::mod(y * y - eval_mod(f_, x, p_), p_) != 0) throw DomainError("point is not on the model");
    return {modp::reduce(Poly{-x, 1}, p_), modp::reduce(Poly{y}, p_)};
}

std::vector<Integer> JacobianModP::weierstrass_roots() const {
    std::vector<Integer> out;
    for (Integer x = 0; x < p_; ++x)
        if (eval_mod(f_, x, p_) == 0) out.push_back(x);
    return out;
}

MumfordDivisor JacobianModP::random_element(std::mt19937_64& rng) const {
    const Integer& p = p_;
    long P = p.get_si();
    std::uniform_int_distribution<long> coin(0, 1), elt(0, P - 1), kind(0, P * P + P);
    auto sign = [&](const Integer& y) { return coin(rng) ? y : exact::mod(-y, p); };
    for (;;) {
        long t = kind(rng);
        if (t == P * P + P) return identity();
        if (t < P) {
            Integer x = t;
            if (auto y = sqrt_mod(eval_mod(f_, x, p), p)) return point(x, sign(*y));
            continue;
        }
        Integer c1 = elt(rng), c0 = elt(rng);
        Integer disc = exact::mod(c1 * c1 - 4 * c0, p);
        if (disc == 0) continue;
        Integer half = inverse(2, p);
        if (auto sd = sqrt_mod(disc, p)) {
            Integer a = exact::mod((-c1 + *sd) * half, p), b = exact::mod((-c1 - *sd) * half, p);
            auto ya = sqrt_mod(eval_mod(f_, a, p), p), yb = sqrt_mod(eval_mod(f_, b, p), p);
            if (!ya || !yb) continue;
            Integer A = sign(*ya), B = sign(*yb);
            Integer slope = exact::mod((B - A) * inverse(b - a, p), p);
            return {modp::reduce(Poly{c0, c1, 1}, p), modp::reduce(Poly{A - slope * a, slope}, p)};
        }
        // F_p[x]/(u) = F_p(s), s = 2x + c1, s^2 = disc
        Poly u = modp::reduce(Poly{c0, c1, 1}, p);
        Poly z = modp::rem(f_, u, p);
        Integer A = z.size() > 0 ? z[0] : Integer(0), B = z.size() > 1 ? z[1] : Integer(0);
        Integer a = exact::mod(A - B * c1 * half, p), b = exact::mod(B * half, p);
        Integer X, Y;
        if (b == 0) {
            if (auto r = sqrt_mod(a, p)) {
                X = *r;
                Y = 0;
            } else {
                auto r2 = sqrt_mod(a * inverse(disc, p), p);
                if (!r2) continue;
                X = 0;
                Y = *r2;
            }
        } else {
            auto n = sqrt_mod(a * a - disc * b * b, p);
            if (!n) continue;
            std::optional<Integer> x;
            for (const Integer& tn : {*n, exact::mod(-*n, p)})
                if (!x) x = sqrt_mod((a + tn) * half, p);
            if (!x || *x == 0) continue;
            X = *x;
            Y = exact::mod(b * inverse(2 * X, p), p);
        }
        if (coin(rng)) {
            X = exact::mod(-X, p);
            Y = exact::mod(-Y, p);
        }
        MumfordDivisor d{u, modp::reduce(Poly{X + Y * c1, 2 * Y}, p)};
        if (!is_valid(d)) throw InvariantError("square root in F_p^2 failed");
        return d;
    }
}

Integer torsion_count(const AbelianInvariants& g, const Integer& n) {
    Integer c = 1;
    for (const auto& d : g.divisors) c *= exact::gcd(d, n);
    return c;
}

AbelianInvariants parse_invariants(std::string_view text) {
    std::string s;
    std::vector<std::size_t> pos;
    for (std::size_t k = 0; k < text.size(); ++k)
        if (text[k] != ' ') {
            s.push_back(text[k]);
            pos.push_back(k);
        }
    if (s == "trivial" || s == "0" || s == "1" || s.empty()) return {};
    std::vector<Integer> orders;
    std::size_t k = 0;
    auto fail = [&](const std::string& what) { throw ParseError(what, k < pos.size() ? pos[k] : text.size()); };
    auto number = [&]() {
        std::size_t start = k;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (start == k) fail("expected a number");
        return Integer(s.substr(start, k - start));
    };
    while (k < s.size()) {
        bool paren = s[k] == '(';
        if (paren) ++k;
        if (s.compare(k, 2, "Z/") == 0) k += 2;
        Integer n = number();
        if (paren) {
            if (k >= s.size() || s[k] != ')') fail("expected ')'");
            ++k;
        }
        unsigned long reps = 1;
        if (k < s.size() && s[k] == '^') {
            ++k;
            reps = number().get_ui();
        }
        if (n < 1) fail("cyclic order must be positive");
        for (unsigned long r = 0; r < reps; ++r) orders.push_back(n);
        if (k < s.size()) {
            if (s[k] != 'x' && s[k] != ',' && s[k] != '*') fail("expected 'x' between factors");
            ++k;
            if (k == s.size()) fail("dangling separator");
        }
    }
    return exact::abelian_from_cyclic(orders);
}

std::string group_name(const AbelianInvariants& g) {
    if (g.divisors.empty()) return "trivial";
    std::string out;
    for (const auto& d : g.divisors) out += (out.empty() ? "Z/" : " x Z/") + d.get_str();
    return out;
}

GroupStructure jacobian_group_mod_p(const GenusTwoCurve& c, const Integer& p, unsigned long seed) {
    GroupStructure g{p, lpoly_mod_p(c, p).point_count(), std::nullopt};
    std::optional<JacobianModP> jac;
    try {
        jac.emplace(c, p);
    } catch (const UnsupportedError&) {
        return g;
    }
    std::mt19937_64 rng(seed);
    std::vector<Integer> cyclic;
    for (const auto& [ell, k] : exact::factor_integer(g.order)) {
        Integer target = exact::pow(ell, k), cofactor = g.order / target;
        std::set<MumfordDivisor> h{jac->identity()};
        for (int misses = 0; Integer(h.size()) < target;) {
            auto x = jac->multiply(jac->random_element(rng), cofactor);
            if (h.count(x)) {
                if (++misses > 2000) throw InvariantError("Sylow subgroup generation stalled at p = " + p.get_str());
                continue;
            }
            unsigned long steps = 1;
            for (auto cur = x; !h.count(cur); cur = jac->add(cur, x)) ++steps;
            std::set<MumfordDivisor> next;
            for (const auto& e : h) {
                auto cur = e;
                for (unsigned long s = 1; s < steps; ++s) {
                    next.insert(cur);
                    cur = jac->add(cur, x);
                }
                next.insert(cur);
            }
            h = std::move(next);
            if (Integer(h.size()) > target) throw InvariantError("subgroup exceeds the Sylow order");
        }
        // ranks r_j = #{cyclic factors of exponent >= j} from #H[ell^j]
        std::vector<unsigned long> by_exponent(k + 1, 0);
        for (const auto& e : h) {
            unsigned j = 0;
            for (auto cur = e; !(cur == jac->identity()); cur = jac->multiply(cur, ell)) ++j;
            ++by_exponent[j];
        }
        std::vector<unsigned> rank(k + 2, 0);
        unsigned long killed = by_exponent[0];
        unsigned prev = 0;
        for (unsigned j = 1; j <= k; ++j) {
            killed += by_exponent[j];
            unsigned logk = 0;
            for (Integer m = killed; m > 1; m /= ell) ++logk;
            rank[j] = logk - prev;
            prev = logk;
        }
        for (unsigned j = 1; j <= k; ++j)
            for (unsigned c2 = rank[j + 1]; c2 < rank[j]; ++c2) cyclic.push_back(exact::pow(ell, j));
    }
    g.invariants = exact::abelian_from_cyclic(cyclic);
    if (g.invariants->order() != g.order) throw InvariantError("group invariants disagree with #J(F_p)");
    return g;
}

unsigned two_torsion_count(const std::vector<unsigned>& degrees) {
    std::vector<int> perm;
    for (unsigned d : with_infinity(degrees)) {
        int start = perm.size();
        for (unsigned k = 0; k < d; ++k) perm.push_back(start + static_cast<int>((k + 1) % d));
    }
    return fixed_classes(perm);
}

unsigned two_torsion_block_bound(const std::vector<unsigned>& degrees) {
    auto blocks = with_infinity(degrees);
    unsigned count = 0;
    for (unsigned s = 0; s < (1U << blocks.size()); ++s) {
        unsigned size = 0;
        for (std::size_t k = 0; k < blocks.size(); ++k)
            if (s >> k & 1) size += blocks[k];
        if (size % 2 == 0) ++count;
    }
    return count / 2;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Consistent: return "CONSISTENT";
        case Verdict::Inconsistent: return "INCONSISTENT";
        case Verdict::Undetermined: return "UNDETERMINED";
    }
    return "?";
}

TorsionReport certify_torsion(const GenusTwoCurve& c, const AbelianInvariants& claimed, const Integer& p_max) {
    TorsionReport rep{claimed, {}, 0, 0, torsion_count(claimed, 2), 1, Verdict::Undetermined};
    Integer n = claimed.order();
    bool divisible = true;
    for (Integer p = 3; p <= p_max; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
        if (!good_prime(c, p)) continue;
        Integer order = lpoly_mod_p(c, p).point_count();
        bool ok = mpz_divisible_p(order.get_mpz_t(), n.get_mpz_t());
        divisible = divisible && ok;
        rep.primes.push_back({p, order, ok});
        rep.gcd = exact::gcd(rep.gcd, order);
    }
    if (rep.primes.empty()) throw DomainError("no good odd primes up to " + p_max.get_str());
    std::vector<unsigned> degrees;
    for (const auto& f : exact::factor_poly_q(c.f()).factors) degrees.push_back(f.degree());
    rep.two_torsion_lower = two_torsion_block_bound(degrees);
    rep.gcd_two_part = two_part(rep.gcd);
    Integer lower = rep.two_torsion_lower;
    if (!divisible || lower > rep.claimed_two) rep.verdict = Verdict::Inconsistent;
    else if (rep.claimed_two <= lower && lower <= rep.gcd_two_part) rep.verdict = Verdict::Consistent;
    return rep;
}

std::vector<TableRow> load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw IngestError(path + ": " + ex.what());
    }
    if (!doc.is_array()) throw IngestError(path + ": expected an array of rows");
    std::vector<TableRow> rows;
    for (const auto& row : doc) {
        for (const char* field : {"torsion", "disc", "endomorphisms", "f"})
            if (!row.contains(field)) throw IngestError(std::string(field) + ": missing");
        try {
            rows.push_back({parse_invariants(row["torsion"].get<std::string>()), Integer(row["disc"].get<long>()),
                            row["endomorphisms"].get<std::string>(), curve_from_json(row)});
        } catch (const ParseError& ex) {
            throw IngestError(std::string("torsion: ") + ex.what());
        } catch (const nlohmann::json::exception& ex) {
            throw IngestError(std::string("row: ") + ex.what());
        }
    }
    return rows;
}

}  // namespace qt::genus2
