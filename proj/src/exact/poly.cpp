#include "qt/exact/poly.hpp"

#include <algorithm>
#include <cctype>

#include "qt/errors.hpp"
#include "qt/exact/matrix.hpp"

namespace qt::exact {

IntPoly::IntPoly(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

IntPoly IntPoly::constant(const Integer& c) { return IntPoly(std::vector<Integer>{c}); }

IntPoly IntPoly::monomial(const Integer& c, unsigned degree) {
    std::vector<Integer> v(degree + 1, 0);
    v[degree] = c;
    return IntPoly(std::move(v));
}

void IntPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Integer& IntPoly::leading() const {
    if (coeffs_.empty()) throw DomainError("leading coefficient of the zero polynomial");
    return coeffs_.back();
}

Integer IntPoly::eval(const Integer& x) const {
    Integer r = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + *it;
    return r;
}

Rat IntPoly::eval(const Rat& x) const {
    Rat r = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = r * x + Rat(*it);
    return r;
}

IntPoly IntPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Integer> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
    return IntPoly(std::move(d));
}

Integer IntPoly::content() const {
    Integer g = 0;
    for (const auto& c : coeffs_) g = exact::gcd(g, c);
    return g;
}

IntPoly IntPoly::primitive_part() const {
    if (is_zero()) return {};
    Integer c = content();
    if (leading() < 0) c = -c;
    std::vector<Integer> v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) mpz_divexact(v[i].get_mpz_t(), coeffs_[i].get_mpz_t(), c.get_mpz_t());
    return IntPoly(std::move(v));
}

IntPoly IntPoly::operator-() const {
    std::vector<Integer> v = coeffs_;
    for (auto& c : v) c = -c;
    return IntPoly(std::move(v));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<Integer> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] += b.coeffs_[i];
    return IntPoly(std::move(v));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Integer> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return IntPoly(std::move(v));
}

IntPoly operator*(const Integer& c, const IntPoly& a) { return IntPoly::constant(c) * a; }

std::string to_string(const IntPoly& f, std::string_view var) {
    if (f.is_zero()) return "0";
    std::string out;
    for (int i = f.degree(); i >= 0; --i) {
        const Integer& c = f.coeffs()[i];
        if (c == 0) continue;
        Integer mag = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (i == 0 || mag != 1) {
            out += mag.get_str();
            if (i > 0) out += "*";
        }
        if (i > 0) out += std::string(var);
        if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
}

IntPoly parse_int_poly(std::string_view text) {
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto read_digits = [&](Integer& out) {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) return false;
        out = Integer(std::string(text.substr(start, pos - start)), 10);
        return true;
    };
    std::vector<Integer> coeffs;
    char var = 0;
    bool first = true;
    skip();
    if (pos == text.size()) throw ParseError("empty polynomial", 0);
    while (pos < text.size()) {
        int sign = 1;
        skip();
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
            skip();
        } else if (!first) {
            throw ParseError("expected '+' or '-'", pos);
        }
        first = false;
        Integer c = 1;
        bool has_coeff = read_digits(c);
        skip();
        unsigned long exponent = 0;
        if (has_coeff && pos < text.size() && text[pos] == '*') {
            ++pos;
            skip();
            if (pos >= text.size() || !std::isalpha(static_cast<unsigned char>(text[pos])))
                throw ParseError("expected variable after '*'", pos);
        }
        if (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
            if (var == 0) var = text[pos];
            if (text[pos] != var) throw ParseError("mixed variable names", pos);
            ++pos;
            exponent = 1;
            skip();
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                skip();
                Integer e;
                if (!read_digits(e)) throw ParseError("expected exponent", pos);
                if (e > 64) throw ParseError("exponent too large", pos);
                exponent = e.get_ui();
            }
        } else if (!has_coeff) {
            throw ParseError("expected a term", pos);
        }
        if (coeffs.size() <= exponent) coeffs.resize(exponent + 1, 0);
        coeffs[exponent] += sign * c;
        skip();
    }
    return IntPoly(std::move(coeffs));
}

bool divides_exactly(const IntPoly& a, const IntPoly& b, IntPoly* quotient) {
    if (b.is_zero()) throw DomainError("division by the zero polynomial");
    std::vector<Integer> r = a.coeffs();
    const int db = b.degree();
    if (a.degree() < db) {
        if (quotient) *quotient = IntPoly();
        return a.is_zero();
    }
    std::vector<Integer> q(a.degree() - db + 1, 0);
    const Integer& lb = b.leading();
    for (int i = a.degree(); i >= db; --i) {
        if (r[i] == 0) continue;
        if (!mpz_divisible_p(r[i].get_mpz_t(), lb.get_mpz_t())) return false;
        Integer c = r[i] / lb;
        q[i - db] = c;
        for (int j = 0; j <= db; ++j) r[i - db + j] -= c * b.coeffs()[j];
    }
    for (const auto& x : r)
        if (x != 0) return false;
    if (quotient) *quotient = IntPoly(std::move(q));
    return true;
}

namespace {

IntPoly pseudo_remainder(const IntPoly& a, const IntPoly& b) {
    std::vector<Integer> r = a.coeffs();
    const int db = b.degree();
    const Integer& lb = b.leading();
    for (int i = a.degree(); i >= db; --i) {
        Integer c = r[i];
        for (auto& x : r) x *= lb;
        for (int j = 0; j <= db; ++j) r[i - db + j] -= c * b.coeffs()[j];
    }
    return IntPoly(std::move(r));
}

}  // namespace

IntPoly gcd(const IntPoly& a_in, const IntPoly& b_in) {
    if (a_in.is_zero()) return b_in.primitive_part();
    if (b_in.is_zero()) return a_in.primitive_part();
    IntPoly a = a_in.primitive_part(), b = b_in.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_remainder(a, b);
        a = b;
        b = r.is_zero() ? r : r.primitive_part();
    }
    return a.primitive_part();
}

Integer resultant(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return 0;
    const int m = a.degree(), n = b.degree();
    if (m == 0) return pow(a.leading(), n);
    if (n == 0) return pow(b.leading(), m);
    const int size = m + n;
    IntMatrix s(size, std::vector<Integer>(size, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) s[i][i + j] = a.coeffs()[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) s[n + i][i + j] = b.coeffs()[n - j];
    return determinant(s);
}

Integer discriminant(const IntPoly& f) {
    const int n = f.degree();
    if (n < 1) throw DomainError("discriminant of a constant");
    Integer r = resultant(f, f.derivative());
    Integer d;
    mpz_divexact(d.get_mpz_t(), r.get_mpz_t(), f.leading().get_mpz_t());
    if ((n * (n - 1) / 2) % 2) d = -d;
    return d;
}

namespace modp {

Poly reduce(Poly f, const Integer& m) {
    for (auto& c : f) c = mod(c, m);
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

Poly reduce(const IntPoly& f, const Integer& m) { return reduce(f.coeffs(), m); }

int degree(const Poly& a) { return static_cast<int>(a.size()) - 1; }

Poly add(const Poly& a, const Poly& b, const Integer& m) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return reduce(std::move(r), m);
}

Poly sub(const Poly& a, const Poly& b, const Integer& m) {
    Poly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return reduce(std::move(r), m);
}

Poly mul(const Poly& a, const Poly& b, const Integer& m) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return reduce(std::move(r), m);
}

void divmod(const Poly& a, const Poly& b, const Integer& m, Poly& q, Poly& r) {
    if (b.empty()) throw DomainError("division by the zero polynomial");
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), b.back().get_mpz_t(), m.get_mpz_t()) == 0)
        throw DomainError("leading coefficient not invertible");
    r = reduce(a, m);
    const int db = degree(b);
    q.assign(std::max(0, degree(r) - db + 1), 0);
    for (int i = degree(r); i >= db; --i) {
        if (r[i] == 0) continue;
        Integer c = mod(r[i] * inv, m);
        q[i - db] = c;
        for (int j = 0; j <= db; ++j) r[i - db + j] = mod(r[i - db + j] - c * b[j], m);
    }
    r = reduce(std::move(r), m);
    q = reduce(std::move(q), m);
}

Poly rem(const Poly& a, const Poly& b, const Integer& m) {
    Poly q, r;
    divmod(a, b, m, q, r);
    return r;
}

Poly make_monic(const Poly& a, const Integer& p) {
    if (a.empty()) return a;
    Integer inv;
    if (mpz_invert(inv.get_mpz_t(), a.back().get_mpz_t(), p.get_mpz_t()) == 0)
        throw DomainError("leading coefficient not invertible");
    Poly r = a;
    for (auto& c : r) c = mod(c * inv, p);
    return r;
}

Poly gcd(Poly a, Poly b, const Integer& p) {
    a = reduce(std::move(a), p);
    b = reduce(std::move(b), p);
    while (!b.empty()) {
        Poly r = rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, p);
}

Poly ext_gcd(const Poly& a, const Poly& b, const Integer& p, Poly& s, Poly& t) {
    Poly r0 = reduce(a, p), r1 = reduce(b, p);
    Poly s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        Poly q, r;
        divmod(r0, r1, p, q, r);
        Poly s2 = sub(s0, mul(q, s1, p), p);
        Poly t2 = sub(t0, mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    Integer inv;
    mpz_invert(inv.get_mpz_t(), r0.back().get_mpz_t(), p.get_mpz_t());
    s = reduce(mul(s0, Poly{inv}, p), p);
    t = reduce(mul(t0, Poly{inv}, p), p);
    return make_monic(r0, p);
}

Poly powmod(const Poly& base, Integer e, const Poly& modulus, const Integer& m) {
    Poly result{1};
    result = rem(result, modulus, m);
    Poly b = rem(base, modulus, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = rem(mul(result, b, m), modulus, m);
        e >>= 1;
        if (e > 0) b = rem(mul(b, b, m), modulus, m);
    }
    return result;
}

namespace {

// Cantor-Zassenhaus splitting of a product of distinct degree-d irreducibles.
void equal_degree_split(const Poly& g, int d, const Integer& p, gmp_randclass& rng, std::vector<Poly>& out) {
    if (degree(g) == d) {
        out.push_back(g);
        return;
    }
    const Integer e = (pow(p, d) - 1) / 2;
    for (;;) {
        Poly a(degree(g));
        for (auto& c : a) c = rng.get_z_range(p);
        a = reduce(std::move(a), p);
        if (degree(a) < 1) continue;
        Poly b = sub(powmod(a, e, g, p), Poly{1}, p);
        Poly c = gcd(b, g, p);
        if (degree(c) > 0 && degree(c) < degree(g)) {
            Poly q, r;
            divmod(g, c, p, q, r);
            equal_degree_split(c, d, p, rng, out);
            equal_degree_split(make_monic(q, p), d, p, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<Poly> factor_squarefree(const Poly& f_in, const Integer& p, unsigned long seed) {
    if (p == 2) throw DomainError("factorization over F_2 is not supported");
    Poly f = make_monic(reduce(f_in, p), p);
    std::vector<Poly> out;
    if (degree(f) < 1) return out;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    const Poly x{0, 1};
    Poly h = rem(x, f, p);
    for (int d = 1; 2 * d <= degree(f); ++d) {
        h = powmod(h, p, f, p);
        Poly g = gcd(sub(h, x, p), f, p);
        if (degree(g) > 0) {
            equal_degree_split(g, d, p, rng, out);
            Poly q, r;
            divmod(f, g, p, q, r);
            f = make_monic(q, p);
            h = rem(h, f, p);
        }
    }
    if (degree(f) > 0) out.push_back(f);
    return out;
}

}  // namespace modp

namespace {

using modp::Poly;

Poly symmetric(Poly a, const Integer& m) {
    Integer half = m / 2;
    for (auto& c : a) {
        c = mod(c, m);
        if (c > half) c -= m;
    }
    return a;
}

// Lifts g == A*B (mod p), A monic, to g == A*B (mod p^k). g's leading
// coefficient lives in B.
void hensel_pair(const IntPoly& g, Poly& a, Poly& b, const Integer& p, unsigned k) {
    Poly s, t;
    // s*b + t*a == 1 (mod p)
    modp::ext_gcd(b, a, p, s, t);
    Integer m = p;
    for (unsigned step = 1; step < k; ++step) {
        const Integer m_next = m * p;
        Poly ab = modp::mul(a, b, m_next);
        Poly e = modp::reduce(g.coeffs(), m_next);
        e = modp::sub(e, ab, m_next);
        for (auto& c : e) {
            if (!mpz_divisible_p(c.get_mpz_t(), m.get_mpz_t())) throw InvariantError("Hensel lift lost congruence");
            c /= m;
        }
        e = modp::reduce(std::move(e), p);
        Poly q, r;
        modp::divmod(modp::mul(s, e, p), modp::reduce(a, p), p, q, r);
        Poly db = modp::add(modp::mul(t, e, p), modp::mul(q, modp::reduce(b, p), p), p);
        Poly mr(r.size()), mdb(db.size());
        for (std::size_t i = 0; i < r.size(); ++i) mr[i] = r[i] * m;
        for (std::size_t i = 0; i < db.size(); ++i) mdb[i] = db[i] * m;
        a = modp::add(a, mr, m_next);
        b = modp::add(b, mdb, m_next);
        m = m_next;
    }
}

// Monic lifts mod p^k of the modular factors of g.
std::vector<Poly> hensel_lift(const IntPoly& g, const std::vector<Poly>& factors, const Integer& p, unsigned k) {
    const Integer pk = pow(p, k);
    std::vector<Poly> lifted;
    IntPoly rest = g;
    for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
        Poly a = factors[i];
        Poly b{mod(rest.leading(), p)};
        for (std::size_t j = i + 1; j < factors.size(); ++j) b = modp::mul(b, factors[j], p);
        hensel_pair(rest, a, b, p, k);
        lifted.push_back(a);
        rest = IntPoly(symmetric(b, pk));
    }
    lifted.push_back(modp::make_monic(modp::reduce(rest, pk), pk));
    return lifted;
}

void next_subset(std::vector<std::size_t>& idx, std::size_t n, bool& done) {
    const std::size_t k = idx.size();
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) {
        done = true;
        return;
    }
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
}

std::vector<IntPoly> zassenhaus(const IntPoly& g_in) {
    IntPoly g = g_in;
    if (g.degree() <= 1) return {g};
    // pick the good prime with the fewest modular factors among a few
    IntPoly dg = g.derivative();
    Integer best_p = 0;
    std::vector<Poly> best;
    int tried = 0;
    for (Integer p = 3; tried < 6; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
        if (mpz_divisible_p(g.leading().get_mpz_t(), p.get_mpz_t())) continue;
        if (modp::degree(modp::gcd(modp::reduce(g, p), modp::reduce(dg, p), p)) != 0) continue;
        ++tried;
        auto facs = modp::factor_squarefree(modp::reduce(g, p), p);
        if (best_p == 0 || facs.size() < best.size()) {
            best_p = p;
            best = std::move(facs);
        }
        if (best.size() == 1) return {g};
    }
    // Mignotte-type bound on coefficients of lc(g) * (any factor)
    Integer norm2 = 0;
    for (const auto& c : g.coeffs()) norm2 += c * c;
    Integer bound = abs(g.leading()) * pow(Integer(2), g.degree()) * (floor_sqrt(norm2) + 1);
    unsigned k = 1;
    Integer pk = best_p;
    while (pk <= 2 * bound) {
        pk *= best_p;
        ++k;
    }
    std::vector<Poly> lifted = hensel_lift(g, best, best_p, k);

    std::vector<IntPoly> out;
    std::size_t s = 1;
    while (2 * s <= lifted.size()) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        for (bool done = false; !done; next_subset(idx, lifted.size(), done)) {
            Poly cand{mod(g.leading(), pk)};
            for (auto i : idx) cand = modp::mul(cand, lifted[i], pk);
            IntPoly h = IntPoly(symmetric(cand, pk)).primitive_part();
            IntPoly quotient;
            if (h.degree() > 0 && divides_exactly(g, h, &quotient)) {
                out.push_back(h);
                g = quotient;
                for (std::size_t j = s; j-- > 0;) lifted.erase(lifted.begin() + static_cast<long>(idx[j]));
                found = true;
                break;
            }
        }
        if (!found) ++s;
    }
    out.push_back(g.primitive_part());
    return out;
}

bool poly_less(const IntPoly& a, const IntPoly& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i) {
        if (a.coeffs()[i] != b.coeffs()[i]) return a.coeffs()[i] < b.coeffs()[i];
    }
    return false;
}

}  // namespace

RationalFactorization factor_poly_q(const IntPoly& f) {
    if (f.is_zero()) throw DomainError("factorization of the zero polynomial");
    if (f.degree() > 8) throw UnsupportedError("factor_poly_q supports degree <= 8");
    RationalFactorization out;
    Integer c = f.content();
    if (f.leading() < 0) c = -c;
    out.content = Rat(c);
    if (f.degree() == 0) return out;
    IntPoly g = f.primitive_part();
    IntPoly radical;
    divides_exactly(g, gcd(g, g.derivative()), &radical);
    radical = radical.primitive_part();
    for (const auto& h : zassenhaus(radical)) {
        IntPoly q;
        while (divides_exactly(g, h, &q)) {
            out.factors.push_back(h);
            g = q;
        }
    }
    if (g.degree() != 0 || g.leading() != 1) throw InvariantError("factorization does not multiply back");
    std::sort(out.factors.begin(), out.factors.end(), poly_less);
    return out;
}

}  // namespace qt::exact
