#include "qt/weil/weil.hpp"

#include <fstream>
#include <map>

#include "json.hpp"
#include "qt/errors.hpp"

namespace qt::weil {

using exact::Rat;

IntPoly WeilPoly1::poly() const { return IntPoly({q, a, 1}); }

IntPoly WeilPoly2::poly() const { return IntPoly({q * q, q * a1, a2, a1, 1}); }

Integer WeilPoly2::point_count() const { return poly().eval(Integer(1)); }

// ---------------------------------------------------------------- labels

std::string encode_coefficient(const Integer& c) {
    if (c == 0) return "a";
    std::string digits;
    Integer m = abs(c);
    while (m != 0) {
        digits.insert(digits.begin(), static_cast<char>('a' + mpz_fdiv_ui(m.get_mpz_t(), 26)));
        m /= 26;
    }
    return c < 0 ? "a" + digits : digits;
}

Integer decode_coefficient(std::string_view s, std::size_t offset) {
    if (s.empty()) throw ParseError("empty coefficient code", offset);
    for (std::size_t k = 0; k < s.size(); ++k)
        if (s[k] < 'a' || s[k] > 'z') throw ParseError("coefficient codes use the letters a-z", offset + k);
    if (s.size() > 1 && s[0] == 'a') {
        if (s[1] == 'a') throw ParseError("non-canonical coefficient code", offset + 1);
        return -decode_coefficient(s.substr(1), offset + 1);
    }
    Integer v = 0;
    for (char ch : s) v = v * 26 + (ch - 'a');
    return v;
}

WeilPoly2 parse_label(std::string_view label) {
    auto dot1 = label.find('.');
    if (dot1 == std::string_view::npos) throw ParseError("expected 'g.q.code'", label.size());
    if (label.substr(0, dot1) != "2") throw ParseError("only abelian surfaces (g = 2) are supported", 0);
    auto dot2 = label.find('.', dot1 + 1);
    if (dot2 == std::string_view::npos) throw ParseError("expected '.' after q", label.size());
    auto qtext = label.substr(dot1 + 1, dot2 - dot1 - 1);
    if (qtext.empty()) throw ParseError("missing q", dot1 + 1);
    for (std::size_t k = 0; k < qtext.size(); ++k)
        if (qtext[k] < '0' || qtext[k] > '9') throw ParseError("q must be a decimal integer", dot1 + 1 + k);
    Integer q{std::string(qtext)};
    if (exact::as_prime_power(q).first == 0) throw ParseError("q must be a prime power", dot1 + 1);
    auto code = label.substr(dot2 + 1);
    auto us = code.find('_');
    if (us == std::string_view::npos) throw ParseError("expected '_' between coefficient codes", label.size());
    std::size_t base = dot2 + 1;
    WeilPoly2 w{q, decode_coefficient(code.substr(0, us), base), decode_coefficient(code.substr(us + 1), base + us + 1)};
    return w;
}

std::string format_label(const WeilPoly2& w) {
    return "2." + w.q.get_str() + "." + encode_coefficient(w.a1) + "_" + encode_coefficient(w.a2);
}

// ---------------------------------------------------------------- validity

bool is_weil_valid(const WeilPoly1& w) { return w.q > 0 && w.a * w.a <= 4 * w.q; }

bool is_weil_valid(const WeilPoly2& w) {
    const Integer& q = w.q;
    if (q <= 0) return false;
    // h(x) = x^2 + a1 x + (a2 - 2q): real roots, vertex inside, h(+-2 sqrt q) >= 0
    if (w.a1 * w.a1 > 16 * q) return false;
    if (4 * (w.a2 - 2 * q) > w.a1 * w.a1) return false;
    Integer s = 2 * q + w.a2;
    return s >= 0 && s * s >= 4 * q * w.a1 * w.a1;
}

// ---------------------------------------------------------------- Honda-Tate

namespace {

// Coefficients of g(r + p y).
IntPoly shift_scale(const IntPoly& g, const Integer& r, const Integer& p) {
    IntPoly lin({r, p});
    IntPoly out;
    for (int i = g.degree(); i >= 0; --i) out = out * lin + IntPoly::constant(g.coeff(i));
    return out;
}

IntPoly strip_p(const IntPoly& g, const Integer& p) {
    Integer c = g.content();
    Integer pk = 1;
    while (mpz_divisible_p(c.get_mpz_t(), Integer(pk * p).get_mpz_t())) pk *= p;
    std::vector<Integer> co;
    for (const auto& x : g.coeffs()) co.push_back(x / pk);
    return IntPoly(co);
}

// Number of roots of a squarefree g in Z_p (units only if requested).
long count_padic_roots(const IntPoly& g0, const Integer& p, bool units_only, int depth = 0) {
    if (depth > 200) throw InvariantError("p-adic root count did not separate roots");
    IntPoly g = strip_p(g0, p);
    IntPoly dg = g.derivative();
    long count = 0;
    for (Integer r = units_only ? 1 : 0; r < p; ++r) {
        if (!mpz_divisible_p(g.eval(r).get_mpz_t(), p.get_mpz_t())) continue;
        if (!mpz_divisible_p(dg.eval(r).get_mpz_t(), p.get_mpz_t())) {
            ++count;
            continue;
        }
        count += count_padic_roots(shift_scale(g, r, p), p, false, depth + 1);
    }
    return count;
}

Integer denominator_of(const Rat& x) { return Rat(x).get_den(); }

// Does P have a root in Q_p of valuation u?
bool has_root_of_valuation(const IntPoly& P, const Integer& p, long u) {
    std::vector<Integer> co;
    Integer pu = exact::pow(p, u), scale = 1;
    for (int i = 0; i <= P.degree(); ++i, scale *= pu) co.push_back(P.coeff(i) * scale);
    return count_padic_roots(IntPoly(co), p, true) > 0;
}

}  // namespace

Integer honda_tate_index(const IntPoly& P, const Integer& q) {
    auto [p, n] = exact::as_prime_power(q);
    if (p == 0) throw DomainError("q must be a prime power");
    if (P.degree() < 1 || P.leading() != 1) throw DomainError("Honda-Tate index needs a monic nonconstant factor");
    const int d = P.degree();
    Integer e = 1;

    // real places: roots +-sqrt q
    bool real_root = false;
    if (exact::is_square(q)) {
        Integer s = exact::floor_sqrt(q);
        real_root = P.eval(s) == 0 || P.eval(Integer(-s)) == 0;
    } else {
        real_root = exact::divides_exactly(P, IntPoly({-q, 0, 1}));
    }
    if (real_root) e = 2;

    // places above p: Newton polygon segments
    std::vector<long> val(d + 1, 0);
    std::vector<bool> present(d + 1, false);
    for (int i = 0; i <= d; ++i)
        if (P.coeff(i) != 0) {
            present[i] = true;
            val[i] = exact::padic_valuation(P.coeff(i), p);
        }
    if (!present[0]) throw DomainError("factor vanishes at 0");
    int start = 0;
    while (start < d) {
        int best = -1;
        Rat best_slope;
        for (int j = start + 1; j <= d; ++j) {
            if (!present[j]) continue;
            Rat slope = exact::make_rat(val[j] - val[start], j - start);
            if (best < 0 || slope <= best_slope) {
                best = j;
                best_slope = slope;
            }
        }
        const int length = best - start;
        const Rat sigma = -best_slope;  // valuation of the roots on this segment
        const Integer w = sigma.get_den();
        const Rat nn(static_cast<long>(n));
        Integer den;
        if (length == w) {
            den = denominator_of(Rat(w) * sigma / nn);
        } else if (sigma == nn / 2) {
            // a root in Q_p gives an odd-degree local factor (invariant 1/2)
            bool root = w == 1 && has_root_of_valuation(P, p, sigma.get_num().get_si());
            den = root ? denominator_of(sigma / nn) : Integer(1);
        } else if (w == 1) {
            if (has_root_of_valuation(P, p, sigma.get_num().get_si())) {
                den = denominator_of(sigma / nn);
            } else if (length == 2 || length == 3) {
                den = denominator_of(Rat(length) * sigma / nn);
            } else {
                throw UnsupportedError("Newton segment of length " + std::to_string(length) + " without roots");
            }
        } else {
            throw UnsupportedError("ramified Newton segment longer than its denominator");
        }
        e = exact::lcm(e, den);
        start = best;
    }
    return e;
}

bool honda_tate_admissible(const WeilPoly2& w) {
    if (!is_weil_valid(w)) return false;
    auto fac = exact::factor_poly_q(w.poly());
    std::map<std::vector<Integer>, long> mult;
    std::map<std::vector<Integer>, IntPoly> polys;
    for (const auto& f : fac.factors) {
        ++mult[f.coeffs()];
        polys.emplace(f.coeffs(), f);
    }
    for (const auto& [key, k] : mult) {
        Integer e = honda_tate_index(polys.at(key), w.q);
        if (!mpz_divisible_p(Integer(k).get_mpz_t(), e.get_mpz_t())) return false;
    }
    return true;
}

bool ordinary(const WeilPoly2& w) {
    auto p = exact::as_prime_power(w.q).first;
    return !mpz_divisible_p(w.a2.get_mpz_t(), p.get_mpz_t());
}

// ---------------------------------------------------------------- enumeration

std::vector<SurfaceClass> enumerate_surfaces(const Integer& q) {
    static const std::set<long> supported{2, 3, 4, 5, 7, 9};
    if (!q.fits_slong_p() || !supported.count(q.get_si()))
        throw DomainError("enumeration supports q in {2, 3, 4, 5, 7, 9}, got " + q.get_str());
    std::vector<SurfaceClass> out;
    Integer bound = exact::floor_sqrt(16 * q);
    for (Integer a1 = -bound; a1 <= bound; ++a1) {
        Integer top = a1 * a1 / 4 + 2 * q + 1;
        for (Integer a2 = -2 * q; a2 <= top; ++a2) {
            WeilPoly2 w{q, a1, a2};
            if (!is_weil_valid(w)) continue;
            out.push_back({w, honda_tate_admissible(w)});
        }
    }
    return out;
}

std::vector<WeilPoly2> admissible_surfaces(const Integer& q) {
    std::vector<WeilPoly2> out;
    for (const auto& c : enumerate_surfaces(q))
        if (c.admissible) out.push_back(c.w);
    return out;
}

// ---------------------------------------------------------------- base change

IntPoly base_change(const IntPoly& f, unsigned n) {
    if (n == 0) throw DomainError("base change degree must be positive");
    if (f.degree() < 1 || f.leading() != 1) throw DomainError("base change needs a monic polynomial");
    const int d = f.degree();
    // elementary symmetric functions of the roots
    std::vector<Integer> e(d + 1);
    for (int k = 0; k <= d; ++k) e[k] = (k % 2 ? -1 : 1) * f.coeff(d - k);
    const std::size_t top = static_cast<std::size_t>(d) * n;
    std::vector<Integer> ps(top + 1, 0);
    for (std::size_t k = 1; k <= top; ++k) {
        Integer s = 0;
        for (std::size_t i = 1; i <= std::min<std::size_t>(k, d); ++i) {
            Integer term = (i == k) ? Integer(e[i] * static_cast<long>(k)) : Integer(e[i] * ps[k - i]);
            s += (i % 2 ? term : Integer(-term));
        }
        ps[k] = s;
    }
    std::vector<Integer> E(d + 1, 0);
    E[0] = 1;
    for (int k = 1; k <= d; ++k) {
        Integer s = 0;
        for (int i = 1; i <= k; ++i) {
            Integer term = E[k - i] * ps[static_cast<std::size_t>(i) * n];
            s += (i % 2 ? term : Integer(-term));
        }
        if (!mpz_divisible_ui_p(s.get_mpz_t(), k)) throw InvariantError("Newton identity produced a non-integer");
        E[k] = s / k;
    }
    std::vector<Integer> co(d + 1);
    for (int k = 0; k <= d; ++k) co[d - k] = (k % 2 ? -1 : 1) * E[k];
    return IntPoly(co);
}

WeilPoly2 base_change(const WeilPoly2& w, unsigned n) {
    IntPoly g = base_change(w.poly(), n);
    WeilPoly2 out{exact::pow(w.q, n), g.coeff(3), g.coeff(2)};
    if (out.poly() != g) throw InvariantError("base change left the Weil form");
    return out;
}

WeilPoly1 base_change(const WeilPoly1& w, unsigned n) {
    IntPoly g = base_change(w.poly(), n);
    return WeilPoly1{g.coeff(0), g.coeff(1)};
}

std::optional<Integer> square_root_class(const WeilPoly2& w) {
    // (T^2 + aT + q)^2 = T^4 + 2a T^3 + (a^2 + 2q) T^2 + 2aq T + q^2
    if (!mpz_even_p(w.a1.get_mpz_t())) return std::nullopt;
    Integer a = w.a1 / 2;
    if (a * a + 2 * w.q != w.a2) return std::nullopt;
    if (!is_weil_valid(WeilPoly1{w.q, a})) return std::nullopt;
    return a;
}

std::optional<SplitWitness> geometric_split_analysis(const WeilPoly2& w, unsigned nmax) {
    if (nmax < 1) throw DomainError("nmax must be at least 1");
    for (unsigned n = 1; n <= nmax; ++n) {
        if (auto a = square_root_class(base_change(w, n))) return SplitWitness{n, *a};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- torsion

TorsionScan torsion_gcd_scan(const Integer& q, const Integer& ell, bool geometric_square_only) {
    const Integer cap = exact::pow(ell, 100);
    TorsionScan scan{0, {}};
    for (const auto& w : admissible_surfaces(q)) {
        if (geometric_square_only && !geometric_split_analysis(w)) continue;
        Integer g = exact::gcd(w.point_count(), cap);
        if (g > scan.max_gcd) {
            scan.max_gcd = g;
            scan.attaining.clear();
        }
        if (g == scan.max_gcd) scan.attaining.push_back(w);
    }
    return scan;
}

std::set<Integer> qm_prime_bound(const Integer& q) {
    if (exact::as_prime_power(q).first == 0) throw DomainError("q must be a prime power");
    std::set<Integer> out;
    Integer b = exact::floor_sqrt(4 * q);
    for (Integer a = -b; a <= b; ++a)
        for (const auto& p : exact::prime_divisors(1 + a + q)) out.insert(p);
    return out;
}

std::vector<WeilPoly2> load_class_fixture(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw IngestError(path + ": " + ex.what());
    }
    if (!doc.is_array()) throw IngestError(path + ": expected a JSON array");
    std::vector<WeilPoly2> out;
    for (std::size_t k = 0; k < doc.size(); ++k) {
        const auto& row = doc[k];
        const std::string where = path + "[" + std::to_string(k) + "]";
        if (!row.is_object() || !row.contains("label") || !row["label"].is_string() || !row.contains("a1") ||
            !row["a1"].is_number_integer() || !row.contains("a2") || !row["a2"].is_number_integer())
            throw IngestError(where + ": expected {label: string, a1: int, a2: int}");
        WeilPoly2 w;
        try {
            w = parse_label(row["label"].get<std::string>());
        } catch (const ParseError& ex) {
            throw IngestError(where + ": " + ex.what());
        }
        if (w.a1 != row["a1"].get<long>() || w.a2 != row["a2"].get<long>())
            throw IngestError(where + ": label disagrees with a1/a2");
        out.push_back(w);
    }
    return out;
}

}  // namespace qt::weil
