#include "qt/exact/number.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "qt/errors.hpp"

namespace qt::exact {

Rat make_rat(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

namespace {

Integer parse_integer(std::string_view text, std::size_t offset) {
    if (text.empty()) throw ParseError("empty integer", offset);
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') i = 1;
    if (i == text.size()) throw ParseError("sign without digits", offset);
    for (std::size_t k = i; k < text.size(); ++k) {
        if (!std::isdigit(static_cast<unsigned char>(text[k]))) {
            throw ParseError("unexpected character '" + std::string(1, text[k]) + "'", offset + k);
        }
    }
    std::string digits(text.substr(text[0] == '+' ? 1 : 0));
    return Integer(digits, 10);
}

}  // namespace

Rat parse_rat(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(parse_integer(text, 0));
    Integer num = parse_integer(text.substr(0, slash), 0);
    Integer den = parse_integer(text.substr(slash + 1), slash + 1);
    if (den == 0) throw ParseError("zero denominator", slash + 1);
    return make_rat(num, den);
}

std::string to_string(const Integer& x) { return x.get_str(); }

std::string to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

bool is_integer(const Rat& x) { return x.get_den() == 1; }

Integer floor_sqrt(const Integer& n) {
    if (n < 0) throw DomainError("square root of a negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer lcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Integer mod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Integer pow(const Integer& base, unsigned long exponent) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

bool is_prime(const Integer& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

constexpr unsigned long kTrialLimit = 20000;

// Brent's variant of Pollard rho. Returns a nontrivial factor of composite n.
Integer pollard_brent(const Integer& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Integer y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1;
        constexpr unsigned long m = 128;
        auto step = [&](const Integer& v) {
            Integer t = v * v + c;
            return mod(t, n);
        };
        do {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = step(y);
            unsigned long k = 0;
            do {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = step(y);
                    Integer diff = x - y;
                    q = mod(q * abs(diff), n);
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd(abs(Integer(x - ys)), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(const Integer& n, std::vector<Integer>& primes) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    if (mpz_perfect_power_p(n.get_mpz_t())) {
        for (unsigned long k = 2;; ++k) {
            Integer root;
            if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
                std::vector<Integer> sub;
                factor_into(root, sub);
                for (unsigned long i = 0; i < k; ++i) primes.insert(primes.end(), sub.begin(), sub.end());
                return;
            }
        }
    }
    Integer d = pollard_brent(n);
    factor_into(d, primes);
    factor_into(n / d, primes);
}

}  // namespace

std::vector<PrimePower> factor_integer(const Integer& n) {
    if (n == 0) throw DomainError("factorization of zero");
    Integer m = abs(n);
    std::vector<Integer> primes;
    for (unsigned long p = 2; p <= kTrialLimit && Integer(p) * p <= m; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            primes.emplace_back(p);
            m /= p;
        }
    }
    if (m > 1) factor_into(m, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<PrimePower> out;
    for (const auto& p : primes) {
        if (!out.empty() && out.back().prime == p) {
            ++out.back().exponent;
        } else {
            out.push_back({p, 1});
        }
    }
    return out;
}

std::vector<Integer> prime_divisors(const Integer& n) {
    std::vector<Integer> out;
    for (const auto& pp : factor_integer(n)) out.push_back(pp.prime);
    return out;
}

std::vector<Integer> divisors(const Integer& n) {
    std::vector<Integer> out{1};
    for (const auto& [p, e] : factor_integer(n)) {
        const std::size_t base = out.size();
        Integer pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::pair<Integer, unsigned> as_prime_power(const Integer& n) {
    if (n < 2) return {0, 0};
    auto f = factor_integer(n);
    if (f.size() != 1) return {0, 0};
    return {f[0].prime, f[0].exponent};
}

long padic_valuation(const Integer& x, const Integer& p) {
    if (x == 0) throw DomainError("p-adic valuation of zero");
    if (p < 2) throw DomainError("valuation at a non-prime");
    Integer r;
    return static_cast<long>(mpz_remove(r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t()));
}

long padic_valuation(const Rat& x, const Integer& p) {
    if (x == 0) throw DomainError("p-adic valuation of zero");
    return padic_valuation(x.get_num(), p) - padic_valuation(x.get_den(), p);
}

namespace {

int jacobi_odd(Integer a, Integer n) {
    // n odd, positive
    a = mod(a, n);
    int result = 1;
    while (a != 0) {
        while (mpz_even_p(a.get_mpz_t())) {
            a /= 2;
            unsigned long r8 = mpz_fdiv_ui(n.get_mpz_t(), 8);
            if (r8 == 3 || r8 == 5) result = -result;
        }
        std::swap(a, n);
        if (mpz_fdiv_ui(a.get_mpz_t(), 4) == 3 && mpz_fdiv_ui(n.get_mpz_t(), 4) == 3) result = -result;
        a = mod(a, n);
    }
    return n == 1 ? result : 0;
}

}  // namespace

int kronecker_symbol(const Integer& a, const Integer& n_in) {
    if (n_in == 0) return abs(a) == 1 ? 1 : 0;
    int result = 1;
    Integer n = n_in;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    unsigned long v = mpz_scan1(n.get_mpz_t(), 0);
    if (v > 0) {
        if (mpz_even_p(a.get_mpz_t())) return 0;
        n >>= v;
        unsigned long a8 = mpz_fdiv_ui(a.get_mpz_t(), 8);
        if ((v & 1) && (a8 == 3 || a8 == 5)) result = -result;
    }
    if (n == 1) return result;
    return result * jacobi_odd(a, n);
}

std::string to_string(const Place& v) { return v.is_infinite() ? "inf" : v.p.get_str(); }

namespace {

// Representative of the square class of x as an integer: num * den.
Integer integral_representative(const Rat& x) { return x.get_num() * x.get_den(); }

int parity(const Integer& x) { return mpz_odd_p(x.get_mpz_t()) ? 1 : 0; }

}  // namespace

int hilbert_symbol(const Rat& a_in, const Rat& b_in, const Place& v) {
    if (a_in == 0 || b_in == 0) throw DomainError("Hilbert symbol with a zero argument");
    Integer a = integral_representative(a_in);
    Integer b = integral_representative(b_in);
    if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
    const Integer& p = v.p;
    if (!is_prime(p)) throw DomainError("Hilbert symbol at a non-prime " + p.get_str());
    long alpha = padic_valuation(a, p);
    long beta = padic_valuation(b, p);
    Integer u = a, w = b;
    mpz_remove(u.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    mpz_remove(w.get_mpz_t(), b.get_mpz_t(), p.get_mpz_t());
    if (p == 2) {
        auto eps = [](const Integer& x) { return parity(Integer(mod(x, 4) - 1) / 2); };
        auto omega = [](const Integer& x) {
            Integer r = mod(x, 8);
            return parity(Integer((r * r - 1) / 8));
        };
        long e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        return (e & 1) ? -1 : 1;
    }
    int sign = 1;
    if ((alpha * beta) & 1) {
        if (mpz_fdiv_ui(p.get_mpz_t(), 4) == 3) sign = -1;
    }
    int ls_u = kronecker_symbol(u, p);
    int ls_w = kronecker_symbol(w, p);
    if (beta & 1) sign *= ls_u;
    if (alpha & 1) sign *= ls_w;
    return sign;
}

SquareClass rational_square_class(const Rat& x) {
    if (x == 0) throw DomainError("square class of zero");
    Integer n = integral_representative(x);
    Integer sqf = n < 0 ? -1 : 1;
    for (const auto& [p, e] : factor_integer(n)) {
        if (e & 1) sqf *= p;
    }
    return {sqf, x > 0 && is_square(x.get_num()) && is_square(x.get_den())};
}

bool is_rational_square(const Rat& x) {
    if (x == 0) return true;
    return x > 0 && is_square(x.get_num()) && is_square(x.get_den());
}

}  // namespace qt::exact
