#include "qt/quat/algebra.hpp"

#include "qt/errors.hpp"

namespace qt::quat {

QuatAlgebra::QuatAlgebra(Rat a_, Rat b_) : a(std::move(a_)), b(std::move(b_)) {
    if (a == 0 || b == 0) throw DomainError("quaternion algebra parameters must be nonzero");
}

Ramification ramified_places(const QuatAlgebra& alg) {
    Ramification r;
    r.at_infinity = exact::hilbert_symbol(alg.a, alg.b, exact::Place::infinity()) == -1;
    Integer n = 2 * alg.a.get_num() * alg.a.get_den() * alg.b.get_num() * alg.b.get_den();
    for (const auto& p : exact::prime_divisors(n)) {
        if (exact::hilbert_symbol(alg.a, alg.b, exact::Place::prime(p)) == -1) r.finite_primes.push_back(p);
    }
    if ((r.finite_primes.size() + (r.at_infinity ? 1 : 0)) % 2 != 0)
        throw InvariantError("odd number of ramified places");
    return r;
}

Integer discriminant(const QuatAlgebra& alg) {
    Integer d = 1;
    for (const auto& p : ramified_places(alg).finite_primes) d *= p;
    return d;
}

bool is_division(const QuatAlgebra& alg) {
    auto r = ramified_places(alg);
    return r.at_infinity || !r.finite_primes.empty();
}

QuatElt::QuatElt(const QuatAlgebra& alg, std::array<Rat, 4> coords) : alg_(alg), c_(std::move(coords)) {}

QuatElt QuatElt::scalar(const QuatAlgebra& alg, const Rat& c) { return QuatElt(alg, {c, 0, 0, 0}); }

Rat QuatElt::nrd() const {
    const Rat& a = alg_.a;
    const Rat& b = alg_.b;
    return c_[0] * c_[0] - a * c_[1] * c_[1] - b * c_[2] * c_[2] + a * b * c_[3] * c_[3];
}

QuatElt QuatElt::conj() const { return QuatElt(alg_, {c_[0], -c_[1], -c_[2], -c_[3]}); }

QuatElt QuatElt::inverse() const {
    Rat n = nrd();
    if (n == 0) throw DomainError("element is not invertible");
    return (1 / n) * conj();
}

bool QuatElt::is_zero() const { return c_[0] == 0 && is_scalar(); }

bool QuatElt::is_scalar() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

QuatElt QuatElt::operator-() const { return QuatElt(alg_, {-c_[0], -c_[1], -c_[2], -c_[3]}); }

namespace {

void same_algebra(const QuatElt& x, const QuatElt& y) {
    if (!(x.algebra() == y.algebra())) throw DomainError("elements of different quaternion algebras");
}

}  // namespace

QuatElt operator+(const QuatElt& x, const QuatElt& y) {
    same_algebra(x, y);
    return QuatElt(x.alg_, {x.c_[0] + y.c_[0], x.c_[1] + y.c_[1], x.c_[2] + y.c_[2], x.c_[3] + y.c_[3]});
}

QuatElt operator-(const QuatElt& x, const QuatElt& y) { return x + (-y); }

QuatElt operator*(const QuatElt& x, const QuatElt& y) {
    same_algebra(x, y);
    const Rat& a = x.alg_.a;
    const Rat& b = x.alg_.b;
    const auto& [t1, x1, y1, z1] = x.c_;
    const auto& [t2, x2, y2, z2] = y.c_;
    return QuatElt(x.alg_, {t1 * t2 + a * x1 * x2 + b * y1 * y2 - a * b * z1 * z2,
                            t1 * x2 + x1 * t2 - b * y1 * z2 + b * z1 * y2,
                            t1 * y2 + y1 * t2 + a * x1 * z2 - a * z1 * x2,
                            t1 * z2 + z1 * t2 + x1 * y2 - y1 * x2});
}

QuatElt operator*(const Rat& c, const QuatElt& x) {
    return QuatElt(x.alg_, {c * x.c_[0], c * x.c_[1], c * x.c_[2], c * x.c_[3]});
}

bool QuatElt::operator==(const QuatElt& other) const { return alg_ == other.alg_ && c_ == other.c_; }

std::string to_string(const QuatElt& x) {
    static const char* names[4] = {"", "i", "j", "ij"};
    std::string out;
    for (std::size_t k = 0; k < 4; ++k) {
        const Rat& c = x[k];
        if (c == 0) continue;
        Rat mag = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (k == 0) {
            out += exact::to_string(mag);
        } else {
            if (mag != 1) out += exact::to_string(mag) + "*";
            out += names[k];
        }
    }
    return out.empty() ? "0" : out;
}

}  // namespace qt::quat
