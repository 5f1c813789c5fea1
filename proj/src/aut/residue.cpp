#include "qt/aut/residue.hpp"

#include <algorithm>
#include <set>

#include "qt/errors.hpp"

namespace qt::aut {

namespace {

long mod_long(const Integer& x, long n) { return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), n)); }

long mod_long(long x, long n) {
    long r = x % n;
    return r < 0 ? r + n : r;
}

long inverse_mod(long a, long p) {
    long t = 0, new_t = 1, r = p, new_r = mod_long(a, p);
    while (new_r != 0) {
        long q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1) throw DomainError("not invertible modulo " + std::to_string(p));
    return mod_long(t, p);
}

}  // namespace

ResidueRing::ResidueRing(const QuatOrder& order, long modulus) : order_(order), n_(modulus) {
    if (modulus < 2) throw DomainError("modulus must be at least 2");
    const auto& m = order.structure_constants();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) mult_[i][j][k] = mod_long(m[i][j][k], n_);
    // nrd(x) = x^T G x / 2; keep 2N-residues so the halving is exact
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) gram_[i][j] = mod_long(order.norm_gram()[i][j], 2 * n_);
    one_ = reduce(QuatElt::one(order.algebra()));
}

Residue ResidueRing::reduce(const quat::IntVec4& c) const {
    return {mod_long(c[0], n_), mod_long(c[1], n_), mod_long(c[2], n_), mod_long(c[3], n_)};
}

Residue ResidueRing::reduce(const QuatElt& x) const { return reduce(order_.integral_coordinates(x)); }

Residue ResidueRing::mul(const Residue& x, const Residue& y) const {
    Residue r{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (y[j] == 0) continue;
            long c = x[i] * y[j] % n_;
            for (int k = 0; k < 4; ++k) r[k] = (r[k] + c * mult_[i][j][k]) % n_;
        }
    }
    return r;
}

Residue ResidueRing::add(const Residue& x, const Residue& y) const {
    return {(x[0] + y[0]) % n_, (x[1] + y[1]) % n_, (x[2] + y[2]) % n_, (x[3] + y[3]) % n_};
}

Residue ResidueRing::neg(const Residue& x) const {
    return {(n_ - x[0]) % n_, (n_ - x[1]) % n_, (n_ - x[2]) % n_, (n_ - x[3]) % n_};
}

Residue ResidueRing::scale(long c, const Residue& x) const {
    c = mod_long(c, n_);
    return {c * x[0] % n_, c * x[1] % n_, c * x[2] % n_, c * x[3] % n_};
}

long ResidueRing::nrd(const Residue& x) const {
    long q = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) q = (q + gram_[i][j] * x[i] % (2 * n_) * x[j]) % (2 * n_);
    return (q / 2) % n_;
}

bool ResidueRing::is_unit(const Residue& x) const { return std::gcd(nrd(x), n_) == 1; }

Residue ResidueRing::from_code(long code) const {
    Residue r;
    for (auto& c : r) {
        c = code % n_;
        code /= n_;
    }
    return r;
}

exact::IntMatrix conjugation_matrix(const QuatOrder& order, const QuatElt& g) {
    if (!quat::is_in_normalizer(order, g)) throw DomainError(quat::to_string(g) + " does not normalize the order");
    QuatElt ginv = g.inverse();
    exact::IntMatrix m;
    for (const auto& e : order.basis()) {
        auto c = order.integral_coordinates(ginv * e * g);
        m.push_back({c[0], c[1], c[2], c[3]});
    }
    return m;
}

Residue apply(const exact::IntMatrix& m, const Residue& x, long modulus) {
    Residue r{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        for (int k = 0; k < 4; ++k) r[k] = mod_long(r[k] + x[i] * mod_long(m[i][k], modulus), modulus);
    }
    return r;
}

Integer Submodule::order() const { return exact::pow(Integer(ell), basis.size()); }

Submodule span_mod_ell(std::vector<Residue> rows, long ell) {
    std::size_t r = 0;
    for (int c = 0; c < 4 && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] % ell == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        long inv = inverse_mod(rows[r][c], ell);
        for (auto& x : rows[r]) x = mod_long(x * inv, ell);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] % ell == 0) continue;
            long f = rows[i][c];
            for (int k = 0; k < 4; ++k) rows[i][k] = mod_long(rows[i][k] - f * rows[r][k], ell);
        }
        ++r;
    }
    rows.resize(r);
    return Submodule{ell, rows};
}

Submodule generated_by(const ResidueRing& ring, const Residue& x) {
    std::vector<Residue> rows;
    for (long k = 0; k < 4; ++k) {
        Residue e{0, 0, 0, 0};
        e[k] = 1;
        rows.push_back(ring.mul(e, x));
    }
    return span_mod_ell(std::move(rows), ring.modulus());
}

std::vector<Submodule> submodule_lattice_mod_ell(const QuatOrder& order, long ell) {
    if (!exact::is_prime(ell)) throw DomainError("submodule classification needs a prime");
    // Left ideals of O/ell O are principal (it is M_2(F_ell) or a local ring
    // with principal maximal ideal), so O*x over all x lists every submodule.
    ResidueRing ring(order, ell);
    std::set<std::vector<Residue>> seen;
    std::vector<Submodule> out;
    for (long code = 0; code < ring.size(); ++code) {
        Submodule s = generated_by(ring, ring.from_code(code));
        if (seen.insert(s.basis).second) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const Submodule& a, const Submodule& b) {
        if (a.dimension() != b.dimension()) return a.dimension() < b.dimension();
        return a.basis < b.basis;
    });
    return out;
}

Residue three_dim_generator_check(const QuatOrder& order, long ell, const std::vector<Residue>& v) {
    if (span_mod_ell(v, ell).dimension() != 3) throw DomainError("V must be 3-dimensional");
    ResidueRing ring(order, ell);
    const long total = ell * ell * ell;
    for (long code = 1; code < total; ++code) {
        long c[3] = {code % ell, (code / ell) % ell, code / (ell * ell)};
        Residue x{0, 0, 0, 0};
        for (int i = 0; i < 3; ++i) x = ring.add(x, ring.scale(c[i], v[i]));
        if (generated_by(ring, x).dimension() == 4) return x;
    }
    throw InvariantError("no module generator in a 3-dimensional subspace");
}

QuatElt canonical_aut_rep(const QuatOrder& order, const QuatElt& gamma) {
    auto t = quat::normalizer_test(order, gamma);
    auto c = order.integral_coordinates(t.primitive);
    for (const auto& x : c) {
        if (x == 0) continue;
        return x < 0 ? -t.primitive : t.primitive;
    }
    return t.primitive;
}

EnhancedElement enhanced_identity(const ResidueRing& ring) {
    return {QuatElt::one(ring.order().algebra()), ring.one()};
}

EnhancedElement enhanced_mul(const ResidueRing& ring, const EnhancedElement& e1, const EnhancedElement& e2) {
    if (!ring.is_unit(e1.x) || !ring.is_unit(e2.x)) throw InvariantError("enhanced element with a non-unit");
    auto m = conjugation_matrix(ring.order(), e2.gamma);
    Residue x = ring.mul(apply(m, e1.x, ring.modulus()), e2.x);
    return {canonical_aut_rep(ring.order(), e1.gamma * e2.gamma), x};
}

bool enhanced_equal(const ResidueRing& ring, const EnhancedElement& a, const EnhancedElement& b) {
    return a.x == b.x && canonical_aut_rep(ring.order(), a.gamma) == canonical_aut_rep(ring.order(), b.gamma);
}

}  // namespace qt::aut
