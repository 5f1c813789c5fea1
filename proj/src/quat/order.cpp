#include "qt/quat/order.hpp"

#include <algorithm>
#include <limits>

#include "qt/errors.hpp"

namespace qt::quat {

using exact::IntMatrix;
using exact::RatMatrix;

namespace {

using RatRow = std::array<Rat, 4>;

// HNF basis of the Z-span of elts (rows of rational coordinates).
std::vector<RatRow> lattice_basis(const std::vector<QuatElt>& elts) {
    Integer den = 1;
    for (const auto& e : elts)
        for (const auto& c : e.coords()) den = exact::lcm(den, c.get_den());
    IntMatrix rows;
    for (const auto& e : elts) {
        std::vector<Integer> r(4);
        for (std::size_t k = 0; k < 4; ++k) r[k] = Rat(e[k] * den).get_num();
        rows.push_back(std::move(r));
    }
    IntMatrix h = exact::hermite_normal_form(std::move(rows));
    std::vector<RatRow> out;
    for (const auto& r : h) {
        RatRow row;
        for (std::size_t k = 0; k < 4; ++k) row[k] = exact::make_rat(r[k], den);
        out.push_back(row);
    }
    return out;
}

std::vector<QuatElt> to_elts(const QuatAlgebra& alg, const std::vector<RatRow>& rows) {
    std::vector<QuatElt> out;
    for (const auto& r : rows) out.emplace_back(alg, r);
    return out;
}

bool is_integral_lattice(const std::vector<QuatElt>& basis) {
    for (const auto& x : basis) {
        if (!exact::is_integer(x.nrd()) || !exact::is_integer(x.trd())) return false;
        for (const auto& y : basis)
            if (!exact::is_integer((x * y).trd())) return false;
    }
    return true;
}

bool lex_less(const IntVec4& a, const IntVec4& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

long to_ll(const Integer& x) {
    if (!x.fits_slong_p()) throw UnsupportedError("order too large for bounded search");
    return x.get_si();
}

}  // namespace

QuatOrder::QuatOrder(const QuatAlgebra& alg, std::array<QuatElt, 4> basis) : alg_(alg), basis_(std::move(basis)) {
    RatMatrix m(4, std::vector<Rat>(4));
    for (std::size_t i = 0; i < 4; ++i) {
        if (!(basis_[i].algebra() == alg_)) throw DomainError("basis element from another algebra");
        for (std::size_t k = 0; k < 4; ++k) m[i][k] = basis_[i][k];
    }
    if (exact::determinant(m) == 0) throw InvariantError("order basis is not of rank 4");
    inverse_ = exact::inverse(m);
    if (!contains(QuatElt::one(alg_))) throw InvariantError("order does not contain 1");
    for (std::size_t i = 0; i < 4; ++i) {
        Rat t = basis_[i].trd(), n = basis_[i].nrd();
        if (!exact::is_integer(t) || !exact::is_integer(n)) throw InvariantError("order basis is not integral");
        traces_[i] = t.get_num();
        for (std::size_t j = 0; j < 4; ++j) {
            auto c = coordinates(basis_[i] * basis_[j]);
            for (std::size_t k = 0; k < 4; ++k) {
                if (!exact::is_integer(c[k])) throw InvariantError("lattice is not closed under multiplication");
                mult_[i][j][k] = c[k].get_num();
            }
        }
    }
    norm_gram_.assign(4, std::vector<Integer>(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) norm_gram_[i][j] = (basis_[i] * basis_[j].conj()).trd().get_num();
}

QuatOrder QuatOrder::standard(const QuatAlgebra& alg) {
    if (!exact::is_integer(alg.a) || !exact::is_integer(alg.b))
        throw DomainError("standard order needs integral a, b");
    return QuatOrder(alg, {QuatElt::one(alg), QuatElt::i(alg), QuatElt::j(alg), QuatElt::ij(alg)});
}

QuatOrder QuatOrder::generated_by(const QuatAlgebra& alg, const std::vector<QuatElt>& gens) {
    std::vector<QuatElt> elts{QuatElt::one(alg)};
    elts.insert(elts.end(), gens.begin(), gens.end());
    std::vector<RatRow> current = lattice_basis(elts);
    for (;;) {
        auto basis = to_elts(alg, current);
        if (!is_integral_lattice(basis)) throw InvariantError("generated ring is not integral");
        std::vector<QuatElt> next = basis;
        for (const auto& x : basis)
            for (const auto& y : basis) next.push_back(x * y);
        auto rows = lattice_basis(next);
        if (rows == current) break;
        current = std::move(rows);
    }
    if (current.size() != 4) throw InvariantError("generated ring has rank " + std::to_string(current.size()));
    auto basis = to_elts(alg, current);
    return QuatOrder(alg, {basis[0], basis[1], basis[2], basis[3]});
}

std::array<Rat, 4> QuatOrder::coordinates(const QuatElt& x) const {
    if (!(x.algebra() == alg_)) throw DomainError("element of another algebra");
    std::array<Rat, 4> c;
    for (std::size_t k = 0; k < 4; ++k) {
        Rat s = 0;
        for (std::size_t i = 0; i < 4; ++i) s += x[i] * inverse_[i][k];
        c[k] = s;
    }
    return c;
}

bool QuatOrder::contains(const QuatElt& x) const {
    for (const auto& c : coordinates(x))
        if (!exact::is_integer(c)) return false;
    return true;
}

IntVec4 QuatOrder::integral_coordinates(const QuatElt& x) const {
    auto c = coordinates(x);
    IntVec4 out;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!exact::is_integer(c[k])) throw DomainError(to_string(x) + " is not in the order");
        out[k] = c[k].get_num();
    }
    return out;
}

QuatElt QuatOrder::element(const IntVec4& c) const {
    std::array<Rat, 4> v{0, 0, 0, 0};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) v[k] += Rat(c[i]) * basis_[i][k];
    return QuatElt(alg_, v);
}

Integer QuatOrder::reduced_discriminant() const {
    IntMatrix g(4, std::vector<Integer>(4));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Rat t = (basis_[i] * basis_[j]).trd();
            if (!exact::is_integer(t)) throw InvariantError("non-integral trace form");
            g[i][j] = t.get_num();
        }
    Integer d = abs(exact::determinant(g));
    if (!exact::is_square(d)) throw InvariantError("trace form determinant is not a square");
    return exact::floor_sqrt(d);
}

bool QuatOrder::is_maximal() const { return reduced_discriminant() == discriminant(alg_); }

QuatOrder saturate_to_maximal(const QuatOrder& order) {
    const Integer disc = discriminant(order.algebra());
    QuatOrder current = order;
    for (;;) {
        const Integer d = current.reduced_discriminant();
        if (d == disc) return current;
        const Integer excess = d / disc;
        bool enlarged = false;
        for (const auto& p : exact::prime_divisors(excess)) {
            const long pl = p.get_si();
            const long total = pl * pl * pl * pl;
            for (long code = 1; code < total && !enlarged; ++code) {
                IntVec4 v;
                long rest = code;
                for (auto& c : v) {
                    c = rest % pl;
                    rest /= pl;
                }
                QuatElt x = Rat(1, p.get_ui()) * current.element(v);
                if (!exact::is_integer(x.trd()) || !exact::is_integer(x.nrd())) continue;
                try {
                    std::vector<QuatElt> gens(current.basis().begin(), current.basis().end());
                    gens.push_back(x);
                    current = QuatOrder::generated_by(current.algebra(), gens);
                    enlarged = true;
                } catch (const InvariantError&) {
                }
            }
            if (enlarged) break;
        }
        if (!enlarged) throw InvariantError("no integral enlargement found for a non-maximal order");
    }
}

bool is_in_normalizer(const QuatOrder& order, const QuatElt& b) {
    if (b.is_zero()) throw DomainError("zero is not in the normalizer");
    QuatElt binv = b.inverse();
    for (const auto& e : order.basis())
        if (!order.contains(b * e * binv)) return false;
    return true;
}

NormalizerTest normalizer_test(const QuatOrder& order, const QuatElt& b) {
    bool in = is_in_normalizer(order, b);
    auto c = order.coordinates(b);
    Integer den = 1;
    for (const auto& x : c) den = exact::lcm(den, x.get_den());
    IntVec4 v;
    Integer g = 0;
    for (std::size_t k = 0; k < 4; ++k) {
        v[k] = Rat(c[k] * den).get_num();
        g = exact::gcd(g, v[k]);
    }
    for (auto& x : v) x /= g;
    QuatElt prim = order.element(v);
    Rat n = prim.nrd();
    Integer disc = discriminant(order.algebra());
    bool divides = mpz_divisible_p(disc.get_mpz_t(), n.get_num().get_mpz_t()) != 0;
    return {in, prim, n, divides};
}

std::vector<QuatElt> find_trace_zero(const QuatOrder& order, const Integer& m, int height) {
    // trd(x) = 0 and x^2 = m  <=>  trd(x) = 0 and nrd(x) = -m
    long g[4][4], t[4];
    for (int i = 0; i < 4; ++i) {
        t[i] = to_ll(order.basis_traces()[i]);
        for (int j = 0; j < 4; ++j) g[i][j] = to_ll(order.norm_gram()[i][j]);
    }
    const long target = -2 * to_ll(m);
    int k = 0;
    while (t[k] == 0) ++k;
    int free_idx[3], n = 0;
    for (int i = 0; i < 4; ++i)
        if (i != k) free_idx[n++] = i;
    std::vector<IntVec4> hits;
    long x[4];
    for (long a = -height; a <= height; ++a)
        for (long b = -height; b <= height; ++b)
            for (long c = -height; c <= height; ++c) {
                x[free_idx[0]] = a;
                x[free_idx[1]] = b;
                x[free_idx[2]] = c;
                long s = t[free_idx[0]] * a + t[free_idx[1]] * b + t[free_idx[2]] * c;
                if (s % t[k] != 0) continue;
                x[k] = -s / t[k];
                if (x[k] < -height || x[k] > height) continue;
                long q = 0;
                for (int i = 0; i < 4; ++i)
                    for (int j = 0; j < 4; ++j) q += g[i][j] * x[i] * x[j];
                if (q == target) hits.push_back({x[0], x[1], x[2], x[3]});
            }
    std::sort(hits.begin(), hits.end(), lex_less);
    std::vector<QuatElt> out;
    for (const auto& h : hits) {
        QuatElt e = order.element(h);
        if (e * e == QuatElt::scalar(order.algebra(), Rat(m))) out.push_back(e);
    }
    return out;
}

std::map<Integer, QuatElt> atkin_lehner_group(const QuatOrder& order, int height) {
    if (!order.is_maximal()) throw DomainError("Atkin-Lehner representatives need a maximal order");
    const Integer disc = discriminant(order.algebra());
    long g[4][4], t[4];
    for (int i = 0; i < 4; ++i) {
        t[i] = to_ll(order.basis_traces()[i]);
        for (int j = 0; j < 4; ++j) g[i][j] = to_ll(order.norm_gram()[i][j]);
    }
    std::map<Integer, QuatElt> out;
    for (const auto& d : exact::divisors(disc)) {
        if (d == 1) {
            out.emplace(d, QuatElt::one(order.algebra()));
            continue;
        }
        const long target = 2 * to_ll(d);
        bool found = false;
        for (int h = 1; h <= height && !found; ++h) {
            IntVec4 best;
            long best_trace = std::numeric_limits<long>::max();
            long x[4];
            for (x[0] = -h; x[0] <= h; ++x[0])
                for (x[1] = -h; x[1] <= h; ++x[1])
                    for (x[2] = -h; x[2] <= h; ++x[2])
                        for (x[3] = -h; x[3] <= h; ++x[3]) {
                            long mx = 0;
                            for (auto v : x) mx = std::max(mx, v < 0 ? -v : v);
                            if (mx != h) continue;
                            long q = 0;
                            for (int i = 0; i < 4; ++i)
                                for (int j = 0; j < 4; ++j) q += g[i][j] * x[i] * x[j];
                            if (q != target && q != -target) continue;
                            long tr = 0;
                            for (int i = 0; i < 4; ++i) tr += t[i] * x[i];
                            tr = tr < 0 ? -tr : tr;
                            IntVec4 v{x[0], x[1], x[2], x[3]};
                            if (tr > best_trace || (tr == best_trace && !lex_less(v, best))) continue;
                            if (!is_in_normalizer(order, order.element(v))) continue;
                            best = v;
                            best_trace = tr;
                            found = true;
                        }
            if (found) out.emplace(d, order.element(best));
        }
        if (!found) throw NotFoundError("no Atkin-Lehner representative of norm " + d.get_str() + " within height");
    }
    return out;
}

nlohmann::json order_to_json(const QuatOrder& order) {
    nlohmann::json doc;
    doc["algebra"] = {exact::to_string(order.algebra().a), exact::to_string(order.algebra().b)};
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& e : order.basis()) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& c : e.coords()) row.push_back(exact::to_string(c));
        basis.push_back(row);
    }
    doc["basis"] = basis;
    return doc;
}

namespace {

Rat json_rat(const nlohmann::json& v, const char* field) {
    if (v.is_number_integer()) return Rat(Integer(v.get<long>()));
    if (v.is_string()) {
        try {
            return exact::parse_rat(v.get<std::string>());
        } catch (const ParseError& e) {
            throw IngestError(std::string(field) + ": " + e.what());
        }
    }
    throw IngestError(std::string(field) + ": expected a rational");
}

}  // namespace

QuatOrder order_from_json(const nlohmann::json& doc) {
    if (!doc.contains("algebra") || !doc["algebra"].is_array() || doc["algebra"].size() != 2)
        throw IngestError("algebra: expected [a, b]");
    if (!doc.contains("basis") || !doc["basis"].is_array() || doc["basis"].size() != 4)
        throw IngestError("basis: expected 4 rows");
    QuatAlgebra alg(json_rat(doc["algebra"][0], "algebra"), json_rat(doc["algebra"][1], "algebra"));
    std::vector<QuatElt> rows;
    for (const auto& r : doc["basis"]) {
        if (!r.is_array() || r.size() != 4) throw IngestError("basis: rows need 4 entries");
        rows.emplace_back(alg, std::array<Rat, 4>{json_rat(r[0], "basis"), json_rat(r[1], "basis"),
                                                  json_rat(r[2], "basis"), json_rat(r[3], "basis")});
    }
    return QuatOrder(alg, {rows[0], rows[1], rows[2], rows[3]});
}

}  // namespace qt::quat
