#include "qt/newform/newform.hpp"

#include <algorithm>
#include <fstream>

#include "qt/errors.hpp"
#include "qt/quat/algebra.hpp"

namespace qt::newform {

namespace {

Integer json_integer(const nlohmann::json& v, const std::string& field) {
    if (v.is_number_integer()) return Integer(v.get<long>());
    if (v.is_string()) {
        try {
            return Integer(v.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw IngestError(field + ": expected an integer");
}

// |u| + |v| sqrt m <= 2 sqrt p, exactly.
bool within_weil_bound(const QuadElt& a, const Integer& m, const Integer& p) {
    Rat A = abs(a.u), B = abs(a.v);
    Rat slack = Rat(4 * p) - A * A - B * B * m;
    return slack >= 0 && slack * slack >= 4 * A * A * B * B * m;
}

// Fundamental discriminants d != 1 of quadratic fields unramified outside N.
std::vector<Integer> candidate_discriminants(const Integer& level) {
    std::vector<Integer> odd;
    bool two = false;
    for (const auto& p : exact::prime_divisors(level)) {
        if (p == 2) {
            two = true;
            continue;
        }
        odd.push_back(exact::mod(p, 4) == 1 ? p : Integer(-p));
    }
    std::vector<Integer> twos{1};
    if (two) twos.insert(twos.end(), {-4, 8, -8});
    std::vector<Integer> out;
    for (unsigned long mask = 0; mask < (1UL << odd.size()); ++mask) {
        Integer base = 1;
        for (std::size_t k = 0; k < odd.size(); ++k)
            if (mask >> k & 1) base *= odd[k];
        for (const auto& t : twos)
            if (base * t != 1) out.push_back(base * t);
    }
    std::sort(out.begin(), out.end(), [](const Integer& a, const Integer& b) {
        if (abs(a) != abs(b)) return abs(a) < abs(b);
        return a < b;
    });
    return out;
}

}  // namespace

Integer NewformRecord::coefficient_bound() const {
    Integer bound = 1;
    for (Integer p = 2;; mpz_nextprime(p.get_mpz_t(), p.get_mpz_t())) {
        if (!ap.count(p)) return bound;
        bound = p;
    }
}

NewformRecord load_record(const nlohmann::json& doc) {
    if (!doc.is_object()) throw IngestError("record: expected an object");
    for (const char* field : {"label", "level", "weight", "m", "ap"})
        if (!doc.contains(field)) throw IngestError(std::string(field) + ": missing");
    NewformRecord r;
    if (!doc["label"].is_string()) throw IngestError("label: expected a string");
    r.label = doc["label"].get<std::string>();
    r.level = json_integer(doc["level"], "level");
    if (r.level < 1) throw IngestError("level: must be positive");
    if (!doc["weight"].is_number_integer() || doc["weight"].get<int>() != 2)
        throw IngestError("weight: only weight 2 is supported");
    r.m = json_integer(doc["m"], "m");
    if (r.m <= 1 || exact::rational_square_class(Rat(r.m)).squarefree != r.m)
        throw IngestError("m: expected a squarefree integer > 1");
    if (!doc["ap"].is_object()) throw IngestError("ap: expected an object keyed by primes");
    bool irrational = false;
    for (const auto& [key, value] : doc["ap"].items()) {
        Integer p;
        try {
            p = Integer(key);
        } catch (const std::invalid_argument&) {
            throw IngestError("ap: key '" + key + "' is not an integer");
        }
        if (!exact::is_prime(p)) throw IngestError("ap: key " + key + " is not prime");
        if (!value.is_array() || value.size() != 4) throw IngestError("ap[" + key + "]: expected [un, ud, vn, vd]");
        Integer c[4];
        for (int k = 0; k < 4; ++k) c[k] = json_integer(value[k], "ap[" + key + "]");
        if (c[1] == 0 || c[3] == 0) throw IngestError("ap[" + key + "]: zero denominator");
        QuadElt a{exact::make_rat(c[0], c[1]), exact::make_rat(c[2], c[3])};
        if (!within_weil_bound(a, r.m, p)) throw IngestError("ap[" + key + "]: violates |a_p| <= 2 sqrt p");
        irrational = irrational || a.v != 0;
        r.ap.emplace(p, a);
    }
    if (doc.contains("inner_twists")) {
        if (!doc["inner_twists"].is_array()) throw IngestError("inner_twists: expected an array");
        for (const auto& d : doc["inner_twists"]) r.inner_twist_discs.push_back(json_integer(d, "inner_twists"));
    }
    if (doc.contains("self_twist")) {
        if (!doc["self_twist"].is_boolean()) throw IngestError("self_twist: expected a boolean");
        r.has_self_twist = doc["self_twist"].get<bool>();
    }
    if (!irrational && !r.has_self_twist.value_or(false))
        throw IngestError("ap: no coefficient generates Q(sqrt m) and the form is not flagged CM");
    return r;
}

NewformRecord load_record_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& ex) {
        throw IngestError(path + ": " + ex.what());
    }
    return load_record(doc);
}

nlohmann::json record_to_json(const NewformRecord& r) {
    nlohmann::json doc;
    doc["label"] = r.label;
    doc["level"] = r.level.get_si();
    doc["weight"] = r.weight;
    doc["m"] = r.m.get_si();
    doc["ap"] = nlohmann::json::object();
    for (const auto& [p, a] : r.ap)
        doc["ap"][p.get_str()] = {a.u.get_num().get_si(), a.u.get_den().get_si(), a.v.get_num().get_si(),
                                  a.v.get_den().get_si()};
    doc["inner_twists"] = nlohmann::json::array();
    for (const auto& d : r.inner_twist_discs) doc["inner_twists"].push_back(d.get_si());
    if (r.has_self_twist) doc["self_twist"] = *r.has_self_twist;
    return doc;
}

Integer lp_at_one(const NewformRecord& r, const Integer& p) {
    if (!exact::is_prime(p)) throw DomainError(p.get_str() + " is not prime");
    if (mpz_divisible_p(r.level.get_mpz_t(), p.get_mpz_t()))
        throw DomainError("p = " + p.get_str() + " divides the level " + r.level.get_str());
    auto it = r.ap.find(p);
    if (it == r.ap.end()) throw DomainError("a_" + p.get_str() + " is not in the record");
    const auto& [u, v] = it->second;
    Rat value = (1 - u + p) * (1 - u + p) - v * v * r.m;
    if (!exact::is_integer(value)) throw InvariantError("non-integral L_p(1) at p = " + p.get_str());
    return value.get_num();
}

Integer torsion_divisor_bound(const NewformRecord& r, const std::vector<Integer>& primes) {
    if (primes.empty()) throw DomainError("torsion bound needs at least one prime");
    Integer g = 0;
    for (const auto& p : primes) g = exact::gcd(g, lp_at_one(r, p));
    return g;
}

TwistReport twist_checks(const NewformRecord& r, const Integer& min_bound) {
    TwistReport rep{TwistStatus::Conclusive, false, false, {}, {}, r.coefficient_bound()};
    if (rep.tested_up_to < min_bound) rep.status = TwistStatus::Inconclusive;
    for (const auto& d : candidate_discriminants(r.level)) {
        bool inner = true, cm = d < 0;
        for (const auto& [p, a] : r.ap) {
            if (p > rep.tested_up_to) break;
            if (mpz_divisible_p(r.level.get_mpz_t(), p.get_mpz_t()) || mpz_divisible_p(d.get_mpz_t(), p.get_mpz_t()))
                continue;
            int chi = exact::kronecker_symbol(d, p);
            // a_p chi(p) = u - v sqrt m
            if (chi == 1 && a.v != 0) inner = false;
            if (chi == -1 && a.u != 0) inner = false;
            if (chi == -1 && (a.u != 0 || a.v != 0)) cm = false;
        }
        if (inner) rep.inner_twists.push_back(d);
        if (cm) rep.cm_candidates.push_back(d);
    }
    if (r.has_self_twist) {
        rep.self_twist = *r.has_self_twist;
    } else {
        rep.self_twist = !rep.cm_candidates.empty();
        rep.self_twist_heuristic = true;
    }
    return rep;
}

PqmVerdict pqm_criterion(const NewformRecord& r, const Integer& min_bound) {
    auto tw = twist_checks(r, min_bound);
    PqmVerdict v{tw.status, false, 0, 1, tw.self_twist_heuristic};
    if (tw.status == TwistStatus::Inconclusive) return v;
    for (const auto& d : tw.inner_twists) {
        Integer disc = quat::discriminant(quat::QuatAlgebra(Rat(d), Rat(r.m)));
        if (v.twist_disc == 0 || (v.quaternion_disc == 1 && disc > 1)) {
            v.twist_disc = d;
            v.quaternion_disc = disc;
        }
    }
    v.is_pqm = !tw.self_twist && v.twist_disc != 0 && v.quaternion_disc > 1;
    return v;
}

ConductorShape conductor_admissible(const Integer& cond) {
    if (cond < 1) throw DomainError("conductor must be positive");
    ConductorShape s{false};
    for (const auto& [p, e] : exact::factor_integer(cond)) {
        if (p == 2 || p == 3) {
            if (e % 2) return s;
            (p == 2 ? s.i : s.j) = e / 2;
        } else {
            if (e != 4) return s;
            s.n *= p;
        }
    }
    s.admissible = s.i <= 10 && s.j <= 5;
    return s;
}

}  // namespace qt::newform
