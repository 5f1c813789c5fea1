#pragma once

// Weight-2 newforms with real quadratic coefficient field: ingestion, L-factor
// values at 1, inner twists and the quaternion (PQM) screening.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qt/exact/number.hpp"

namespace qt::newform {

using exact::Integer;
using exact::Rat;

/// u + v sqrt(m).
struct QuadElt {
    Rat u;
    Rat v;

    bool operator==(const QuadElt&) const = default;
};

struct NewformRecord {
    std::string label;
    Integer level;
    int weight = 2;
    /// Squarefree m > 1 with coefficient field Q(sqrt m).
    Integer m;
    std::map<Integer, QuadElt> ap;
    std::vector<Integer> inner_twist_discs;
    /// Source CM flag, when the source supplies one.
    std::optional<bool> has_self_twist;

    /// Largest B such that a_p is known for every prime p <= B.
    Integer coefficient_bound() const;
};

/// Schema: {"label", "level", "weight": 2, "m", "ap": {"p": [un, ud, vn, vd]},
/// "inner_twists": [d], "self_twist": bool}. Throws IngestError naming the field.
NewformRecord load_record(const nlohmann::json& doc);
NewformRecord load_record_file(const std::string& path);
nlohmann::json record_to_json(const NewformRecord& r);

/// Norm of 1 - a_p + p, i.e. (1 - u + p)^2 - v^2 m. Requires p prime, p not dividing N.
Integer lp_at_one(const NewformRecord& r, const Integer& p);
/// gcd of lp_at_one over the primes; the rational torsion of the class divides it.
Integer torsion_divisor_bound(const NewformRecord& r, const std::vector<Integer>& primes);

enum class TwistStatus { Conclusive, Inconclusive };

struct TwistReport {
    TwistStatus status;
    bool self_twist;
    /// The self-twist answer came from the a_p = 0 pattern, not the source flag.
    bool self_twist_heuristic;
    /// Fundamental discriminants d with a_p chi_d(p) = sigma(a_p) for all tested p.
    std::vector<Integer> inner_twists;
    /// Imaginary d whose inert primes all have a_p = 0 (CM candidates).
    std::vector<Integer> cm_candidates;
    Integer tested_up_to;
};

/// Candidate characters are the quadratic characters unramified outside N.
/// Fewer than min_bound known primes gives an inconclusive report.
TwistReport twist_checks(const NewformRecord& r, const Integer& min_bound = 100);

struct PqmVerdict {
    TwistStatus status;
    bool is_pqm;
    Integer twist_disc;
    /// Discriminant of (d, m / Q); 1 when split.
    Integer quaternion_disc;
    bool heuristic;
};

PqmVerdict pqm_criterion(const NewformRecord& r, const Integer& min_bound = 100);

struct ConductorShape {
    bool admissible;
    unsigned i = 0;
    unsigned j = 0;
    Integer n = 1;
};

/// cond = 2^(2i) 3^(2j) N^4 with i <= 10, j <= 5, N squarefree and prime to 6.
ConductorShape conductor_admissible(const Integer& cond);

}  // namespace qt::newform
