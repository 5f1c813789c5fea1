#pragma once

// Dihedral subgroups of Aut(O), their fixed points on O/NO, the mod-2 and
// mod-4 brute-force lemmas, and polarization / distinguished-subring data.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qt/aut/residue.hpp"

namespace qt::aut {

enum class DihedralKind { D1, D2, D3, D4, D6 };

std::string to_string(DihedralKind kind);
/// Throws ParseError for anything but "D1", "D2", "D3", "D4", "D6".
DihedralKind parse_kind(const std::string& text);

/// Presentation elements, by kind:
///   D1: x = b with b^2 = m
///   D2: x = i, y = j with i^2 = m, j^2 = n, ij = -ji
///   D4: x = i, y = j with i^2 = -1, j^2 = m, ij = -ji (group <[1+i], [j]>)
///   D3/D6: x = omega with omega^2 + omega + 1 = 0, y = j with j^2 = m and
///   omega j = j (-1 - omega) (groups <[1+omega], [j]> and <[1-omega], [j]>)
struct Presentation {
    QuatElt x;
    std::optional<QuatElt> y;
};

struct DihedralAction {
    DihedralKind kind;
    QuatOrder order;
    Presentation presentation;
    /// Generators of G as elements of the normalizer.
    std::vector<QuatElt> generators;
    Integer m;
    /// Second parameter for D2; 0 otherwise.
    Integer n;
};

/// Validates the defining relations exactly; throws DomainError naming the
/// violated relation.
DihedralAction build_dihedral_action(const QuatOrder& order, DihedralKind kind, const Presentation& p);

/// Searches trace-zero elements up to height for a presentation of the given
/// kind with parameters m (and n for D2). For D3/D6 the parameter m is j^2.
std::optional<DihedralAction> find_dihedral_action(const QuatOrder& order, DihedralKind kind, const Integer& m,
                                                   const Integer& n = 0, int height = 30);

/// Structure of {x in O/NO : g^{-1} x g = x for every generator g}.
exact::AbelianInvariants residue_fixed_subgroup(const DihedralAction& action, long modulus);
exact::AbelianInvariants residue_fixed_subgroup(const QuatOrder& order, const std::vector<QuatElt>& generators,
                                                long modulus);
/// Same group computed by enumerating all N^4 residues (N <= 4).
exact::AbelianInvariants residue_fixed_subgroup_enumerated(const QuatOrder& order,
                                                           const std::vector<QuatElt>& generators, long modulus);

/// Option sets for (O/NO)^G allowed by the fixed-point theorem, for N prime
/// to 6 and N in {2, 3}.
std::vector<exact::AbelianInvariants> theorem_options(DihedralKind kind, long modulus);

struct InvolutionMod2 {
    /// Fixed points of x -> b^{-1} x b on O/2O.
    exact::AbelianInvariants fixed;
    /// {x in O/2O : bx = xb}.
    exact::AbelianInvariants centralizer;
    /// fixed is (Z/2)^3.
    bool criterion;
    /// 2 | disc(B) and m = 3 mod 4.
    bool arithmetic_predicate;
};

/// Requires b in O and in the normalizer, b^2 = m in Z, m != 1, m | disc.
InvolutionMod2 classify_involution_mod2(const QuatOrder& order, const QuatElt& b);

/// Residues x in O/4O with x = 1 mod 2O and b^{-1} x b x = -1. In sanity
/// mode the congruence condition is dropped and all 256 residues are tried.
/// Without sanity mode requires classify_involution_mod2(...).criterion.
std::vector<Residue> search_mod4_anticommutator(const QuatOrder& order, const QuatElt& b, bool sanity = false);

struct C2C2Mod2 {
    exact::AbelianInvariants fixed;
    bool criterion;
    /// 2 | disc(B) and m, n = 3 mod 4.
    bool arithmetic_predicate;
};

C2C2Mod2 classify_c2c2_mod2(const DihedralAction& action);

struct PolarizationReport {
    /// Squarefree part of disc(B) * nrd(mu).
    Integer degree_class;
    /// Squarefree s with Q(mu) = Q(sqrt s).
    Integer subfield;
    /// (degree_class == 1) iff Q(mu) = Q(sqrt(-disc(B))).
    bool jacobian_consistent;
    /// Set when a C2 x C2 action with (Z/2)^3 fixed points was supplied.
    bool prop_c2c2_applicable = false;
    /// degree_class is even (required when applicable).
    bool prop_c2c2_holds = true;
};

/// Requires trd(mu) = 0 and mu^2 < 0. In jacobian mode a failed consistency
/// check raises DomainError.
PolarizationReport polarization_analysis(const QuatOrder& order, const QuatElt& mu, bool jacobian_mode,
                                         const DihedralAction* c2c2 = nullptr);

struct QuadraticRing {
    /// S contains Z[sqrt(generator_square)].
    Integer generator_square;
    /// Squarefree d with S inside Q(sqrt d).
    Integer field;
    Integer discriminant;
    Integer conductor;
    bool maximal_away_from_2;
    bool unramified_away_from_6disc;
};

/// S = O cap Q(x) for a trace-zero x in O with x^2 in Z.
QuadraticRing quadratic_subring(const QuatOrder& order, const QuatElt& x);
/// The case table: D1 -> Q(b); D2 -> an imaginary stable subfield; D4 -> Z[i]; D3/D6 -> Z[omega].
QuadraticRing distinguished_subring(const DihedralAction& action);

nlohmann::json action_to_json(const DihedralAction& action);
DihedralAction action_from_json(const nlohmann::json& doc);

}  // namespace qt::aut
