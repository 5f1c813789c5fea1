#include "qt/app/suites.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include "qt/aut/dihedral.hpp"
#include "qt/errors.hpp"
#include "qt/genus2/genus2.hpp"
#include "qt/newform/newform.hpp"
#include "qt/weil/weil.hpp"

namespace qt::app {

using exact::Integer;
using exact::Rat;
using quat::QuatAlgebra;
using quat::QuatOrder;

namespace {

// -1, then -d, d for the divisors d > 1 of n.
std::vector<Integer> signed_divisors(const Integer& n) {
    std::vector<Integer> out{-1};
    for (const auto& d : exact::divisors(n)) {
        if (d == 1) continue;
        out.push_back(-d);
        out.push_back(d);
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
    return out;
}

QuatOrder maximal_order_for_disc(const Integer& disc) {
    for (long a = -1; a >= -60; --a) {
        try {
            return maximal_order_with(a, disc);
        } catch (const NotFoundError&) {
        }
    }
    throw NotFoundError("no (a, b) with a >= -60 of discriminant " + disc.get_str());
}

std::string label_list(const std::vector<weil::WeilPoly2>& ws) {
    std::vector<std::string> out;
    for (const auto& w : ws) out.push_back(weil::format_label(w));
    return join(out, ",");
}

void fixed_points_suite(Report& r, const SuiteOptions& opt) {
    using aut::DihedralKind;
    QuatOrder O = maximal_order_for_disc(opt.disc);
    Integer b3;
    std::optional<QuatOrder> O3;
    try {
        O3 = maximal_order_with(-3, opt.disc, &b3);
    } catch (const NotFoundError&) {
    }
    r.data["disc"] = opt.disc.get_str();
    r.data["algebra"] = "(" + exact::to_string(O.algebra().a) + ", " + exact::to_string(O.algebra().b) + ")";
    auto divs = signed_divisors(opt.disc);
    std::vector<aut::DihedralAction> actions;
    auto first = [&](DihedralKind kind, const QuatOrder& ord, const std::vector<std::pair<Integer, Integer>>& params) {
        for (const auto& [m, n] : params)
            if (auto a = aut::find_dihedral_action(ord, kind, m, n, opt.height)) {
                actions.push_back(*a);
                return;
            }
        r.data["not_realized"].push_back(aut::to_string(kind));
    };
    std::vector<std::pair<Integer, Integer>> singles, pairs;
    for (const auto& m : divs) singles.push_back({m, 0});
    for (const auto& m : divs)
        for (const auto& n : divs)
            if (m < n) pairs.push_back({m, n});
    first(DihedralKind::D1, O, singles);
    first(DihedralKind::D2, O, pairs);
    first(DihedralKind::D4, O, singles);
    if (O3) {
        // j^2 = b in (-3, b) first
        std::vector<std::pair<Integer, Integer>> js{{b3, 0}};
        for (long m = 1; m <= 30; ++m)
            for (long s : {m, -m}) js.push_back({s, 0});
        first(DihedralKind::D3, *O3, js);
        first(DihedralKind::D6, *O3, js);
        r.data["dihedral3_algebra"] = "(-3, " + b3.get_str() + ")";
    } else {
        r.data["not_realized"].push_back("D3");
        r.data["not_realized"].push_back("D6");
    }
    r.check("actions realized", !actions.empty(), std::to_string(actions.size()) + " dihedral actions");
    r.data["table"] = nlohmann::ordered_json::array();
    for (const auto& a : actions) {
        for (long n : opt.moduli) {
            auto fixed = aut::residue_fixed_subgroup(a, n);
            auto options = aut::theorem_options(a.kind, n);
            std::vector<std::string> opts;
            for (const auto& o : options) opts.push_back(exact::to_string(o));
            nlohmann::ordered_json row{{"kind", aut::to_string(a.kind)},
                                       {"m", a.m.get_str()},
                                       {"N", n},
                                       {"fixed", exact::to_string(fixed)},
                                       {"options", opts}};
            r.data["table"].push_back(row);
            std::string name = aut::to_string(a.kind) + " N=" + std::to_string(n);
            if (options.empty()) {
                r.check(name, true, exact::to_string(fixed) + " (no option set)");
            } else {
                bool ok = std::find(options.begin(), options.end(), fixed) != options.end();
                r.check(name, ok, exact::to_string(fixed) + " in {" + join(opts, " ") + "}");
            }
        }
        if (a.kind == DihedralKind::D4) {
            auto f2 = aut::residue_fixed_subgroup(a, 2);
            r.check("D4 mod 2 is [2,2]", f2 == exact::AbelianInvariants{{2, 2}}, exact::to_string(f2));
        }
    }
}

void mod4_suite(Report& r, const SuiteOptions& opt) {
    for (const auto& disc : opt.mod4_discs) {
        QuatOrder O = maximal_order_for_disc(disc);
        int qualifying = 0, witnesses = 0;
        for (const auto& s : signed_divisors(disc)) {
            for (const auto& b : quat::find_trace_zero(O, s, opt.height)) {
                if (!quat::is_in_normalizer(O, b) || !aut::classify_involution_mod2(O, b).criterion) continue;
                ++qualifying;
                auto hits = aut::search_mod4_anticommutator(O, b);
                witnesses += static_cast<int>(hits.size());
            }
        }
        std::string d = disc.get_str();
        r.data["disc " + d] = {{"qualifying", qualifying}, {"witnesses", witnesses}};
        r.check("disc " + d + ": qualifying b found", qualifying > 0, std::to_string(qualifying) + " elements b");
        r.check("disc " + d + ": no mod-4 anticommuting lift", witnesses == 0,
                std::to_string(witnesses) + " witnesses among 256 residues per b");
    }
}

void weil_suite(Report& r, const SuiteOptions&) {
    auto s2 = weil::torsion_gcd_scan(3, 2, true);
    auto s3 = weil::torsion_gcd_scan(2, 3, true);
    r.check("max gcd(f(1), 2^100) over F_3 is 16", s2.max_gcd == 16, s2.max_gcd.get_str());
    r.check("max gcd(f(1), 3^100) over F_2 is 9", s3.max_gcd == 9, s3.max_gcd.get_str());
    r.data["gcd_2_over_F3"] = {{"max", s2.max_gcd.get_str()}, {"attaining", label_list(s2.attaining)}};
    r.data["gcd_3_over_F2"] = {{"max", s3.max_gcd.get_str()}, {"attaining", label_list(s3.attaining)}};
    std::vector<weil::WeilPoly2> hits;
    for (const auto& w : weil::admissible_surfaces(5))
        if (mpz_divisible_ui_p(w.point_count().get_mpz_t(), 72)) hits.push_back(w);
    r.check("unique class over F_5 with 72 | f(1)",
            hits.size() == 1 && hits[0] == weil::WeilPoly2{5, 5, 16} && weil::format_label(hits[0]) == "2.5.f_q",
            label_list(hits));
    if (hits.size() == 1)
        r.check("2.5.f_q is not geometrically a square up to n = 24",
                !weil::geometric_split_analysis(hits[0], 24).has_value());
    r.data["class_72"] = label_list(hits);
    auto fmt = [](const std::set<Integer>& s) {
        std::vector<std::string> out;
        for (const auto& p : s) out.push_back(p.get_str());
        return join(out, ",");
    };
    auto b4 = weil::qm_prime_bound(4), b2 = weil::qm_prime_bound(2);
    r.check("qm_prime_bound(4) = {2,3,5,7}", b4 == std::set<Integer>{2, 3, 5, 7}, fmt(b4));
    r.check("qm_prime_bound(2) = {2,3,5}", b2 == std::set<Integer>{2, 3, 5}, fmt(b2));
    static const char* labels[] = {"2.2.a_e", "2.2.b_b", "2.3.a_ac", "2.3.a_g",  "2.5.a_k",  "2.5.d_e",  "2.5.d_e",
                                   "2.5.f_q", "2.5.a_ac", "2.5.d_e", "2.7.a_ac", "2.7.i_be", "2.7.a_ac", "2.7.i_be"};
    int round_trips = 0;
    for (const char* l : labels) round_trips += weil::format_label(weil::parse_label(l)) == l;
    r.check("label round trips", round_trips == 14, std::to_string(round_trips) + "/14");
    r.check("#A(F_3) = 8 for 2.3.a_ac", weil::parse_label("2.3.a_ac").point_count() == 8);
    auto k = weil::parse_label("2.5.a_k");
    auto split = weil::geometric_split_analysis(k);
    r.check("2.5.a_k has f(1) = 36 and is a square at n = 1", k.point_count() == 36 && split && split->n == 1);
}

void newform_suite(Report& r, const SuiteOptions& opt) {
    auto dir = std::filesystem::path(opt.data_dir) / "newforms";
    auto main = newform::load_record_file((dir / "243.2.a.d.json").string());
    r.check("243.2.a.d: L_2(1) = 3", newform::lp_at_one(main, 2) == 3);
    r.check("243.2.a.d: L_13(1) = 225", newform::lp_at_one(main, 13) == 225);
    auto bound = newform::torsion_divisor_bound(main, {2, 13});
    r.check("243.2.a.d: torsion divides 3", bound == 3, bound.get_str());
    r.check("conductor 3^10 admissible", newform::conductor_admissible(exact::pow(3, 10)).admissible);
    std::vector<std::string> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".json") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    r.data["forms"] = nlohmann::ordered_json::array();
    for (const auto& f : files) {
        auto rec = newform::load_record_file(f);
        auto v = newform::pqm_criterion(rec);
        r.check(rec.label + ": PQM with quaternion disc 6",
                v.status == newform::TwistStatus::Conclusive && v.is_pqm && v.quaternion_disc == 6,
                "twist " + v.twist_disc.get_str() + ", disc " + v.quaternion_disc.get_str());
        r.check(rec.label + ": conductor N^2 admissible",
                newform::conductor_admissible(rec.level * rec.level).admissible);
        r.data["forms"].push_back({{"label", rec.label},
                                   {"twist_disc", v.twist_disc.get_str()},
                                   {"quaternion_disc", v.quaternion_disc.get_str()},
                                   {"tested_up_to", newform::twist_checks(rec).tested_up_to.get_str()}});
    }
}

void family_suite(Report& r, const SuiteOptions& opt) {
    std::mt19937 rng(opt.seed);
    std::uniform_int_distribution<long> num(-50, 50), den(1, 50);
    int done = 0;
    r.data["t"] = nlohmann::ordered_json::array();
    while (done < opt.samples) {
        Rat t = exact::make_rat(num(rng), den(rng));
        genus2::IgusaPoint pt;
        try {
            pt = genus2::family_igusa(t);
        } catch (const DomainError&) {
            continue;
        }
        auto m = genus2::rational_model_checks(t);
        std::string ts = exact::to_string(t);
        r.check("t = " + ts, m.field_of_moduli_ok && m.mestre_splits && 4 * pt.J8 == pt.J2 * pt.J6 - pt.J4 * pt.J4,
                std::string("field of moduli ") + (m.field_of_moduli_ok ? "Q" : "not Q") + ", Mestre " +
                    (m.mestre_splits ? "split" : "ramified"));
        r.data["t"].push_back(ts);
        ++done;
    }
}

void table2_suite(Report& r, const SuiteOptions& opt) {
    auto rows = genus2::load_table((std::filesystem::path(opt.data_dir) / "table2.json").string());
    r.data["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        auto rep = genus2::certify_torsion(row.curve, row.torsion, opt.p_max);
        std::string name = genus2::group_name(row.torsion) + " (D = " + row.disc.get_str() + ")";
        long bad = std::count_if(rep.primes.begin(), rep.primes.end(), [](const auto& c) { return !c.divisible; });
        r.check(name + ": order divides #J(F_p) for all good p <= " + opt.p_max.get_str(), bad == 0,
                std::to_string(rep.primes.size()) + " primes, gcd " + rep.gcd.get_str());
        r.check(name + ": verdict", rep.verdict == genus2::Verdict::Consistent, genus2::to_string(rep.verdict));
        if (row.torsion == exact::AbelianInvariants{{2, 2}})
            r.check(name + ": factorization gives >= 4 rational 2-torsion classes", rep.two_torsion_lower >= 4,
                    std::to_string(rep.two_torsion_lower));
        r.data["rows"].push_back({{"torsion", genus2::group_name(row.torsion)},
                                  {"disc", row.disc.get_str()},
                                  {"primes", rep.primes.size()},
                                  {"gcd", rep.gcd.get_str()},
                                  {"two_torsion_lower", rep.two_torsion_lower},
                                  {"verdict", genus2::to_string(rep.verdict)}});
    }
}

}  // namespace

bool Report::passed() const { return failures() == 0; }

std::size_t Report::failures() const {
    return std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; });
}

void Report::check(std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, std::move(detail)});
}

SuiteOptions SuiteOptions::defaults() {
    SuiteOptions o;
    const char* env = std::getenv("QT_DATA_DIR");
    o.data_dir = env && *env ? env : QT_DEFAULT_DATA_DIR;
    return o;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"fixed-points", "mod4", "weil-bounds", "newform", "family", "table2"};
    return names;
}

Report run_suite(const std::string& name, const SuiteOptions& options) {
    Report r{name, {}, nlohmann::ordered_json::object()};
    if (name == "fixed-points") fixed_points_suite(r, options);
    else if (name == "mod4") mod4_suite(r, options);
    else if (name == "weil-bounds") weil_suite(r, options);
    else if (name == "newform") newform_suite(r, options);
    else if (name == "family") family_suite(r, options);
    else if (name == "table2") table2_suite(r, options);
    else throw DomainError("unknown suite '" + name + "' (expected one of " + join(suite_names(), ", ") + ")");
    return r;
}

nlohmann::ordered_json report_to_json(const Report& report) {
    nlohmann::ordered_json doc;
    doc["suite"] = report.suite;
    doc["passed"] = report.passed();
    doc["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks)
        doc["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    doc["data"] = report.data;
    return doc;
}

Report report_from_json(const nlohmann::ordered_json& doc) {
    try {
        Report r{doc.at("suite").get<std::string>(), {}, nlohmann::ordered_json::object()};
        for (const auto& c : doc.at("checks"))
            r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("detail").get<std::string>()});
        r.data = doc.at("data");
        return r;
    } catch (const nlohmann::json::exception& ex) {
        throw IngestError(std::string("report: ") + ex.what());
    }
}

std::string emit_report(const Report& report, const std::string& format) {
    if (format == "json") return report_to_json(report).dump(2) + "\n";
    if (format != "text") throw DomainError("unknown format '" + format + "' (json or text)");
    std::ostringstream out;
    if (!report.suite.empty()) out << "suite " << report.suite << "\n";
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty()) out << "  [" << c.detail << "]";
        out << "\n";
    }
    out << report.checks.size() << " checks, " << report.failures() << " failed\n";
    return out.str();
}

QuatOrder maximal_order_with(const Integer& a, const Integer& disc, Integer* b_out) {
    std::vector<Integer> candidates{disc};
    for (long b = 1; b <= 200; ++b)
        for (long s : {b, -b})
            if (Integer(s) != disc) candidates.push_back(s);
    for (const auto& b : candidates) {
        QuatAlgebra alg{Rat(a), Rat(b)};
        if (quat::discriminant(alg) != disc) continue;
        if (b_out) *b_out = b;
        return quat::saturate_to_maximal(QuatOrder::standard(alg));
    }
    throw NotFoundError("no b with |b| <= 200 and disc(" + a.get_str() + ", b) = " + disc.get_str());
}

}  // namespace qt::app
