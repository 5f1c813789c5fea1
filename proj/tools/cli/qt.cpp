// qt: command-line front end for the verification library.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qt/app/lmfdb.hpp"
#include "qt/app/suites.hpp"
#include "qt/errors.hpp"
#include "qt/genus2/genus2.hpp"
#include "qt/newform/newform.hpp"
#include "qt/weil/weil.hpp"

namespace {

using qt::exact::Integer;
using qt::exact::Rat;
using json = nlohmann::ordered_json;

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kTransport = 3 };

std::string format = "text";

void emit(const json& doc, const std::string& text) {
    if (format == "json") std::cout << doc.dump(2) << "\n";
    else std::cout << text;
}

int emit_report(const qt::app::Report& r) {
    std::cout << qt::app::emit_report(r, format);
    return r.passed() ? kPass : kFail;
}

std::vector<long> parse_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stol(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw qt::ParseError("expected a comma-separated list of integers, got '" + text + "'", 0);
        }
    }
    return out;
}

int weil_enum(const Integer& q, long divides, bool geom_square, bool lmfdb) {
    auto classes = qt::weil::admissible_surfaces(q);
    json doc{{"q", q.get_str()}, {"classes", json::array()}};
    std::ostringstream text;
    int shown = 0;
    for (const auto& w : classes) {
        Integer n = w.point_count();
        if (divides > 0 && !mpz_divisible_ui_p(n.get_mpz_t(), divides)) continue;
        auto split = qt::weil::geometric_split_analysis(w);
        if (geom_square && !split) continue;
        std::string label = qt::weil::format_label(w);
        doc["classes"].push_back({{"label", label},
                                  {"a1", w.a1.get_str()},
                                  {"a2", w.a2.get_str()},
                                  {"f1", n.get_str()},
                                  {"square_at", split ? json(split->n) : json(nullptr)}});
        text << label << "  a1=" << w.a1 << " a2=" << w.a2 << " f(1)=" << n;
        if (split) text << "  square at n=" << split->n;
        text << "\n";
        ++shown;
    }
    text << shown << " classes\n";
    int rc = kPass;
    if (lmfdb) {
        qt::app::LmfdbClient client(qt::app::QueryConfig::from_environment());
        auto remote = client.fetch_av_classes(q);
        bool same = remote == classes;
        doc["lmfdb_agrees"] = same;
        text << "LMFDB: " << remote.size() << " classes, " << (same ? "identical" : "DIFFERENT") << "\n";
        if (!same) rc = kFail;
    }
    emit(doc, text.str());
    return rc;
}

int weil_gcd(const Integer& q, const Integer& ell, bool geom) {
    auto s = qt::weil::torsion_gcd_scan(q, ell, geom);
    json doc{{"q", q.get_str()}, {"ell", ell.get_str()}, {"max_gcd", s.max_gcd.get_str()}, {"attaining", json::array()}};
    std::ostringstream text;
    text << "max gcd(f(1), " << ell << "^100) = " << s.max_gcd << "\n";
    for (const auto& w : s.attaining) {
        doc["attaining"].push_back(qt::weil::format_label(w));
        text << "  " << qt::weil::format_label(w) << "  f(1)=" << w.point_count() << "\n";
    }
    emit(doc, text.str());
    return kPass;
}

int weil_label(const std::string& label) {
    auto w = qt::weil::parse_label(label);
    bool valid = qt::weil::is_weil_valid(w);
    bool admissible = valid && qt::weil::honda_tate_admissible(w);
    auto split = valid ? qt::weil::geometric_split_analysis(w) : std::nullopt;
    json doc{{"label", label},         {"q", w.q.get_str()},    {"a1", w.a1.get_str()},
             {"a2", w.a2.get_str()},   {"f1", w.point_count().get_str()}, {"weil_valid", valid},
             {"admissible", admissible}, {"square_at", split ? json(split->n) : json(nullptr)}};
    std::ostringstream text;
    text << label << ": q=" << w.q << " a1=" << w.a1 << " a2=" << w.a2 << " f(1)=" << w.point_count() << "\n"
         << "  Weil-valid: " << (valid ? "yes" : "no") << ", Honda-Tate admissible: " << (admissible ? "yes" : "no")
         << "\n";
    if (split) text << "  square of an elliptic class over F_{q^" << split->n << "} (a=" << split->a << ")\n";
    emit(doc, text.str());
    return kPass;
}

qt::newform::NewformRecord load_form(const std::string& what) {
    if (std::filesystem::is_regular_file(what)) return qt::newform::load_record_file(what);
    auto fixture = std::filesystem::path(qt::app::SuiteOptions::defaults().data_dir) / "newforms" / (what + ".json");
    if (std::filesystem::is_regular_file(fixture)) return qt::newform::load_record_file(fixture.string());
    qt::app::LmfdbClient client(qt::app::QueryConfig::from_environment());
    return qt::newform::load_record(client.fetch_newform(what));
}

int newform_check(const std::string& what, const std::string& primes_text) {
    auto r = load_form(what);
    std::vector<Integer> primes;
    if (!primes_text.empty()) {
        for (long p : parse_list(primes_text)) primes.push_back(p);
    } else {
        for (const auto& [p, a] : r.ap)
            if (!mpz_divisible_p(r.level.get_mpz_t(), p.get_mpz_t()) && p <= 50) primes.push_back(p);
    }
    json doc{{"label", r.label}, {"level", r.level.get_str()}, {"m", r.m.get_str()}, {"lp_at_one", json::object()}};
    std::ostringstream text;
    text << r.label << " (level " << r.level << ", Q(sqrt " << r.m << "))\n";
    for (const auto& p : primes) {
        auto v = qt::newform::lp_at_one(r, p);
        doc["lp_at_one"][p.get_str()] = v.get_str();
        text << "  L_" << p << "(1) = " << v << "\n";
    }
    auto bound = qt::newform::torsion_divisor_bound(r, primes);
    auto tw = qt::newform::twist_checks(r);
    auto v = qt::newform::pqm_criterion(r);
    std::vector<std::string> twists;
    for (const auto& d : tw.inner_twists) twists.push_back(d.get_str());
    doc["torsion_divides"] = bound.get_str();
    doc["inner_twists"] = twists;
    doc["self_twist"] = tw.self_twist;
    doc["conclusive"] = v.status == qt::newform::TwistStatus::Conclusive;
    doc["pqm"] = v.is_pqm;
    doc["quaternion_disc"] = v.quaternion_disc.get_str();
    text << "  torsion divides " << bound << "\n  inner twists:";
    for (const auto& d : twists) text << " " << d;
    text << "\n  self-twist: " << (tw.self_twist ? "yes" : "no") << (tw.self_twist_heuristic ? " (heuristic)" : "")
         << "\n  PQM: " << (v.is_pqm ? "yes" : "no") << ", quaternion disc " << v.quaternion_disc
         << (v.status == qt::newform::TwistStatus::Conclusive ? "" : " (inconclusive: too few coefficients)") << "\n";
    emit(doc, text.str());
    return kPass;
}

json family_row(const Rat& t, bool& ok) {
    auto pt = qt::genus2::family_igusa(t);
    auto m = qt::genus2::rational_model_checks(t);
    ok = m.field_of_moduli_ok && m.mestre_splits;
    using qt::exact::to_string;
    return {{"t", to_string(t)},           {"j", to_string(qt::genus2::family_j(t))},
            {"J2", to_string(pt.J2)},      {"J4", to_string(pt.J4)},
            {"J6", to_string(pt.J6)},      {"J8", to_string(pt.J8)},
            {"J10", to_string(pt.J10)},    {"field_of_moduli_ok", m.field_of_moduli_ok},
            {"mestre_splits", m.mestre_splits}};
}

std::string family_text(const json& row) {
    std::ostringstream text;
    for (const auto& [k, v] : row.items()) text << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    return text.str();
}

int family_eval(const std::string& t) {
    bool ok = false;
    auto row = family_row(qt::exact::parse_rat(t), ok);
    emit(row, family_text(row));
    return ok ? kPass : kFail;
}

int family_check(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qt::IngestError("cannot open " + path);
    json doc = json::array();
    std::ostringstream text;
    bool all = true;
    std::string line;
    while (std::getline(in, line)) {
        auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        line = line.substr(start, line.find_last_not_of(" \t\r") - start + 1);
        bool ok = false;
        auto row = family_row(qt::exact::parse_rat(line), ok);
        all = all && ok;
        doc.push_back(row);
        text << (ok ? "PASS" : "FAIL") << " t = " << line << "\n";
    }
    emit(doc, text.str());
    return all ? kPass : kFail;
}

int curve_certify(const std::string& f, const std::string& claim, long pmax) {
    auto c = qt::genus2::parse_curve(f);
    auto claimed = qt::genus2::parse_invariants(claim);
    auto rep = qt::genus2::certify_torsion(c, claimed, pmax);
    json doc{{"f", qt::exact::to_string(c.f())},
             {"claimed", qt::genus2::group_name(claimed)},
             {"primes", json::array()},
             {"gcd", rep.gcd.get_str()},
             {"two_torsion_lower", rep.two_torsion_lower},
             {"claimed_two_torsion", rep.claimed_two.get_str()},
             {"gcd_two_part", rep.gcd_two_part.get_str()},
             {"verdict", qt::genus2::to_string(rep.verdict)}};
    std::ostringstream text;
    text << "y^2 = " << qt::exact::to_string(c.f()) << ", claimed " << qt::genus2::group_name(claimed) << "\n";
    for (const auto& pc : rep.primes) {
        doc["primes"].push_back({{"p", pc.p.get_str()}, {"order", pc.order.get_str()}, {"divisible", pc.divisible}});
        if (!pc.divisible) text << "  p = " << pc.p << ": #J(F_p) = " << pc.order << " not divisible\n";
    }
    text << "  " << rep.primes.size() << " good primes <= " << pmax << ", gcd #J(F_p) = " << rep.gcd << "\n"
         << "  rational 2-torsion >= " << rep.two_torsion_lower << " (claimed " << rep.claimed_two << ", gcd 2-part "
         << rep.gcd_two_part << ")\n"
         << "  verdict: " << qt::genus2::to_string(rep.verdict) << "\n";
    emit(doc, text.str());
    return rep.verdict == qt::genus2::Verdict::Consistent ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quaternionic torsion verification tools"};
    app.require_subcommand(1);
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    int rc = kPass;
    std::function<int()> action;

    auto* verify = app.add_subcommand("verify", "Fixed-point and mod-4 checks on maximal orders");
    verify->require_subcommand(1);
    long disc = 6;
    std::string moduli = "2,3,5";
    auto* fixed = verify->add_subcommand("fixed-points", "(O/NO)^G against the option sets");
    fixed->add_option("--disc", disc, "Algebra discriminant");
    fixed->add_option("--modulus", moduli, "Comma-separated moduli N");
    fixed->callback([&] {
        action = [&] {
            auto opt = qt::app::SuiteOptions::defaults();
            opt.disc = disc;
            opt.moduli = parse_list(moduli);
            return emit_report(qt::app::run_suite("fixed-points", opt));
        };
    });
    long disc4 = 6;
    auto* mod4 = verify->add_subcommand("mod4", "No anticommuting lift modulo 4");
    mod4->add_option("--disc", disc4, "Algebra discriminant")->required();
    mod4->callback([&] {
        action = [&] {
            auto opt = qt::app::SuiteOptions::defaults();
            opt.mod4_discs = {Integer(disc4)};
            return emit_report(qt::app::run_suite("mod4", opt));
        };
    });

    auto* weil = app.add_subcommand("weil", "Isogeny classes of abelian surfaces over F_q");
    weil->require_subcommand(1);
    long q = 0, ell = 0, divides = 0;
    bool geom = false, lmfdb = false;
    auto* wenum = weil->add_subcommand("enum", "Admissible classes");
    wenum->add_option("--q", q, "Field size")->required();
    wenum->add_option("--divides", divides, "Keep classes with n | f(1)");
    wenum->add_flag("--geom-square", geom, "Keep classes that become squares of elliptic classes");
    wenum->add_flag("--lmfdb", lmfdb, "Compare with the LMFDB listing");
    wenum->callback([&] { action = [&] { return weil_enum(q, divides, geom, lmfdb); }; });
    auto* wgcd = weil->add_subcommand("gcd", "max gcd(f(1), ell^100)");
    wgcd->add_option("--q", q, "Field size")->required();
    wgcd->add_option("--ell", ell, "Prime ell")->required();
    wgcd->add_flag("--geom-square", geom, "Only geometrically split classes");
    wgcd->callback([&] { action = [&] { return weil_gcd(q, ell, geom); }; });
    std::string label;
    auto* wlabel = weil->add_subcommand("label", "Decode an isogeny class label");
    wlabel->add_option("label", label, "e.g. 2.5.f_q")->required();
    wlabel->callback([&] { action = [&] { return weil_label(label); }; });

    auto* nf = app.add_subcommand("newform", "Weight-2 newforms with quadratic coefficients");
    nf->require_subcommand(1);
    std::string form, primes;
    auto* nfcheck = nf->add_subcommand("check", "L-values at 1, twists and the quaternion criterion");
    nfcheck->add_option("form", form, "Label or path to a record")->required();
    nfcheck->add_option("--primes", primes, "Comma-separated primes");
    nfcheck->callback([&] { action = [&] { return newform_check(form, primes); }; });

    auto* family = app.add_subcommand("family", "The one-parameter (Z/2)^2 family");
    family->require_subcommand(1);
    std::string t, tlist;
    auto* feval = family->add_subcommand("eval", "Igusa invariants and rationality checks at t");
    feval->add_option("--t", t, "Rational parameter, e.g. 3/2")->required();
    feval->callback([&] { action = [&] { return family_eval(t); }; });
    auto* fcheck = family->add_subcommand("check", "Checks for every t in a file (one per line)");
    fcheck->add_option("--t-list", tlist, "File of rational parameters")->required();
    fcheck->callback([&] { action = [&] { return family_check(tlist); }; });

    auto* curve = app.add_subcommand("curve", "Genus-2 curves y^2 = f(x)");
    curve->require_subcommand(1);
    std::string f, claim;
    long pmax = 200;
    auto* certify = curve->add_subcommand("certify", "Check a claimed rational torsion subgroup");
    certify->add_option("--f", f, "Polynomial or JSON {\"f\": [c0, ...]}")->required();
    certify->add_option("--claim", claim, "Invariants, e.g. 2,2 or Z/6")->required();
    certify->add_option("--pmax", pmax, "Largest prime tested");
    certify->callback([&] { action = [&] { return curve_certify(f, claim, pmax); }; });

    std::string suite;
    auto* suite_cmd = app.add_subcommand("suite", "Run a verification suite");
    suite_cmd->add_option("name", suite, "Suite name")->required()->check(CLI::IsMember(qt::app::suite_names()));
    suite_cmd->callback([&] { action = [&] { return emit_report(qt::app::run_suite(suite)); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }
    try {
        rc = action();
    } catch (const qt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qt::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qt::UnsupportedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qt::IngestError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const qt::TransportError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTransport;
    } catch (const qt::CacheMissError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kTransport;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return rc;
}
