#pragma once

// Verification suites: each runs a fixed list of exact checks over the
// shipped fixtures and produces a deterministic report.

#include <string>
#include <vector>

#include "json.hpp"
#include "qt/exact/number.hpp"
#include "qt/quat/order.hpp"

namespace qt::app {

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<Check> checks;
    /// Suite-specific results (tables, attaining labels, ...).
    nlohmann::ordered_json data = nlohmann::ordered_json::object();

    bool passed() const;
    std::size_t failures() const;
    void check(std::string name, bool ok, std::string detail = "");
};

struct SuiteOptions {
    std::string data_dir;
    exact::Integer disc = 6;
    std::vector<long> moduli{2, 3, 5};
    /// mod4 suite discriminants.
    std::vector<exact::Integer> mod4_discs{6, 10};
    int height = 30;
    exact::Integer p_max = 200;
    /// family suite sample size and seed.
    int samples = 20;
    unsigned long seed = 2023;

    /// data_dir from QT_DATA_DIR or the build-time default.
    static SuiteOptions defaults();
};

const std::vector<std::string>& suite_names();
/// Throws DomainError for an unknown suite name.
Report run_suite(const std::string& name, const SuiteOptions& options = SuiteOptions::defaults());

/// "json" or "text"; throws DomainError otherwise.
std::string emit_report(const Report& report, const std::string& format);
nlohmann::ordered_json report_to_json(const Report& report);
Report report_from_json(const nlohmann::ordered_json& doc);

/// Maximal order in (a, b / Q) of discriminant disc, with a fixed and the
/// smallest |b| (positive first); throws NotFoundError when |b| > 200.
quat::QuatOrder maximal_order_with(const exact::Integer& a, const exact::Integer& disc, exact::Integer* b_out = nullptr);

}  // namespace qt::app
