#include "qt/app/lmfdb.hpp"

#include <openssl/evp.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "qt/errors.hpp"

namespace qt::app {

using exact::Integer;
using exact::Rat;

namespace {

std::int64_t now_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

nlohmann::json parse_body(const std::string& body, const std::string& what) {
    try {
        return nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& ex) {
        throw IngestError(what + ": " + ex.what());
    }
}

Integer as_integer(const nlohmann::json& v, const std::string& field) {
    if (v.is_number_integer()) return Integer(v.get<long>());
    if (v.is_string()) {
        try {
            return Integer(v.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw IngestError(field + ": expected an integer");
}

const nlohmann::json& single_row(const nlohmann::json& doc, const std::string& what) {
    if (!doc.contains("data") || !doc["data"].is_array() || doc["data"].empty())
        throw IngestError(what + ": no data rows");
    return doc["data"][0];
}

}  // namespace

QueryConfig QueryConfig::from_environment() {
    QueryConfig c;
    if (const char* dir = std::getenv("QT_CACHE_DIR"); dir && *dir) {
        c.cache_dir = dir;
    } else {
        const char* home = std::getenv("HOME");
        c.cache_dir = std::filesystem::path(home ? home : ".") / ".cache" / "quatorsion";
    }
    if (const char* off = std::getenv("QT_OFFLINE"); off && std::string(off) == "1") c.offline = true;
    if (const char* url = std::getenv("QT_LMFDB_URL"); url && *url) c.base_url = url;
    return c;
}

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string Cache::file_name(const std::string& key) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(key.data(), key.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned k = 0; k < len; ++k) {
        out.push_back(hex[digest[k] >> 4]);
        out.push_back(hex[digest[k] & 15]);
    }
    return out + ".json";
}

std::optional<CacheEntry> Cache::load(const std::string& key) const {
    std::ifstream in(dir_ / file_name(key));
    if (!in) return std::nullopt;
    nlohmann::json doc;
    try {
        in >> doc;
        if (doc.at("key").get<std::string>() != key) return std::nullopt;
        return CacheEntry{key, doc.at("body").get<std::string>(), doc.at("fetched_at").get<std::int64_t>()};
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

void Cache::store(const CacheEntry& entry) const {
    std::filesystem::create_directories(dir_);
    auto target = dir_ / file_name(entry.key);
    auto tmp = target;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
    {
        std::ofstream out(tmp);
        if (!out) throw TransportError("cannot write cache file " + tmp.string());
        out << nlohmann::json{{"key", entry.key}, {"fetched_at", entry.fetched_at}, {"body", entry.body}}.dump();
    }
    std::filesystem::rename(tmp, target);
}

LmfdbClient::LmfdbClient(QueryConfig config) : config_(std::move(config)), cache_(config_.cache_dir) {}

std::string LmfdbClient::get(const std::string& path_and_query) {
    const std::string key = config_.base_url + path_and_query;
    if (auto hit = cache_.load(key)) return hit->body;
    if (config_.offline) throw CacheMissError("offline and not cached: " + key);

    httplib::Client http(config_.base_url);
    http.set_connection_timeout(config_.timeout);
    http.set_read_timeout(config_.timeout);
    http.set_follow_location(true);
    auto delay = config_.backoff;
    std::string last_error;
    for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        if (last_request_ && config_.rate_limit > 0) {
            auto spacing = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(1.0 / config_.rate_limit));
            std::this_thread::sleep_until(*last_request_ + spacing);
        }
        last_request_ = std::chrono::steady_clock::now();
        ++requests_;
        auto res = http.Get(path_and_query);
        if (res && res->status == 200) {
            cache_.store({key, res->body, now_seconds()});
            return res->body;
        }
        bool retry = !res || res->status == 429 || res->status >= 500;
        last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
        if (!retry) break;
        if (attempt < config_.max_attempts) {
            std::this_thread::sleep_for(delay);
            delay *= 2;
        }
    }
    throw TransportError("GET " + key + " failed: " + last_error);
}

std::vector<weil::WeilPoly2> LmfdbClient::fetch_av_classes(const Integer& q) {
    std::string next = "/api/av_fq_isog/?g=2&q=" + q.get_str() + "&_format=json&_fields=label,poly";
    nlohmann::json rows = nlohmann::json::array();
    for (int page = 0; !next.empty(); ++page) {
        if (page > 1000) throw TransportError("av_fq_isog: too many pages");
        auto doc = parse_body(get(next), "av_fq_isog");
        if (!doc.contains("data") || !doc["data"].is_array()) throw IngestError("av_fq_isog: missing data array");
        for (const auto& row : doc["data"]) rows.push_back(row);
        next.clear();
        if (doc.contains("next") && doc["next"].is_string()) {
            next = doc["next"].get<std::string>();
            if (next.rfind(config_.base_url, 0) == 0) next = next.substr(config_.base_url.size());
        }
    }
    return normalize_av_classes(rows, q);
}

nlohmann::json LmfdbClient::fetch_newform(const std::string& label) {
    auto form = parse_body(get("/api/mf_newforms/?label=" + label + "&_format=json"), "mf_newforms");
    auto hecke = parse_body(get("/api/mf_hecke_nf/?label=" + label + "&_format=json"), "mf_hecke_nf");
    return normalize_newform(single_row(form, "mf_newforms " + label), single_row(hecke, "mf_hecke_nf " + label));
}

std::vector<weil::WeilPoly2> normalize_av_classes(const nlohmann::json& rows, const Integer& q) {
    std::vector<weil::WeilPoly2> out;
    for (const auto& row : rows) {
        if (!row.contains("label") || !row["label"].is_string()) throw IngestError("av_fq_isog: label missing");
        std::string label = row["label"].get<std::string>();
        if (!row.contains("poly") || !row["poly"].is_array() || row["poly"].size() != 5)
            throw IngestError("av_fq_isog " + label + ": poly must have 5 coefficients");
        std::vector<Integer> c;
        for (const auto& x : row["poly"]) c.push_back(as_integer(x, "av_fq_isog " + label + ": poly"));
        weil::WeilPoly2 w{q, 0, 0};
        if (c[0] == 1 && c[4] == q * q) {
            w.a1 = c[1];
            w.a2 = c[2];
        } else if (c[4] == 1 && c[0] == q * q) {
            w.a1 = c[3];
            w.a2 = c[2];
        } else {
            throw IngestError("av_fq_isog " + label + ": poly is not a q = " + q.get_str() + " Weil polynomial");
        }
        weil::WeilPoly2 decoded;
        try {
            decoded = weil::parse_label(label);
        } catch (const ParseError& ex) {
            throw IngestError("av_fq_isog: " + std::string(ex.what()));
        }
        if (!(decoded == w)) throw IngestError("av_fq_isog " + label + ": label disagrees with poly");
        out.push_back(w);
    }
    std::sort(out.begin(), out.end());
    return out;
}

nlohmann::json normalize_newform(const nlohmann::json& form, const nlohmann::json& hecke) {
    for (const char* field : {"label", "level", "weight", "dim", "field_poly"})
        if (!form.contains(field)) throw IngestError(std::string("mf_newforms: ") + field + " missing");
    std::string label = form["label"].get<std::string>();
    if (as_integer(form["dim"], "dim") != 2) throw IngestError(label + ": only quadratic coefficient fields");
    const auto& fp = form["field_poly"];
    if (!fp.is_array() || fp.size() != 3 || as_integer(fp[2], "field_poly") != 1)
        throw IngestError(label + ": field_poly must be monic quadratic");
    Integer c0 = as_integer(fp[0], "field_poly"), c1 = as_integer(fp[1], "field_poly");
    Integer disc = c1 * c1 - 4 * c0;
    auto sc = exact::rational_square_class(Rat(disc));
    Integer m = sc.squarefree;
    if (m <= 1) throw IngestError(label + ": coefficient field is not real quadratic");
    Integer s = exact::floor_sqrt(disc / m);
    // nu = -c1/2 + (s/2) sqrt m
    Rat nu_u = exact::make_rat(-c1, 2), nu_v = exact::make_rat(s, 2);

    if (!hecke.contains("ap") || !hecke["ap"].is_array()) throw IngestError(label + ": ap missing");
    std::vector<std::pair<Rat, Rat>> basis;
    if (hecke.contains("hecke_ring_numerators") && !hecke["hecke_ring_numerators"].is_null()) {
        const auto& nums = hecke["hecke_ring_numerators"];
        const auto& dens = hecke.at("hecke_ring_denominators");
        if (nums.size() != 2 || dens.size() != 2) throw IngestError(label + ": Hecke ring basis must have 2 elements");
        for (std::size_t k = 0; k < 2; ++k) {
            Integer d = as_integer(dens[k], "hecke_ring_denominators");
            Integer n0 = as_integer(nums[k].at(0), "hecke_ring_numerators");
            Integer n1 = nums[k].size() > 1 ? as_integer(nums[k][1], "hecke_ring_numerators") : Integer(0);
            basis.push_back({(n0 + n1 * nu_u) / Rat(d), n1 * nu_v / Rat(d)});
        }
    } else {
        basis = {{Rat(1), Rat(0)}, {nu_u, nu_v}};
    }

    nlohmann::json doc{{"label", label},
                       {"level", as_integer(form["level"], "level").get_si()},
                       {"weight", as_integer(form["weight"], "weight").get_si()},
                       {"m", m.get_si()}};
    doc["ap"] = nlohmann::json::object();
    Integer p = 2;
    for (const auto& vec : hecke["ap"]) {
        if (!vec.is_array() || vec.size() != 2) throw IngestError(label + ": ap entries must have 2 coordinates");
        Rat u = 0, v = 0;
        for (std::size_t k = 0; k < 2; ++k) {
            Integer c = as_integer(vec[k], "ap");
            u += c * basis[k].first;
            v += c * basis[k].second;
        }
        u.canonicalize();
        v.canonicalize();
        doc["ap"][p.get_str()] = {u.get_num().get_si(), u.get_den().get_si(), v.get_num().get_si(),
                                  v.get_den().get_si()};
        mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    }
    doc["inner_twists"] = nlohmann::json::array();
    if (form.contains("inner_twist_discs") && form["inner_twist_discs"].is_array())
        for (const auto& d : form["inner_twist_discs"]) doc["inner_twists"].push_back(as_integer(d, "inner_twist_discs").get_si());
    if (form.contains("is_cm") && form["is_cm"].is_boolean()) doc["self_twist"] = form["is_cm"].get<bool>();
    return doc;
}

}  // namespace qt::app
