#pragma once

// LMFDB JSON API client with a content-addressed on-disk cache.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qt/weil/weil.hpp"

namespace qt::app {

struct QueryConfig {
    std::string base_url = "https://www.lmfdb.org";
    bool offline = false;
    std::filesystem::path cache_dir;
    /// Requests per second.
    double rate_limit = 1.0;
    int max_attempts = 4;
    /// First retry delay; doubled on each further 429/5xx.
    std::chrono::milliseconds backoff{500};
    std::chrono::seconds timeout{30};

    /// QT_CACHE_DIR (default ~/.cache/quatorsion), QT_OFFLINE=1, QT_LMFDB_URL.
    static QueryConfig from_environment();
};

struct CacheEntry {
    std::string key;
    std::string body;
    std::int64_t fetched_at;
};

/// One file per key, named by the SHA-256 of the key; writes go through a
/// temporary file and an atomic rename.
class Cache {
public:
    explicit Cache(std::filesystem::path dir);
    static std::string file_name(const std::string& key);
    std::optional<CacheEntry> load(const std::string& key) const;
    void store(const CacheEntry& entry) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

class LmfdbClient {
public:
    explicit LmfdbClient(QueryConfig config);

    /// Cache-through GET of base_url + path_and_query. Throws CacheMissError
    /// offline on a miss and TransportError when the network fails.
    std::string get(const std::string& path_and_query);

    /// Isogeny classes of abelian surfaces over F_q, following "next" pages.
    std::vector<weil::WeilPoly2> fetch_av_classes(const exact::Integer& q);
    /// Record in the newform fixture schema.
    nlohmann::json fetch_newform(const std::string& label);

    const QueryConfig& config() const { return config_; }
    /// Network requests issued so far (cache hits excluded).
    int requests() const { return requests_; }

private:
    QueryConfig config_;
    Cache cache_;
    int requests_ = 0;
    std::optional<std::chrono::steady_clock::time_point> last_request_;
};

/// API rows {"label", "poly"} to classes; poly may be listed from either end.
/// Throws IngestError when the label disagrees with the coefficients.
std::vector<weil::WeilPoly2> normalize_av_classes(const nlohmann::json& rows, const exact::Integer& q);
/// mf_newforms row plus mf_hecke_nf row to the fixture schema.
nlohmann::json normalize_newform(const nlohmann::json& form, const nlohmann::json& hecke);

}  // namespace qt::app
