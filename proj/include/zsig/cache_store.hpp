#ifndef ZSIG_CACHE_STORE_HPP
#define ZSIG_CACHE_STORE_HPP

#include <optional>
#include <string>

#include "zsig/geometry.hpp"

namespace zsig {

/// On-disk orbit cache: one JSON-lines file per (morphism, start) pair,
/// content-addressed under a cache directory. Files are locked exclusively
/// while being read or appended.
class OrbitCacheStore {
public:
    /// Resolution order: explicit dir, else $ZSIG_CACHE_DIR, else ./.zcache.
    explicit OrbitCacheStore(std::optional<std::string> dir = std::nullopt);

    const std::string& directory() const { return dir_; }

    std::string path_for(const Morphism& f, const ProjectivePoint& start) const;

    /// Seeds the orbit from disk if a valid cache file exists.
    void load_into(OrbitCache& orbit) const;

    /// Appends any newly computed points past what the file already holds.
    void store_from(const OrbitCache& orbit) const;

private:
    std::string dir_;
};

} // namespace zsig

#endif
