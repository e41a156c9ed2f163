#include "zsig/cache_store.hpp"

#include <sys/file.h>
#include <sys/stat.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "zsig/json_io.hpp"
#include "zsig/util.hpp"

namespace zsig {

namespace {

// RAII flock on a whole file; creates it when absent.
class FileLock {
public:
    explicit FileLock(const std::string& path) {
        file_ = std::fopen(path.c_str(), "a+");
        if (!file_) fail(errc::io_error, "cache: cannot open " + path);
        if (flock(fileno(file_), LOCK_EX) != 0) {
            std::fclose(file_);
            fail(errc::io_error, "cache: cannot lock " + path);
        }
    }
    ~FileLock() {
        if (file_) {
            flock(fileno(file_), LOCK_UN);
            std::fclose(file_);
        }
    }
    FileLock(const FileLock&) = delete;
    FileLock& operator=(const FileLock&) = delete;

private:
    std::FILE* file_ = nullptr;
};

} // namespace

OrbitCacheStore::OrbitCacheStore(std::optional<std::string> dir) {
    if (dir) {
        dir_ = *dir;
    } else if (const char* env = std::getenv("ZSIG_CACHE_DIR")) {
        dir_ = env;
    } else {
        dir_ = ".zcache";
    }
    if (mkdir(dir_.c_str(), 0755) != 0 && errno != EEXIST)
        fail(errc::io_error, "cache: cannot create directory " + dir_);
}

std::string OrbitCacheStore::path_for(const Morphism& f, const ProjectivePoint& start) const {
    const std::uint64_t h = fnv1a64(canonical_key(f) + "#" + canonical_key(start));
    char name[32];
    std::snprintf(name, sizeof name, "orbit-%016llx", static_cast<unsigned long long>(h));
    return dir_ + "/" + name + ".jsonl";
}

void OrbitCacheStore::load_into(OrbitCache& orbit) const {
    const std::string path = path_for(orbit.morphism(), orbit.start());
    FileLock lock(path);
    std::ifstream in(path);
    if (!in) return;
    std::vector<ProjectivePoint> points;
    try {
        points = load_orbit_jsonl(in);
    } catch (const error&) {
        return; // unreadable cache is treated as cold
    }
    if (points.empty()) return;
    if (!(points[0] == orbit.start())) return; // key collision; ignore
    orbit.seed(std::move(points));
}

void OrbitCacheStore::store_from(const OrbitCache& orbit) const {
    const std::string path = path_for(orbit.morphism(), orbit.start());
    std::vector<ProjectivePoint> points = orbit.snapshot();
    FileLock lock(path);
    std::size_t have = 0;
    {
        std::ifstream in(path);
        if (in) {
            std::string line;
            while (std::getline(in, line))
                if (!line.empty()) ++have;
        }
    }
    if (have >= points.size()) return;
    std::ofstream out(path, std::ios::app);
    if (!out) fail(errc::io_error, "cache: cannot append to " + path);
    for (std::size_t i = have; i < points.size(); ++i) {
        nlohmann::json j{{"n", i}, {"coords", to_json(points[i])}};
        out << j.dump() << '\n';
    }
}

} // namespace zsig
