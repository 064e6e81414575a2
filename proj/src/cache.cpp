#include "cylchan/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

namespace cylchan {

namespace {

constexpr char kMagic[8] = {'C', 'Y', 'L', 'C', 'H', 'A', 'N', '1'};
constexpr uint32_t kVersion = 1;

uint64_t fnv1a(const unsigned char* data, size_t n) {
    uint64_t h = 14695981039346656037ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

void append(std::vector<unsigned char>& buf, const void* p, size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    buf.insert(buf.end(), b, b + n);
}

void append_u32(std::vector<unsigned char>& buf, uint32_t v) { append(buf, &v, 4); }
void append_f64(std::vector<unsigned char>& buf, double v) { append(buf, &v, 8); }
void append_f64s(std::vector<unsigned char>& buf, const double* p, size_t n) {
    append(buf, p, 8 * n);
}

struct Reader {
    const unsigned char* p;
    size_t left;
    bool ok = true;

    void read(void* out, size_t n) {
        if (left < n) {
            ok = false;
            std::memset(out, 0, n);
            return;
        }
        std::memcpy(out, p, n);
        p += n;
        left -= n;
    }
    uint32_t u32() {
        uint32_t v;
        read(&v, 4);
        return v;
    }
    double f64() {
        double v;
        read(&v, 8);
        return v;
    }
};

std::string quant12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Scoped advisory lock on <entry>.lock.
struct FileLock {
    int fd = -1;
    explicit FileLock(const std::string& path, bool exclusive) {
        fd = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
        if (fd >= 0) ::flock(fd, exclusive ? LOCK_EX : LOCK_SH);
    }
    ~FileLock() {
        if (fd >= 0) {
            ::flock(fd, LOCK_UN);
            ::close(fd);
        }
    }
};

} // namespace

std::string CacheKey::id() const {
    std::string s = quant12(R0) + "_" + quant12(Z0) + "_" + std::to_string(N) + "_" +
                    std::to_string(M) + "_" + std::to_string(L);
    for (char& c : s)
        if (c == '.') c = 'p';
        else if (c == '-') c = 'm';
        else if (c == '+') c = 'q';
    return s;
}

std::string cache_entry_path(const std::string& dir, const CacheKey& key) {
    return dir + "/es_" + key.id() + ".bin";
}

std::optional<CachePayload> cache_get(const std::string& dir, const CacheKey& key,
                                      CacheStatus* status) {
    const std::string path = cache_entry_path(dir, key);
    if (status) *status = CacheStatus::Miss;
    FileLock lock(path + ".lock", false);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

    auto reject = [&]() -> std::optional<CachePayload> {
        std::error_code ec;
        std::filesystem::remove(path, ec); // corrupt entry reads as absent
        if (status) *status = CacheStatus::Corrupt;
        return std::nullopt;
    };
    if (buf.size() < sizeof(kMagic) + 4 + 8) return reject();

    // checksum covers everything before the trailing 8 bytes
    uint64_t stored;
    std::memcpy(&stored, buf.data() + buf.size() - 8, 8);
    if (fnv1a(buf.data(), buf.size() - 8) != stored) return reject();

    Reader r{buf.data(), buf.size() - 8};
    char magic[8];
    r.read(magic, 8);
    if (std::memcmp(magic, kMagic, 8) != 0) return reject();
    if (r.u32() != kVersion) return reject();

    CachePayload pl;
    pl.es.geom.R0 = r.f64();
    pl.es.geom.Z0 = r.f64();
    pl.es.table.N = static_cast<int>(r.u32());
    pl.es.table.M = static_cast<int>(r.u32());
    pl.es.table.L = static_cast<int>(r.u32());
    if (!r.ok) return reject();
    if (quant12(pl.es.geom.R0) != quant12(key.R0) || quant12(pl.es.geom.Z0) != quant12(key.Z0) ||
        pl.es.table.N != key.N || pl.es.table.M != key.M || pl.es.table.L != key.L)
        return reject();

    const ModeTable& t = pl.es.table;
    pl.es.roots.assign(t.N + 1, std::vector<double>(t.M));
    pl.es.radial_norm.assign(t.N + 1, std::vector<double>(t.M));
    for (int n = 0; n <= t.N; ++n) r.read(pl.es.roots[n].data(), 8 * t.M);
    pl.es.wavenumbers.resize(t.L);
    r.read(pl.es.wavenumbers.data(), 8 * t.L);
    for (int n = 0; n <= t.N; ++n) r.read(pl.es.radial_norm[n].data(), 8 * t.M);
    pl.es.scaling.resize(t.size());
    r.read(pl.es.scaling.data(), 8 * static_cast<size_t>(t.size()));
    const int ml = t.block_size();
    pl.k_uni.blocks.resize(t.block_count());
    pl.k_par.blocks.resize(t.block_count());
    for (int n = 0; n <= t.N; ++n) {
        pl.k_uni.blocks[n].resize(ml, ml);
        r.read(pl.k_uni.blocks[n].data(), 8 * static_cast<size_t>(ml) * ml);
    }
    for (int n = 0; n <= t.N; ++n) {
        pl.k_par.blocks[n].resize(ml, ml);
        r.read(pl.k_par.blocks[n].data(), 8 * static_cast<size_t>(ml) * ml);
    }
    if (!r.ok || r.left != 0) return reject();
    if (status) *status = CacheStatus::Hit;
    return pl;
}

void cache_put(const std::string& dir, const CacheKey& key, const CachePayload& payload) {
    std::filesystem::create_directories(dir);
    const ModeTable& t = payload.es.table;
    std::vector<unsigned char> buf;
    append(buf, kMagic, 8);
    append_u32(buf, kVersion);
    append_f64(buf, payload.es.geom.R0);
    append_f64(buf, payload.es.geom.Z0);
    append_u32(buf, static_cast<uint32_t>(t.N));
    append_u32(buf, static_cast<uint32_t>(t.M));
    append_u32(buf, static_cast<uint32_t>(t.L));
    for (int n = 0; n <= t.N; ++n) append_f64s(buf, payload.es.roots[n].data(), t.M);
    append_f64s(buf, payload.es.wavenumbers.data(), t.L);
    for (int n = 0; n <= t.N; ++n) append_f64s(buf, payload.es.radial_norm[n].data(), t.M);
    append_f64s(buf, payload.es.scaling.data(), t.size());
    const size_t ml2 = static_cast<size_t>(t.block_size()) * t.block_size();
    for (int n = 0; n <= t.N; ++n) append_f64s(buf, payload.k_uni.blocks[n].data(), ml2);
    for (int n = 0; n <= t.N; ++n) append_f64s(buf, payload.k_par.blocks[n].data(), ml2);
    const uint64_t checksum = fnv1a(buf.data(), buf.size());
    append(buf, &checksum, 8);

    const std::string path = cache_entry_path(dir, key);
    FileLock lock(path + ".lock", true);
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cache_put: cannot write " + tmp);
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
        if (!out) throw std::runtime_error("cache_put: short write to " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void cache_invalidate(const std::string& dir, const CacheKey& key) {
    std::error_code ec;
    std::filesystem::remove(cache_entry_path(dir, key), ec);
}

} // namespace cylchan
