#pragma once

#include <optional>
#include <string>

#include "cylchan/eigensystem.hpp"
#include "cylchan/flow_coupling.hpp"

namespace cylchan {

/// Cache identity: geometry and truncation only. Diffusivity and flow speed
/// deliberately excluded -- the cached objects do not depend on them.
struct CacheKey {
    double R0 = 1.0;
    double Z0 = 10.0;
    int N = 0, M = 1, L = 1;

    /// Stable textual form, reals quantized to 12 significant digits.
    std::string id() const;
};

/// Geometry-only precomputation: the eigensystem and both feedback matrices.
struct CachePayload {
    EigenSystem es;
    BlockDiagMatrix k_uni;
    BlockDiagMatrix k_par;
};

std::string cache_entry_path(const std::string& dir, const CacheKey& key);

enum class CacheStatus { Hit, Miss, Corrupt };

/// Returns the payload when a valid entry exists. A missing file, magic,
/// version or key mismatch, truncation, or checksum failure all read as
/// "absent" (corrupt entries are deleted so the next put rebuilds them);
/// status distinguishes a clean miss from a rejected entry.
std::optional<CachePayload> cache_get(const std::string& dir, const CacheKey& key,
                                      CacheStatus* status = nullptr);

/// Atomic write (temp file + rename), serialized per key with a file lock.
/// Round trip is bit-identical.
void cache_put(const std::string& dir, const CacheKey& key, const CachePayload& payload);

void cache_invalidate(const std::string& dir, const CacheKey& key);

} // namespace cylchan
