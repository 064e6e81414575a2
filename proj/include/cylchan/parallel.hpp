#pragma once

namespace cylchan {

/// Execution policy for the data-parallel kernels. Serial is the reference
/// implementation kept for testing; Parallel must produce bit-identical
/// results for any thread count (each output element is reduced by a single
/// thread in a fixed order).
enum class ExecMode { Serial, Parallel };

} // namespace cylchan
