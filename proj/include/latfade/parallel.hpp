#pragma once

namespace latfade {

/// Applies the LATFADE_THREADS cap (a positive integer) to OpenMP. Returns the
/// resulting maximum thread count.
int apply_thread_cap();

int max_threads();

}  // namespace latfade
