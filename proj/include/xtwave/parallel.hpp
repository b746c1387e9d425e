#pragma once

namespace xtwave {

/// Selects the OpenMP element loop or the serial reference loop. Both paths
/// run the same per-element kernel; only the reduction order differs.
enum class Exec { Parallel, Serial };

void set_num_threads(int n);
int max_threads();

}  // namespace xtwave
