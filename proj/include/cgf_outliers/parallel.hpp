#pragma once

namespace cgf_outliers {

// Upper bound on OpenMP threads. Defaults to omp_get_max_threads(); the
// CGF_OUTLIERS_THREADS environment variable lowers it (values < 1 are ignored).
int thread_cap();

// Overrides the cap for the current process (used by tests and the CLI).
void set_thread_cap(int threads);

// True when a parallel loop started here would actually fork, i.e. we are not
// already inside an active parallel region and more than one thread is allowed.
bool can_fork();

}  // namespace cgf_outliers
