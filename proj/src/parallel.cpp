#include "cgf_outliers/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace cgf_outliers {

namespace {

int env_cap() {
  int cap = omp_get_max_threads();
  if (const char* env = std::getenv("CGF_OUTLIERS_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 1 && v < cap) cap = v;
    } catch (...) {
      // unparsable value: keep the OpenMP default
    }
  }
  return cap;
}

std::atomic<int>& cap_slot() {
  static std::atomic<int> slot{env_cap()};
  return slot;
}

}  // namespace

int thread_cap() { return cap_slot().load(std::memory_order_relaxed); }

void set_thread_cap(int threads) { cap_slot().store(threads < 1 ? 1 : threads); }

bool can_fork() { return thread_cap() > 1 && !omp_in_parallel(); }

}  // namespace cgf_outliers
