#include "fracgrad/parallel.hpp"

#include <omp.h>

#include <thread>

#include "fracgrad/error.hpp"

namespace fracgrad {

void set_thread_count(int threads) {
  if (threads < 0) throw RangeError("thread count must be nonnegative");
  if (threads == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 1 : static_cast<int>(hw);
  }
  omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

}  // namespace fracgrad
