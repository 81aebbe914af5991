#pragma once

namespace fracgrad {

/// Worker threads used by grid-parallel loops. 0 restores the default
/// (hardware parallelism).
void set_thread_count(int threads);
int thread_count();

}  // namespace fracgrad
