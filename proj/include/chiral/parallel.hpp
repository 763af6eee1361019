#ifndef CHIRAL_PARALLEL_HPP
#define CHIRAL_PARALLEL_HPP

namespace chiral::parallel {

int threads_count();
void set_threads(int n);

// Reads CHIRAL_THREADS and applies it when set to a positive integer.
void apply_env_threads();

}  // namespace chiral::parallel

#endif
