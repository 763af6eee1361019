#include "chiral/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace chiral::parallel {

int threads_count() { return omp_get_max_threads(); }

void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

void apply_env_threads() {
    if (const char* env = std::getenv("CHIRAL_THREADS")) {
        try {
            set_threads(std::stoi(env));
        } catch (const std::exception&) {
        }
    }
}

}  // namespace chiral::parallel
