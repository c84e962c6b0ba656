#include "relscatter/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace relscatter {

int thread_count() {
    if (const char* env = std::getenv("RELSCATTER_THREADS")) {
        try {
            int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const int nt = thread_count();
    if (nt <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const long long nn = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
    for (long long i = 0; i < nn; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace relscatter
