#include "parasplit/execution.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace parasplit {

int thread_budget() { return omp_get_max_threads(); }

void set_thread_budget(int threads) { omp_set_num_threads(threads < 1 ? 1 : threads); }

int default_thread_budget() {
    if (const char* env = std::getenv("PARASPLIT_THREADS")) {
        try {
            const int value = std::stoi(env);
            if (value >= 1) return value;
        } catch (const std::exception&) {
        }
    }
    return omp_get_max_threads();
}

ScopedThreadBudget::ScopedThreadBudget(int threads) : previous_(thread_budget()) {
    set_thread_budget(threads);
}

ScopedThreadBudget::~ScopedThreadBudget() { set_thread_budget(previous_); }

}  // namespace parasplit
