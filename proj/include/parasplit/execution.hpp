#pragma once

namespace parasplit {

/// Selects between the OpenMP kernels and their serial reference paths.
/// Both produce bitwise-identical results.
enum class Execution { serial, parallel };

/// Number of worker threads parallel kernels may use.
int thread_budget();
void set_thread_budget(int threads);

/// Thread budget taken from PARASPLIT_THREADS, or the OpenMP default when unset.
int default_thread_budget();

/// Applies a thread budget for the lifetime of the object.
class ScopedThreadBudget {
public:
    explicit ScopedThreadBudget(int threads);
    ~ScopedThreadBudget();
    ScopedThreadBudget(const ScopedThreadBudget&) = delete;
    ScopedThreadBudget& operator=(const ScopedThreadBudget&) = delete;

private:
    int previous_;
};

}  // namespace parasplit
