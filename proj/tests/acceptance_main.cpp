// Prints one line per acceptance criterion; fails if any criterion fails.

#include "hydride/acceptance.hpp"

#include <fmt/format.h>

int main()
{
    int failed = 0;
    for (const auto& criterion : hydride::acceptance_criteria()) {
        const auto r = hydride::run_criterion(criterion);
        fmt::print("criterion {:>2} {}: {} ({:.2f} s) {}\n", r.id, r.passed ? "PASS" : "FAIL", r.title, r.seconds,
                   r.detail);
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    }
    fmt::print("{} of {} criteria passed\n", hydride::acceptance_criteria().size() - failed,
               hydride::acceptance_criteria().size());
    return failed == 0 ? 0 : 1;
}
