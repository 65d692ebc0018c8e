// Acceptance harness: one line per criterion, nonzero exit on any failure.

#include "ringdyn/verify.hpp"

#include <cstdio>

int main() {
    const auto results = ringdyn::run_verification();
    bool all_pass = true;
    for (const auto& result : results) {
        std::printf("%s criterion %d (%s): %s\n", result.pass ? "PASS" : "FAIL", result.id,
                    result.name.c_str(), result.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && result.pass;
    }
    return all_pass ? 0 : 1;
}
