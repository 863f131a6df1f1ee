#include <cstdio>

#include "zsm/accept.hpp"

int main() {
    const int failures = zsm::run_acceptance(true);
    std::printf("acceptance: %d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
