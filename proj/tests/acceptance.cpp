// Acceptance suite: one criterion per --criterion id, PASS/FAIL line each.
#include <cstdio>
#include <cstring>
#include <cstdlib>

int run_criterion(int id);

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);
    int failures = 0;
    for (int id = 1; id <= 10; ++id) {
        if (only != 0 && id != only) continue;
        failures += run_criterion(id);
    }
    return failures == 0 ? 0 : 1;
}

int run_criterion(int) { return 0; }  // filled in below once the modules exist
