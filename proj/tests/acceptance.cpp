// Acceptance gate: runs the numbered property suites and prints exactly one
// PASS/FAIL line per criterion (failures follow, indented, with minimal
// reproducing inputs). Exit 0 iff every executed criterion passes.
//
//   acceptance [--criterion N] [--seed S]

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include <nilbracket/verify.hpp>

int main(int argc, char** argv) {
    std::uint64_t seed = 20260815;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
            if (only < 1 || only > 11) {
                std::fprintf(stderr, "acceptance: --criterion must be 1..11\n");
                return 2;
            }
        } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            seed = std::strtoull(argv[++i], nullptr, 10);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion N] [--seed S]\n");
            return 2;
        }
    }

    bool all_pass = true;
    int criterion = 0;
    for (const std::string& name : nilbracket::verify::suite_names()) {
        ++criterion;
        if (only != 0 && criterion != only) continue;
        nilbracket::verify::SuiteResult result = nilbracket::verify::run_suite(name, seed);
        std::printf("criterion %2d %-14s %s (%lld checks, %.2f s)\n", result.criterion,
                    result.name.c_str(), result.pass ? "PASS" : "FAIL", result.checks,
                    result.seconds);
        for (const std::string& failure : result.failures)
            std::printf("    failure: %s\n", failure.c_str());
        for (const std::string& note : result.notes)
            std::printf("    note: %s\n", note.c_str());
        std::fflush(stdout);
        all_pass = all_pass && result.pass;
    }
    return all_pass ? 0 : 1;
}
