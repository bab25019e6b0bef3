// Acceptance gate: one line per criterion, nonzero exit on any failure.
#include "pmod/acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    int jobs = 1;
    if (argc > 1) jobs = std::max(1, std::atoi(argv[1]));
    pmod::AcceptanceReport rep = pmod::run_acceptance(&std::cout, jobs);
    std::cout << (rep.pass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << " ("
              << rep.seconds << "s total)\n";
    return rep.pass ? 0 : 1;
}
