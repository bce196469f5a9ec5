#pragma once

#include <string>
#include <vector>

#include "fcalc/errors.hpp"
#include "fcalc/ring.hpp"

namespace fcalc {

// One command-line request, already tokenized; the binary in tools/ only
// parses argv into this struct and prints the result.  run() owns the rest:
// input resolution, the computation, serialization and the exit code.
struct CommandRequest {
    std::string command;

    std::string functor;                // --functor
    std::vector<std::string> inputs;    // --at / --inputs, in order
    std::string space = "circle";       // --space (config)
    std::string coefficient;            // --coefficient (delta, roundtrip)
    std::string module_spec;            // --module (character, group-homology)
    std::string rep_spec;               // --rep (character)
    std::string kind = "trunc-inclusion";  // --kind (agreement)
    std::string src, dst;               // --src / --dst (agreement)
    std::vector<int> ks;                // --k (agreement sample degrees)
    int n = 0;                          // --n
    int imax = 4;                       // --imax (tower iterations to try)
    int lie = 0;                        // --lie (group-homology shortcut)
    bool based = false;                 // --based (config)

    RingSpec ring = RingSpec::Z();
    bool ring_set = false;              // --ring given explicitly
    Options opt;
    std::string format = "json";        // json | table
};

struct CommandResult {
    int exit_code = 0;      // 0 ok, 2 validation, 3 budget exhausted
    std::string output;     // rendered document (JSON or aligned text)
};

// Executes one request and never throws: validation problems come back as a
// structured diagnostic with exit code 2, exceeded budgets as exit code 3
// (with the partial report when the operation produced one).  Output is
// byte-identical across runs for identical requests.
CommandResult run(const CommandRequest& request);

}  // namespace fcalc
