#pragma once

#include <string>
#include <vector>

#include "model.hpp"

namespace ht {

struct VerifyRecord {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

// Runs the per-module invariant suite at the given beta. Deterministic (fixed
// seeds); heavier checks reuse cached solves where possible.
std::vector<VerifyRecord> run_verification(const ModelParams& params, int threads = 0);

} // namespace ht
