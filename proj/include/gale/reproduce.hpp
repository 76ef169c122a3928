#pragma once

#include "gale/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gale {

struct ReproduceOptions {
    std::optional<std::string> only; // run a single group
    std::uint64_t seed = 1;
    double tol = 1e-7;               // indifference tolerance for recovered preferences
};

/// demand, axioms, slutsky, jacobi, lemma6, definiteness, shephard, paths, cycles.
const std::vector<std::string>& reproduce_groups();

/// Runs the published numeric claims as assertions. Throws std::invalid_argument
/// for an unknown group.
Report reproduce(const ReproduceOptions& opts = {});

} // namespace gale
