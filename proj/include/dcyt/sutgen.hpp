#pragma once

#include "dcyt/sut.hpp"

namespace dcyt {

struct CountRange {
    std::size_t min = 1;
    std::size_t max = 1;

    bool operator==(const CountRange&) const = default;
};

// Knobs for the random SUT builder. ops_density is the probability that a
// lifecycle edge carries each of R/U beyond the structurally guaranteed
// operations; it also scales the number of extra (non-tree) lifecycle
// edges.
struct SutGenConfig {
    std::size_t num_entities = 1;
    CountRange attrs_per_entity{1, 1};
    std::size_t num_functions = 1;
    std::size_t num_states = 2;
    std::size_t num_workflows = 0;
    CountRange edges_per_workflow{1, 1};
    double ops_density = 0.5;
    std::size_t num_defects = 0;
    CountRange activators_per_defect{1, 1};
    std::size_t num_influence_facts = 0;
    double influence_probability = 0.0;
    std::uint64_t seed = 0;
};

/// Validates config invariants (counts, ranges, probabilities); throws
/// ConfigError on the first breach.
void validate_config(const SutGenConfig& config);

/// Builds a random SUT that always validates cleanly: every entity gets a
/// Create, a Delete and at least one Read; every lifecycle is connected
/// from the initial state; every function labels at least one edge.
/// Identical configs give identical SUTs. Throws ConfigError when the
/// requested counts cannot be satisfied.
ArtificialSut generate_sut(const SutGenConfig& config);

/// Adds `n` defects to an existing SUT, sampling cause triples (entity,
/// function, C|U) without replacement from sites not already used, each
/// with an activator set drawn from the functions touching the entity.
/// Everything else is returned unchanged.
ArtificialSut inject_defects(const ArtificialSut& sut, std::size_t n,
                             CountRange activators_range, std::uint64_t seed);

/// Named preset configs (small, medium, large, xlarge) for the experiment
/// pipeline. Throws ConfigError on an unknown name.
SutGenConfig preset_config(const std::string& name);
const std::vector<std::string>& preset_names();

}  // namespace dcyt
