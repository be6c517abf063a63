#pragma once

#include "dcyt/generator.hpp"
#include "dcyt/simulator.hpp"
#include "dcyt/sut.hpp"
#include "dcyt/sutgen.hpp"

namespace dcyt {

// One SUT instance of an experiment: a named preset or an inline config.
struct InstanceSpec {
    std::string label;
    std::string preset;                  // set when built from a preset
    std::optional<SutGenConfig> config;  // set when given inline

    SutGenConfig resolve() const;
};

struct ExperimentConfig {
    std::vector<InstanceSpec> instances;
    std::vector<Criterion> criteria;
    double capture_ratio = 1.0;
    std::size_t seeds_per_instance = 10;
    bool strict_detection = false;
};

// One averaged report row, Table-style: criterion, mean inconsistent-step
// ratio, mean defect-leakage ratio, and for the extended criteria the mean
// relative step increase over the matched baseline run.
struct CriterionMetrics {
    Criterion criterion = Criterion::Dcyt1R;
    std::optional<Criterion> baseline;
    double avg_steps = 0.0;
    double avg_inconsistent_ratio = 0.0;
    double avg_leakage_ratio = 0.0;
    std::optional<double> avg_step_increase;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    double capture_ratio = 1.0;
    std::size_t seeds_per_instance = 0;
    std::vector<std::string> instance_labels;
    std::vector<CriterionMetrics> rows;
};

/// The Dcyt baseline an extended criterion is compared against (one-read
/// criteria against dcyt-1r, all-read criteria against dcyt-nr); empty for
/// the baselines themselves.
std::optional<Criterion> baseline_for(Criterion criterion);

/// End-to-end evaluation: per instance and per derived seed, derive the
/// matrix, generate one suite per criterion (extended suites are repaired,
/// baselines are not), simulate, and average the metrics per criterion
/// over all runs. Requires at least one instance, one baseline criterion
/// and one extended criterion.
ExperimentReport run_experiment(const std::vector<ArtificialSut>& instances,
                                const std::vector<std::string>& labels,
                                const ExperimentConfig& config, std::uint64_t seed);

/// Convenience wrapper: generates the instances from the config first.
ExperimentReport run_experiment(const ExperimentConfig& config, std::uint64_t seed);

}  // namespace dcyt
