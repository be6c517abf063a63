#include "dcyt/experiment.hpp"

#include <map>

#include "dcyt/consistency.hpp"
#include "dcyt/rng.hpp"

namespace dcyt {

std::optional<Criterion> baseline_for(Criterion criterion) {
    switch (criterion) {
        case Criterion::SimpleRead:
        case Criterion::AllReadsOnce:
        case Criterion::AllReadsOnceInfluenced:
            return Criterion::Dcyt1R;
        case Criterion::BestRead:
        case Criterion::AllReadsAlways:
        case Criterion::AllReadsAlwaysInfluenced:
            return Criterion::DcytNR;
        case Criterion::Dcyt1R:
        case Criterion::DcytNR:
            return std::nullopt;
    }
    return std::nullopt;
}

SutGenConfig InstanceSpec::resolve() const {
    if (config) return *config;
    return preset_config(preset);
}

ExperimentReport run_experiment(const std::vector<ArtificialSut>& instances,
                                const std::vector<std::string>& labels,
                                const ExperimentConfig& config, std::uint64_t seed) {
    if (instances.empty()) throw ModelError("experiment needs at least one SUT instance");
    if (instances.size() != labels.size())
        throw ModelError("instance/label count mismatch");
    bool has_baseline = false, has_extended = false;
    for (Criterion criterion : config.criteria) {
        has_baseline |= is_baseline(criterion);
        has_extended |= !is_baseline(criterion);
    }
    if (!has_baseline || !has_extended)
        throw ModelError("criteria must include at least one dcyt baseline and one extended "
                         "criterion");
    if (config.seeds_per_instance == 0)
        throw ModelError("seeds_per_instance must be positive");

    struct Accumulator {
        double steps = 0.0;
        double inconsistent = 0.0;
        double leakage = 0.0;
        double step_increase = 0.0;
        std::size_t runs = 0;
        std::size_t compared_runs = 0;
    };
    std::map<Criterion, Accumulator> totals;

    SimulateOptions sim_options;
    sim_options.strict_detection = config.strict_detection;

    for (std::size_t i = 0; i < instances.size(); ++i) {
        const ArtificialSut& sut = instances[i];
        for (std::size_t r = 0; r < config.seeds_per_instance; ++r) {
            std::uint64_t run_seed = derive_seed(seed, "run", labels[i], r);
            CrudMatrix matrix = derive_crud_matrix(sut, config.capture_ratio,
                                                   derive_seed(run_seed, "capture"));
            TransitionSystem ts = build_transition_system(sut);
            // one simulation seed per run couples the influence draws of
            // every criterion, so matched pairs see the same hazards
            std::uint64_t sim_seed = derive_seed(run_seed, "simulate");

            std::map<Criterion, SimulationReport> reports;
            for (Criterion criterion : config.criteria) {
                TestSuite suite = generate_suite(
                    matrix, criterion,
                    derive_seed(run_seed, "suite", criterion_name(criterion)));
                if (!is_baseline(criterion)) {
                    for (auto& test_case : suite.cases)
                        test_case = repair_case(test_case, ts, &matrix).repaired;
                }
                reports.emplace(criterion, simulate(suite, sut, sim_seed, sim_options));
            }

            for (Criterion criterion : config.criteria) {
                const SimulationReport& report = reports.at(criterion);
                Accumulator& acc = totals[criterion];
                acc.steps += static_cast<double>(report.total_steps);
                acc.inconsistent += report.inconsistent_ratio;
                acc.leakage += report.leakage_ratio;
                ++acc.runs;
                auto matched = baseline_for(criterion);
                if (matched && reports.count(*matched)) {
                    acc.step_increase += compare(reports.at(*matched), report).step_increase;
                    ++acc.compared_runs;
                }
            }
        }
    }

    ExperimentReport report;
    report.seed = seed;
    report.capture_ratio = config.capture_ratio;
    report.seeds_per_instance = config.seeds_per_instance;
    report.instance_labels = labels;
    for (Criterion criterion : config.criteria) {
        const Accumulator& acc = totals.at(criterion);
        CriterionMetrics row;
        row.criterion = criterion;
        row.baseline = baseline_for(criterion);
        row.avg_steps = acc.steps / static_cast<double>(acc.runs);
        row.avg_inconsistent_ratio = acc.inconsistent / static_cast<double>(acc.runs);
        row.avg_leakage_ratio = acc.leakage / static_cast<double>(acc.runs);
        if (acc.compared_runs > 0)
            row.avg_step_increase = acc.step_increase / static_cast<double>(acc.compared_runs);
        report.rows.push_back(row);
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config, std::uint64_t seed) {
    std::vector<ArtificialSut> instances;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < config.instances.size(); ++i) {
        const InstanceSpec& spec = config.instances[i];
        std::string label = spec.label;
        if (label.empty())
            label = spec.preset.empty() ? "instance-" + std::to_string(i + 1) : spec.preset;
        SutGenConfig sut_config = spec.resolve();
        if (!spec.config || spec.config->seed == 0)
            sut_config.seed = derive_seed(seed, "instance", label, i);
        instances.push_back(generate_sut(sut_config));
        labels.push_back(label);
    }
    return run_experiment(instances, labels, config, seed);
}

}  // namespace dcyt
