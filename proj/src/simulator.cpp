#include "dcyt/simulator.hpp"

#include <algorithm>
#include <map>

#include "dcyt/rng.hpp"

namespace dcyt {

namespace {

OpKind read_normalised(OpKind kind) {
    return kind == OpKind::BestRead ? OpKind::Read : kind;
}

void require_suite_matches(const TestSuite& suite, const ArtificialSut& sut) {
    for (const auto& test_case : suite.cases) {
        if (!sut.find_entity(test_case.entity))
            throw ModelError("suite case entity '" + test_case.entity +
                             "' does not exist in the SUT");
        for (const auto& step : test_case.steps) {
            if (!sut.find_function(step.function))
                throw ModelError("suite function '" + step.function +
                                 "' does not exist in the SUT");
            if (!step.entity.empty() && !sut.find_entity(step.entity))
                throw ModelError("suite entity '" + step.entity +
                                 "' does not exist in the SUT");
        }
    }
}

// Steps a real execution would reach: everything before the first blocked
// function of the case.
std::size_t executed_prefix(const TestCase& test_case, const TransitionSystem& ts) {
    auto findings = check_case(test_case, ts);
    if (findings.empty()) return test_case.steps.size();
    return findings.front().blocked_step;
}

bool step_matches(const TestStep& step, const FunctionId& fn, OpKind op,
                  const EntityId& entity) {
    return step.function == fn && step.op && step.entity == entity &&
           read_normalised(step.op->kind) == read_normalised(op);
}

}  // namespace

std::vector<DefectRef> detect_defects(const TestSuite& suite, const ArtificialSut& sut,
                                      const SimulateOptions& options) {
    require_suite_matches(suite, sut);
    TransitionSystem ts;
    if (options.strict_detection) ts = build_transition_system(sut);

    std::vector<DefectRef> detected;
    for (std::size_t d = 0; d < sut.defects.size(); ++d) {
        const Defect& defect = sut.defects[d];
        bool found = false;
        for (const auto& test_case : suite.cases) {
            std::size_t limit = options.strict_detection
                                    ? executed_prefix(test_case, ts)
                                    : test_case.steps.size();
            bool cause_seen = false;
            for (std::size_t i = 0; i < limit && !found; ++i) {
                const TestStep& step = test_case.steps[i];
                if (cause_seen) {
                    for (const auto& activator : defect.activators)
                        if (step_matches(step, activator.function, activator.op,
                                         defect.entity))
                            found = true;
                }
                if (step_matches(step, defect.cause_function, defect.cause_op, defect.entity))
                    cause_seen = true;
            }
            if (found) break;
        }
        if (found)
            detected.push_back({d, defect.entity, defect.cause_function, defect.cause_op});
    }
    return detected;
}

SimulationReport simulate(const TestSuite& suite, const ArtificialSut& sut,
                          std::uint64_t seed, const SimulateOptions& options) {
    require_suite_matches(suite, sut);
    TransitionSystem ts = build_transition_system(sut);

    SimulationReport report;
    report.sut_fingerprint = sut_fingerprint(sut);
    report.criterion = criterion_name(suite.criterion);
    report.seed = seed;

    for (const auto& test_case : suite.cases) {
        const auto& steps = test_case.steps;
        std::set<std::size_t> marked;
        for (const auto& finding : check_case(test_case, ts))
            marked.insert(finding.step_index);

        // influence hazards: a mutation by a function that also changes
        // another entity corrupts it with probability p unless a read of
        // that entity follows before the case entity mutates again
        std::size_t influence_events = 0;
        std::map<std::size_t, std::uint64_t> occurrences;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            const TestStep& step = steps[i];
            if (!step.op || !is_mutation(step.op->kind) || step.entity != test_case.entity)
                continue;
            for (std::size_t f = 0; f < sut.influence_facts.size(); ++f) {
                const InfluenceFact& fact = sut.influence_facts[f];
                if (fact.function != step.function || fact.source != test_case.entity)
                    continue;
                std::uint64_t occurrence = occurrences[f]++;
                bool verified = false;
                for (std::size_t j = i + 1; j < steps.size(); ++j) {
                    const TestStep& later = steps[j];
                    if (later.op && is_mutation(later.op->kind) &&
                        later.entity == test_case.entity)
                        break;
                    if (later.op && is_read(later.op->kind) &&
                        later.entity == fact.influenced) {
                        verified = true;
                        break;
                    }
                }
                if (verified) continue;
                if (i + 1 >= steps.size()) continue;  // nothing left to corrupt
                Rng draw(derive_seed(seed, "influence",
                                     test_case.entity + "|" + fact.influenced + "|" +
                                         fact.function + "|" + fact.source,
                                     fnv1a64(f, occurrence)));
                if (draw.unit_real() < fact.inconsistency_probability) {
                    marked.insert(i + 1);
                    ++influence_events;
                }
            }
        }

        CaseBreakdown breakdown;
        breakdown.entity = test_case.entity;
        breakdown.total_steps = steps.size();
        breakdown.inconsistent_steps.assign(marked.begin(), marked.end());
        breakdown.influence_events = influence_events;
        report.total_steps += steps.size();
        report.inconsistent_steps += marked.size();
        report.per_case.push_back(std::move(breakdown));
    }

    report.inconsistent_ratio =
        report.total_steps == 0
            ? 0.0
            : static_cast<double>(report.inconsistent_steps) / report.total_steps;

    report.detected_defects = detect_defects(suite, sut, options);
    std::set<std::size_t> detected_indices;
    for (const auto& ref : report.detected_defects) detected_indices.insert(ref.index);
    for (std::size_t d = 0; d < sut.defects.size(); ++d)
        if (!detected_indices.count(d))
            report.leaked_defects.push_back({d, sut.defects[d].entity,
                                             sut.defects[d].cause_function,
                                             sut.defects[d].cause_op});
    report.leakage_ratio =
        sut.defects.empty()
            ? 0.0
            : static_cast<double>(report.leaked_defects.size()) / sut.defects.size();
    return report;
}

Comparison compare(const SimulationReport& baseline, const SimulationReport& candidate) {
    if (baseline.sut_fingerprint != candidate.sut_fingerprint)
        throw ModelError("reports refer to different SUTs");
    if (baseline.total_steps == 0)
        throw ModelError("baseline report has zero steps");
    Comparison result;
    result.step_increase =
        (static_cast<double>(candidate.total_steps) - static_cast<double>(baseline.total_steps)) /
        static_cast<double>(baseline.total_steps);
    result.inconsistent_delta = candidate.inconsistent_ratio - baseline.inconsistent_ratio;
    result.leakage_delta = candidate.leakage_ratio - baseline.leakage_ratio;
    return result;
}

}  // namespace dcyt
