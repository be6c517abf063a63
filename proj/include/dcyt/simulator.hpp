#pragma once

#include "dcyt/consistency.hpp"
#include "dcyt/generator.hpp"
#include "dcyt/sut.hpp"

namespace dcyt {

// Reference to a SUT defect by position, with the cause triple repeated
// for readable reports.
struct DefectRef {
    std::size_t index = 0;
    EntityId entity;
    FunctionId cause_function;
    OpKind cause_op = OpKind::Update;

    bool operator==(const DefectRef&) const = default;
    bool operator<(const DefectRef& other) const { return index < other.index; }
};

struct CaseBreakdown {
    EntityId entity;
    std::size_t total_steps = 0;
    std::vector<std::size_t> inconsistent_steps;  // marked step indices, sorted
    std::size_t influence_events = 0;             // fired (non-neutralised) draws
};

struct SimulationReport {
    std::string sut_fingerprint;
    std::string criterion;
    std::uint64_t seed = 0;
    std::size_t total_steps = 0;
    std::size_t inconsistent_steps = 0;
    double inconsistent_ratio = 0.0;
    std::vector<DefectRef> detected_defects;
    std::vector<DefectRef> leaked_defects;
    double leakage_ratio = 0.0;
    std::vector<CaseBreakdown> per_case;
};

struct Comparison {
    double step_increase = 0.0;       // (candidate - baseline) / baseline steps
    double inconsistent_delta = 0.0;  // candidate ratio - baseline ratio
    double leakage_delta = 0.0;
};

struct SimulateOptions {
    // When set, defect detection only counts steps a real execution would
    // reach: everything after a case's first adjacency inconsistency is
    // ignored.
    bool strict_detection = false;
};

/// Sequence-based defect detection: a defect is detected iff some case
/// contains its cause step (cause function performing the cause op on the
/// defect's entity) followed later by an activator step (activator function
/// performing its op on that entity; B counts as R).
std::vector<DefectRef> detect_defects(const TestSuite& suite, const ArtificialSut& sut,
                                      const SimulateOptions& options = {});

/// Runs the suite against the SUT model. Inconsistent steps combine the
/// adjacency findings of check_case with influence hazards: every mutation
/// step whose function influences another entity draws Bernoulli(p) and on
/// success marks the following step inconsistent, unless a read of the
/// influenced entity appears before the next mutation of the case entity
/// (the verification neutralises the hazard). Draws are keyed by
/// (seed, entity, fact, occurrence), so matched suites share them.
SimulationReport simulate(const TestSuite& suite, const ArtificialSut& sut,
                          std::uint64_t seed, const SimulateOptions& options = {});

/// Metric deltas between two reports over the same SUT. Throws on a
/// fingerprint mismatch or a zero-step baseline.
Comparison compare(const SimulationReport& baseline, const SimulationReport& candidate);

}  // namespace dcyt
