#pragma once

#include <map>
#include <set>

#include "dcyt/core.hpp"
#include "dcyt/matrix.hpp"

namespace dcyt {

struct WorkflowEdge {
    StateId from;
    StateId to;
    FunctionId function;

    auto operator<=>(const WorkflowEdge&) const = default;
};

// Oriented graph of allowed function sequences; nodes are system states.
struct WorkflowGraph {
    std::string id;
    std::vector<WorkflowEdge> edges;
};

// Lifecycle edge: a state transition labelled by a function, carrying the
// C/R/U/D operations that function performs on the lifecycle's entity.
struct LifecycleEdge {
    StateId from;
    StateId to;
    FunctionId function;
    std::vector<OperationSpec> ops;
};

struct LifecycleGraph {
    EntityId entity;
    std::vector<LifecycleEdge> edges;
};

struct DefectActivator {
    FunctionId function;
    OpKind op = OpKind::Read;

    bool operator==(const DefectActivator&) const = default;
};

// Injected data-consistency defect: `cause_function` corrupts `entity` via
// `cause_op`; any activator touching the corrupted entity afterwards
// surfaces the defect.
struct Defect {
    EntityId entity;
    FunctionId cause_function;
    OpKind cause_op = OpKind::Update;  // Create or Update
    std::vector<DefectActivator> activators;
};

// Cross-entity side effect: `function`, while mutating `source`, also
// changes `influenced`. With the given probability an unverified execution
// leaves the following test step inconsistent.
struct InfluenceFact {
    EntityId influenced;
    FunctionId function;
    EntityId source;
    double inconsistency_probability = 0.0;
};

struct ArtificialSut {
    std::vector<Function> functions;
    std::vector<Entity> entities;
    std::vector<StateId> states;
    StateId initial_state;
    std::vector<WorkflowGraph> workflows;
    std::vector<LifecycleGraph> lifecycles;
    std::vector<Defect> defects;
    std::vector<InfluenceFact> influence_facts;

    const Entity* find_entity(const EntityId& id) const;
    const Function* find_function(const FunctionId& id) const;
};

// Union of all workflow and lifecycle edges. Nondeterminism is preserved:
// a (state, function) pair may map to several successor states. `labels`
// keeps the function declaration order for deterministic tie-breaking; it
// is reconstructed (sorted by id) when left empty.
struct TransitionSystem {
    std::vector<StateId> states;
    StateId initial;
    std::map<std::pair<StateId, FunctionId>, std::set<StateId>> transitions;
    std::vector<FunctionId> labels;

    const std::set<StateId>* successors(const StateId& state, const FunctionId& fn) const;
    bool has_label(const FunctionId& fn) const;
    std::vector<FunctionId> ordered_labels() const;
};

/// Full invariant check: graph endpoints, per-entity lifecycles, defect and
/// influence references. Functions unreachable from the initial state are
/// warnings, everything else an error.
ValidationReport validate_sut(const ArtificialSut& sut);

/// Kinds a function performs on an entity, unioned over lifecycle edges.
std::set<OpKind> ops_performed(const ArtificialSut& sut, const FunctionId& fn,
                               const EntityId& entity);

/// Builds the extended CRUD matrix a test designer would derive from the
/// SUT. Lifecycle ops are unioned per cell; each influence fact is captured
/// as an I cell with probability `capture_ratio` (per-fact keyed draw, so
/// the captured set at a lower ratio is a subset of the set at a higher
/// one for the same seed); B marks are assigned per entity via
/// suggest_best_read.
CrudMatrix derive_crud_matrix(const ArtificialSut& sut, double capture_ratio,
                              std::uint64_t seed);

TransitionSystem build_transition_system(const ArtificialSut& sut);

/// Content hash of the whole SUT definition; stable across runs.
std::string sut_fingerprint(const ArtificialSut& sut);

}  // namespace dcyt
