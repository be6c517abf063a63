#pragma once

#include <map>
#include <optional>
#include <utility>

#include "dcyt/core.hpp"

namespace dcyt {

// Extended CRUD matrix: functions (rows) x entities (columns), each cell a
// set of operations. Declaration order of entities, functions and
// attributes is significant everywhere: it is the universal tie-breaker.
//
// `attributed` distinguishes the extended form (R/U/B carry attribute sets,
// B and I allowed) from the plain form produced by erase_attributes() and
// CSV import (attribute-free R/U, no B, no I).
struct CrudMatrix {
    std::vector<Entity> entities;
    std::vector<Function> functions;
    std::map<std::pair<FunctionId, EntityId>, std::vector<OperationSpec>> cells;
    bool attributed = true;

    const Entity* find_entity(const EntityId& id) const;
    const Function* find_function(const FunctionId& id) const;
    const std::vector<OperationSpec>* cell(const FunctionId& fn, const EntityId& ent) const;

    /// Appends one operation to a cell, keeping the cell's canonical order
    /// (kind order C,R,U,D,B,I; I sub-ordered by source entity).
    void add_op(const FunctionId& fn, const EntityId& ent, OperationSpec op);
};

// Per-entity view over a matrix column, lists in function declaration
// order. `influence_targets` holds every (function, influenced entity)
// whose cell carries I(this entity) — i.e. the entities a test case for
// this entity should additionally verify.
struct EntityOperations {
    std::vector<std::pair<FunctionId, OperationSpec>> creates;
    std::vector<std::pair<FunctionId, OperationSpec>> reads;  // R and B
    std::vector<std::pair<FunctionId, OperationSpec>> updates;
    std::vector<std::pair<FunctionId, OperationSpec>> deletes;
    std::vector<std::pair<FunctionId, EntityId>> influence_targets;
};

/// Checks every matrix invariant and reports all violations at once.
/// Structural breaches are errors; a generatable entity missing one of
/// C/D/read is reported as a warning (generation later skips it).
ValidationReport validate_matrix(const CrudMatrix& matrix);

/// Widest-read suggestion: the function whose R on `entity` reads the most
/// attributes, ties broken by function declaration order. Empty when the
/// entity has no R operation. An explicit B in the input always outranks
/// the suggestion; callers keep it.
std::optional<FunctionId> suggest_best_read(const CrudMatrix& matrix, const EntityId& entity);

/// Column scan for one entity; throws ModelError on an unknown id.
EntityOperations operations_on(const CrudMatrix& matrix, const EntityId& entity);

/// The entity's B operation if declared, otherwise the widest R (the
/// stand-in used where a best read is required but none was marked).
std::optional<std::pair<FunctionId, OperationSpec>> effective_best_read(
    const CrudMatrix& matrix, const EntityId& entity);

/// Plain-matrix reduction: attribute sets dropped, B becomes R, I removed.
CrudMatrix erase_attributes(const CrudMatrix& matrix);

/// Content hash over every field in declaration order; stable across runs.
std::string matrix_fingerprint(const CrudMatrix& matrix);

}  // namespace dcyt
