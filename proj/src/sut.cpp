#include "dcyt/sut.hpp"

#include <algorithm>
#include <deque>

#include "dcyt/rng.hpp"

namespace dcyt {

const Entity* ArtificialSut::find_entity(const EntityId& id) const {
    for (const auto& e : entities)
        if (e.id == id) return &e;
    return nullptr;
}

const Function* ArtificialSut::find_function(const FunctionId& id) const {
    for (const auto& f : functions)
        if (f.id == id) return &f;
    return nullptr;
}

const std::set<StateId>* TransitionSystem::successors(const StateId& state,
                                                      const FunctionId& fn) const {
    auto it = transitions.find({state, fn});
    return it == transitions.end() ? nullptr : &it->second;
}

bool TransitionSystem::has_label(const FunctionId& fn) const {
    for (const auto& [key, targets] : transitions)
        if (key.second == fn && !targets.empty()) return true;
    return false;
}

std::vector<FunctionId> TransitionSystem::ordered_labels() const {
    if (!labels.empty()) return labels;
    std::set<FunctionId> seen;
    for (const auto& [key, targets] : transitions) seen.insert(key.second);
    return {seen.begin(), seen.end()};
}

std::set<OpKind> ops_performed(const ArtificialSut& sut, const FunctionId& fn,
                               const EntityId& entity) {
    std::set<OpKind> kinds;
    for (const auto& lifecycle : sut.lifecycles) {
        if (lifecycle.entity != entity) continue;
        for (const auto& edge : lifecycle.edges) {
            if (edge.function != fn) continue;
            for (const auto& op : edge.ops) kinds.insert(op.kind);
        }
    }
    return kinds;
}

ValidationReport validate_sut(const ArtificialSut& sut) {
    ValidationReport report;

    std::set<StateId> states(sut.states.begin(), sut.states.end());
    if (states.size() != sut.states.size())
        report.add(Severity::Error, "duplicate-state", "", "", "state declared more than once");
    for (const auto& state : sut.states)
        if (state.empty())
            report.add(Severity::Error, "empty-state-id", "", "", "state id is empty");
    if (!states.count(sut.initial_state))
        report.add(Severity::Error, "unknown-initial-state", "", "",
                   "initial state '" + sut.initial_state + "' is not declared");

    std::set<EntityId> entity_ids;
    for (const auto& entity : sut.entities) {
        if (entity.id.empty())
            report.add(Severity::Error, "empty-entity-id", "", entity.id, "entity id is empty");
        else if (!entity_ids.insert(entity.id).second)
            report.add(Severity::Error, "duplicate-entity", "", entity.id,
                       "entity declared more than once");
        if (entity.attributes.empty())
            report.add(Severity::Error, "no-attributes", "", entity.id,
                       "entity has no attributes");
    }
    std::set<FunctionId> function_ids;
    for (const auto& fn : sut.functions) {
        if (fn.id.empty())
            report.add(Severity::Error, "empty-function-id", fn.id, "", "function id is empty");
        else if (!function_ids.insert(fn.id).second)
            report.add(Severity::Error, "duplicate-function", fn.id, "",
                       "function declared more than once");
    }

    auto check_edge_refs = [&](const StateId& from, const StateId& to, const FunctionId& fn,
                               const std::string& where) {
        if (!states.count(from))
            report.add(Severity::Error, "unknown-state", fn, "",
                       where + " edge starts at undeclared state '" + from + "'");
        if (!states.count(to))
            report.add(Severity::Error, "unknown-state", fn, "",
                       where + " edge ends at undeclared state '" + to + "'");
        if (!function_ids.count(fn))
            report.add(Severity::Error, "unknown-function", fn, "",
                       where + " edge labelled by undeclared function");
    };

    for (const auto& workflow : sut.workflows)
        for (const auto& edge : workflow.edges)
            check_edge_refs(edge.from, edge.to, edge.function, "workflow '" + workflow.id + "'");

    std::set<EntityId> lifecycle_entities;
    for (const auto& lifecycle : sut.lifecycles) {
        if (!entity_ids.count(lifecycle.entity)) {
            report.add(Severity::Error, "lifecycle-unknown-entity", "", lifecycle.entity,
                       "lifecycle for undeclared entity");
            continue;
        }
        if (!lifecycle_entities.insert(lifecycle.entity).second)
            report.add(Severity::Error, "duplicate-lifecycle", "", lifecycle.entity,
                       "entity has more than one lifecycle");
        const Entity* entity = sut.find_entity(lifecycle.entity);
        for (const auto& edge : lifecycle.edges) {
            check_edge_refs(edge.from, edge.to, edge.function, "lifecycle");
            for (const auto& op : edge.ops) {
                if (op.kind == OpKind::BestRead || op.kind == OpKind::Influenced) {
                    report.add(Severity::Error, "invalid-lifecycle-op", edge.function,
                               lifecycle.entity,
                               std::string("lifecycle edge carries operation ") +
                                   op_letter(op.kind));
                    continue;
                }
                for (const auto& attr : op.attributes) {
                    if (!entity ||
                        std::find(entity->attributes.begin(), entity->attributes.end(), attr) ==
                            entity->attributes.end())
                        report.add(Severity::Error, "attribute-not-declared", edge.function,
                                   lifecycle.entity,
                                   "attribute '" + attr + "' is not declared on the entity");
                }
                if ((op.kind == OpKind::Create || op.kind == OpKind::Delete) &&
                    !op.attributes.empty())
                    report.add(Severity::Error, "unexpected-attributes", edge.function,
                               lifecycle.entity, "C/D operations carry no attributes");
            }
        }
    }
    if (lifecycle_entities.size() != sut.entities.size() ||
        sut.lifecycles.size() != sut.entities.size())
        report.add(Severity::Error, "lifecycle-count", "", "",
                   "number of lifecycles differs from number of entities");

    for (const auto& defect : sut.defects) {
        if (!entity_ids.count(defect.entity)) {
            report.add(Severity::Error, "defect-unknown-entity", defect.cause_function,
                       defect.entity, "defect on undeclared entity");
            continue;
        }
        if (defect.cause_op != OpKind::Create && defect.cause_op != OpKind::Update)
            report.add(Severity::Error, "defect-invalid-cause-op", defect.cause_function,
                       defect.entity, "cause operation must be C or U");
        else if (!ops_performed(sut, defect.cause_function, defect.entity).count(defect.cause_op))
            report.add(Severity::Error, "defect-cause-not-performed", defect.cause_function,
                       defect.entity,
                       std::string("function does not perform ") + op_letter(defect.cause_op) +
                           " on the entity");
        if (defect.activators.empty())
            report.add(Severity::Error, "defect-no-activators", defect.cause_function,
                       defect.entity, "defect has no activators");
        for (const auto& activator : defect.activators) {
            if (!ops_performed(sut, activator.function, defect.entity).count(activator.op))
                report.add(Severity::Error, "activator-not-performed", activator.function,
                           defect.entity,
                           std::string("activator does not perform ") + op_letter(activator.op) +
                               " on the entity");
        }
    }

    for (const auto& fact : sut.influence_facts) {
        if (fact.influenced == fact.source)
            report.add(Severity::Error, "influence-self", fact.function, fact.influenced,
                       "influenced entity equals the source entity");
        if (!entity_ids.count(fact.influenced) || !entity_ids.count(fact.source)) {
            report.add(Severity::Error, "influence-unknown-entity", fact.function,
                       fact.influenced, "influence fact references an undeclared entity");
            continue;
        }
        auto kinds = ops_performed(sut, fact.function, fact.source);
        if (!kinds.count(OpKind::Create) && !kinds.count(OpKind::Update) &&
            !kinds.count(OpKind::Delete))
            report.add(Severity::Error, "influence-without-backing", fact.function,
                       fact.influenced,
                       "function performs no C, U or D on source '" + fact.source + "'");
        if (fact.inconsistency_probability < 0.0 || fact.inconsistency_probability > 1.0)
            report.add(Severity::Error, "influence-bad-probability", fact.function,
                       fact.influenced, "probability outside [0, 1]");
    }

    // reachability of function labels from the initial state
    if (!report.has_errors()) {
        TransitionSystem ts = build_transition_system(sut);
        std::set<StateId> reachable{ts.initial};
        std::deque<StateId> frontier{ts.initial};
        while (!frontier.empty()) {
            StateId state = frontier.front();
            frontier.pop_front();
            for (const auto& [key, targets] : ts.transitions) {
                if (key.first != state) continue;
                for (const auto& target : targets)
                    if (reachable.insert(target).second) frontier.push_back(target);
            }
        }
        std::set<FunctionId> reachable_labels;
        for (const auto& [key, targets] : ts.transitions)
            if (reachable.count(key.first)) reachable_labels.insert(key.second);
        for (const auto& fn : sut.functions)
            if (!reachable_labels.count(fn.id))
                report.add(Severity::Warning, "unreachable-function", fn.id, "",
                           "function labels no edge reachable from the initial state");
    }

    return report;
}

CrudMatrix derive_crud_matrix(const ArtificialSut& sut, double capture_ratio,
                              std::uint64_t seed) {
    ValidationReport check = validate_sut(sut);
    if (check.has_errors())
        throw ModelError("cannot derive a matrix from an invalid SUT:\n" + check.to_string());

    CrudMatrix matrix;
    matrix.entities = sut.entities;
    matrix.functions = sut.functions;
    matrix.attributed = true;

    for (const auto& lifecycle : sut.lifecycles) {
        const Entity* entity = sut.find_entity(lifecycle.entity);
        // union the ops of all edges labelled by the same function
        for (const auto& fn : sut.functions) {
            std::set<OpKind> kinds;
            std::set<AttributeId> read_attrs, update_attrs;
            for (const auto& edge : lifecycle.edges) {
                if (edge.function != fn.id) continue;
                for (const auto& op : edge.ops) {
                    kinds.insert(op.kind);
                    auto& attrs = op.kind == OpKind::Read ? read_attrs : update_attrs;
                    if (op.kind == OpKind::Read || op.kind == OpKind::Update)
                        attrs.insert(op.attributes.begin(), op.attributes.end());
                }
            }
            auto ordered = [&](const std::set<AttributeId>& attrs) {
                std::vector<AttributeId> out;
                for (const auto& attr : entity->attributes)
                    if (attrs.count(attr)) out.push_back(attr);
                return out;
            };
            if (kinds.count(OpKind::Create))
                matrix.add_op(fn.id, lifecycle.entity, OperationSpec::create());
            if (kinds.count(OpKind::Read))
                matrix.add_op(fn.id, lifecycle.entity, OperationSpec::read(ordered(read_attrs)));
            if (kinds.count(OpKind::Update))
                matrix.add_op(fn.id, lifecycle.entity,
                              OperationSpec::update(ordered(update_attrs)));
            if (kinds.count(OpKind::Delete))
                matrix.add_op(fn.id, lifecycle.entity, OperationSpec::del());
        }
    }

    // partial capture of influence facts; the per-fact draw is keyed by the
    // fact's content (not capture_ratio or list position), so lower ratios
    // capture subsets of higher ones and unrelated facts keep their draws
    std::map<std::string, std::uint64_t> repeats;
    for (const auto& fact : sut.influence_facts) {
        std::string key = fact.influenced + "|" + fact.function + "|" + fact.source;
        Rng draw(derive_seed(seed, "capture", key, repeats[key]++));
        if (draw.unit_real() >= capture_ratio) continue;
        OperationSpec op = OperationSpec::influenced(fact.source);
        const auto* existing = matrix.cell(fact.function, fact.influenced);
        bool duplicate = existing && std::find(existing->begin(), existing->end(), op) !=
                                         existing->end();
        if (!duplicate) matrix.add_op(fact.function, fact.influenced, std::move(op));
    }

    // promote the widest read of each entity to its best read
    for (const auto& entity : sut.entities) {
        auto best = suggest_best_read(matrix, entity.id);
        if (!best) continue;
        auto& ops = matrix.cells[{*best, entity.id}];
        for (auto& op : ops)
            if (op.kind == OpKind::Read) op.kind = OpKind::BestRead;
    }

    return matrix;
}

TransitionSystem build_transition_system(const ArtificialSut& sut) {
    TransitionSystem ts;
    ts.states = sut.states;
    ts.initial = sut.initial_state;
    for (const auto& fn : sut.functions) ts.labels.push_back(fn.id);
    for (const auto& workflow : sut.workflows)
        for (const auto& edge : workflow.edges)
            ts.transitions[{edge.from, edge.function}].insert(edge.to);
    for (const auto& lifecycle : sut.lifecycles)
        for (const auto& edge : lifecycle.edges)
            ts.transitions[{edge.from, edge.function}].insert(edge.to);
    return ts;
}

std::string sut_fingerprint(const ArtificialSut& sut) {
    std::uint64_t h = fnv1a64(kFnvOffset, std::string("sut"));
    for (const auto& fn : sut.functions) {
        h = fnv1a64(h, fn.id);
        h = fnv1a64(h, fn.name);
        h = fnv1a64(h, fn.priority ? static_cast<std::uint64_t>(*fn.priority) + 1 : 0);
    }
    for (const auto& entity : sut.entities) {
        h = fnv1a64(h, entity.id);
        for (const auto& attr : entity.attributes) h = fnv1a64(h, attr);
    }
    for (const auto& state : sut.states) h = fnv1a64(h, state);
    h = fnv1a64(h, sut.initial_state);
    for (const auto& workflow : sut.workflows) {
        h = fnv1a64(h, workflow.id);
        for (const auto& edge : workflow.edges) {
            h = fnv1a64(h, edge.from);
            h = fnv1a64(h, edge.to);
            h = fnv1a64(h, edge.function);
        }
    }
    for (const auto& lifecycle : sut.lifecycles) {
        h = fnv1a64(h, lifecycle.entity);
        for (const auto& edge : lifecycle.edges) {
            h = fnv1a64(h, edge.from);
            h = fnv1a64(h, edge.to);
            h = fnv1a64(h, edge.function);
            for (const auto& op : edge.ops) {
                h = fnv1a64(h, std::string(1, op_letter(op.kind)));
                for (const auto& attr : op.attributes) h = fnv1a64(h, attr);
            }
        }
    }
    for (const auto& defect : sut.defects) {
        h = fnv1a64(h, defect.entity);
        h = fnv1a64(h, defect.cause_function);
        h = fnv1a64(h, std::string(1, op_letter(defect.cause_op)));
        for (const auto& activator : defect.activators) {
            h = fnv1a64(h, activator.function);
            h = fnv1a64(h, std::string(1, op_letter(activator.op)));
        }
    }
    for (const auto& fact : sut.influence_facts) {
        h = fnv1a64(h, fact.influenced);
        h = fnv1a64(h, fact.function);
        h = fnv1a64(h, fact.source);
        h = fnv1a64(h, static_cast<std::uint64_t>(fact.inconsistency_probability * 1e9));
    }
    return hash_hex(h);
}

}  // namespace dcyt
