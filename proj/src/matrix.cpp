#include "dcyt/matrix.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace dcyt {

namespace {

int kind_rank(OpKind kind) {
    switch (kind) {
        case OpKind::Create: return 0;
        case OpKind::Read: return 1;
        case OpKind::Update: return 2;
        case OpKind::Delete: return 3;
        case OpKind::BestRead: return 4;
        case OpKind::Influenced: return 5;
    }
    return 6;
}

std::size_t index_of_entity(const CrudMatrix& matrix, const EntityId& id) {
    for (std::size_t i = 0; i < matrix.entities.size(); ++i)
        if (matrix.entities[i].id == id) return i;
    return matrix.entities.size();
}

}  // namespace

const Entity* CrudMatrix::find_entity(const EntityId& id) const {
    for (const auto& e : entities)
        if (e.id == id) return &e;
    return nullptr;
}

const Function* CrudMatrix::find_function(const FunctionId& id) const {
    for (const auto& f : functions)
        if (f.id == id) return &f;
    return nullptr;
}

const std::vector<OperationSpec>* CrudMatrix::cell(const FunctionId& fn,
                                                   const EntityId& ent) const {
    auto it = cells.find({fn, ent});
    return it == cells.end() ? nullptr : &it->second;
}

void CrudMatrix::add_op(const FunctionId& fn, const EntityId& ent, OperationSpec op) {
    auto& cell_ops = cells[{fn, ent}];
    cell_ops.push_back(std::move(op));
    std::stable_sort(cell_ops.begin(), cell_ops.end(),
                     [this](const OperationSpec& a, const OperationSpec& b) {
                         if (kind_rank(a.kind) != kind_rank(b.kind))
                             return kind_rank(a.kind) < kind_rank(b.kind);
                         if (a.kind == OpKind::Influenced)
                             return index_of_entity(*this, a.source_entity) <
                                    index_of_entity(*this, b.source_entity);
                         return false;
                     });
}

ValidationReport validate_matrix(const CrudMatrix& matrix) {
    ValidationReport report;

    std::set<EntityId> entity_ids;
    for (const auto& entity : matrix.entities) {
        if (entity.id.empty()) {
            report.add(Severity::Error, "empty-entity-id", "", entity.id, "entity id is empty");
            continue;
        }
        if (!entity_ids.insert(entity.id).second)
            report.add(Severity::Error, "duplicate-entity", "", entity.id,
                       "entity declared more than once");
        if (matrix.attributed && entity.attributes.empty())
            report.add(Severity::Error, "no-attributes", "", entity.id,
                       "entity has no attributes");
        std::set<AttributeId> attrs;
        for (const auto& attr : entity.attributes) {
            if (attr.empty())
                report.add(Severity::Error, "empty-attribute", "", entity.id,
                           "attribute id is empty");
            else if (!attrs.insert(attr).second)
                report.add(Severity::Error, "duplicate-attribute", "", entity.id,
                           "attribute '" + attr + "' declared more than once");
        }
        for (const auto& sub : entity.sub_entities) {
            if (sub == entity.id)
                report.add(Severity::Error, "self-sub-entity", "", entity.id,
                           "entity lists itself as a sub-entity");
            else if (!matrix.find_entity(sub))
                report.add(Severity::Error, "unknown-sub-entity", "", entity.id,
                           "sub-entity '" + sub + "' is not declared");
        }
    }

    // sub-entity cycles (self-references are reported above)
    {
        std::map<EntityId, int> mark;  // 0 unvisited, 1 on stack, 2 done
        auto dfs = [&](auto&& self, const Entity& entity) -> bool {
            int& m = mark[entity.id];
            if (m == 1) return true;
            if (m == 2) return false;
            m = 1;
            for (const auto& sub : entity.sub_entities) {
                if (sub == entity.id) continue;
                const Entity* child = matrix.find_entity(sub);
                if (child && self(self, *child)) return true;
            }
            m = 2;
            return false;
        };
        for (const auto& entity : matrix.entities) {
            if (mark[entity.id] == 0 && dfs(dfs, entity)) {
                report.add(Severity::Error, "sub-entity-cycle", "", entity.id,
                           "sub-entity references form a cycle");
                break;
            }
        }
    }

    std::set<FunctionId> function_ids;
    for (const auto& fn : matrix.functions) {
        if (fn.id.empty())
            report.add(Severity::Error, "empty-function-id", fn.id, "", "function id is empty");
        else if (!function_ids.insert(fn.id).second)
            report.add(Severity::Error, "duplicate-function", fn.id, "",
                       "function declared more than once");
    }

    for (const auto& [key, ops] : matrix.cells) {
        const auto& [fn, ent] = key;
        const Entity* entity = matrix.find_entity(ent);
        if (!matrix.find_function(fn))
            report.add(Severity::Error, "cell-unknown-function", fn, ent,
                       "cell references an undeclared function");
        if (!entity) {
            report.add(Severity::Error, "cell-unknown-entity", fn, ent,
                       "cell references an undeclared entity");
            continue;
        }
        std::set<OpKind> seen_kinds;
        std::set<EntityId> seen_sources;
        for (const auto& op : ops) {
            if (op.kind == OpKind::Influenced) {
                if (!seen_sources.insert(op.source_entity).second)
                    report.add(Severity::Error, "duplicate-influence", fn, ent,
                               "I(" + op.source_entity + ") repeated in one cell");
            } else if (!seen_kinds.insert(op.kind).second) {
                report.add(Severity::Error, "duplicate-op-kind", fn, ent,
                           std::string("operation ") + op_letter(op.kind) +
                               " repeated in one cell");
            }

            switch (op.kind) {
                case OpKind::Read:
                case OpKind::Update:
                case OpKind::BestRead: {
                    if (matrix.attributed && op.attributes.empty())
                        report.add(Severity::Error, "read-update-without-attributes", fn, ent,
                                   std::string("operation ") + op_letter(op.kind) +
                                       " carries no attributes");
                    if (!matrix.attributed && !op.attributes.empty())
                        report.add(Severity::Error, "unexpected-attributes", fn, ent,
                                   "plain matrix operation carries attributes");
                    if (!matrix.attributed && op.kind == OpKind::BestRead)
                        report.add(Severity::Error, "best-read-in-plain", fn, ent,
                                   "plain matrix may not contain B operations");
                    std::set<AttributeId> op_attrs;
                    for (const auto& attr : op.attributes) {
                        if (!op_attrs.insert(attr).second)
                            report.add(Severity::Error, "duplicate-op-attribute", fn, ent,
                                       "attribute '" + attr + "' repeated in one operation");
                        if (std::find(entity->attributes.begin(), entity->attributes.end(),
                                      attr) == entity->attributes.end())
                            report.add(Severity::Error, "attribute-not-declared", fn, ent,
                                       "attribute '" + attr + "' is not declared on entity '" +
                                           ent + "'");
                    }
                    break;
                }
                case OpKind::Create:
                case OpKind::Delete:
                    if (!op.attributes.empty())
                        report.add(Severity::Error, "unexpected-attributes", fn, ent,
                                   std::string("operation ") + op_letter(op.kind) +
                                       " carries attributes");
                    break;
                case OpKind::Influenced:
                    if (!matrix.attributed)
                        report.add(Severity::Error, "influence-in-plain", fn, ent,
                                   "plain matrix may not contain I operations");
                    if (op.source_entity == ent)
                        report.add(Severity::Error, "influence-self", fn, ent,
                                   "I source equals the cell's own entity");
                    else if (!matrix.find_entity(op.source_entity))
                        report.add(Severity::Error, "influence-unknown-source", fn, ent,
                                   "I source '" + op.source_entity + "' is not declared");
                    break;
            }
            if (op.kind != OpKind::Influenced && !op.source_entity.empty())
                report.add(Severity::Error, "unexpected-source", fn, ent,
                           "source entity set on a non-I operation");
        }
        if (seen_kinds.count(OpKind::Read) && seen_kinds.count(OpKind::BestRead))
            report.add(Severity::Error, "read-and-best-read", fn, ent,
                       "cell contains both R and B; B replaces the R it was chosen from");
    }

    // column-level rules, in entity declaration order
    for (const auto& entity : matrix.entities) {
        std::size_t best_reads = 0;
        bool has_create = false, has_delete = false, has_read = false;
        for (const auto& fn : matrix.functions) {
            const auto* ops = matrix.cell(fn.id, entity.id);
            if (!ops) continue;
            for (const auto& op : *ops) {
                if (op.kind == OpKind::BestRead) ++best_reads;
                if (op.kind == OpKind::Create) has_create = true;
                if (op.kind == OpKind::Delete) has_delete = true;
                if (is_read(op.kind)) has_read = true;
            }
        }
        if (best_reads > 1)
            report.add(Severity::Error, "multiple-best-reads", "", entity.id,
                       "entity column contains more than one B operation");
        if (!has_create)
            report.add(Severity::Warning, "no-create", "", entity.id,
                       "entity has no C operation; no test case can be generated");
        if (!has_delete)
            report.add(Severity::Warning, "no-delete", "", entity.id,
                       "entity has no D operation; no test case can be generated");
        if (!has_read)
            report.add(Severity::Warning, "no-read", "", entity.id,
                       "entity has no R or B operation; no test case can be generated");
    }

    // I(e2) in row f requires f to perform C, U or D on e2
    for (const auto& [key, ops] : matrix.cells) {
        const auto& [fn, ent] = key;
        for (const auto& op : ops) {
            if (op.kind != OpKind::Influenced) continue;
            if (!matrix.find_entity(op.source_entity)) continue;
            bool backed = false;
            if (const auto* source_ops = matrix.cell(fn, op.source_entity)) {
                for (const auto& source_op : *source_ops)
                    if (is_mutation(source_op.kind)) backed = true;
            }
            if (!backed)
                report.add(Severity::Error, "influence-without-backing", fn, ent,
                           "I(" + op.source_entity + ") without a C, U or D on '" +
                               op.source_entity + "' in the same row");
        }
    }

    return report;
}

std::optional<FunctionId> suggest_best_read(const CrudMatrix& matrix, const EntityId& entity) {
    if (!matrix.find_entity(entity))
        throw ModelError("unknown entity '" + entity + "'");
    std::optional<FunctionId> best;
    std::size_t best_size = 0;
    for (const auto& fn : matrix.functions) {
        const auto* ops = matrix.cell(fn.id, entity);
        if (!ops) continue;
        for (const auto& op : *ops) {
            if (op.kind != OpKind::Read) continue;
            if (!best || op.attributes.size() > best_size) {
                best = fn.id;
                best_size = op.attributes.size();
            }
        }
    }
    return best;
}

EntityOperations operations_on(const CrudMatrix& matrix, const EntityId& entity) {
    if (!matrix.find_entity(entity))
        throw ModelError("unknown entity '" + entity + "'");
    EntityOperations result;
    for (const auto& fn : matrix.functions) {
        if (const auto* ops = matrix.cell(fn.id, entity)) {
            for (const auto& op : *ops) {
                switch (op.kind) {
                    case OpKind::Create: result.creates.emplace_back(fn.id, op); break;
                    case OpKind::Read:
                    case OpKind::BestRead: result.reads.emplace_back(fn.id, op); break;
                    case OpKind::Update: result.updates.emplace_back(fn.id, op); break;
                    case OpKind::Delete: result.deletes.emplace_back(fn.id, op); break;
                    case OpKind::Influenced: break;
                }
            }
        }
        for (const auto& other : matrix.entities) {
            const auto* ops = matrix.cell(fn.id, other.id);
            if (!ops) continue;
            for (const auto& op : *ops)
                if (op.kind == OpKind::Influenced && op.source_entity == entity)
                    result.influence_targets.emplace_back(fn.id, other.id);
        }
    }
    return result;
}

std::optional<std::pair<FunctionId, OperationSpec>> effective_best_read(
    const CrudMatrix& matrix, const EntityId& entity) {
    auto ops = operations_on(matrix, entity);
    for (const auto& read : ops.reads)
        if (read.second.kind == OpKind::BestRead) return read;
    auto suggested = suggest_best_read(matrix, entity);
    if (!suggested) return std::nullopt;
    for (const auto& read : ops.reads)
        if (read.first == *suggested && read.second.kind == OpKind::Read) return read;
    return std::nullopt;
}

CrudMatrix erase_attributes(const CrudMatrix& matrix) {
    CrudMatrix plain;
    plain.entities = matrix.entities;
    plain.functions = matrix.functions;
    plain.attributed = false;
    for (const auto& [key, ops] : matrix.cells) {
        std::set<OpKind> kinds;
        for (const auto& op : ops) {
            OpKind kind = op.kind;
            if (kind == OpKind::Influenced) continue;
            if (kind == OpKind::BestRead) kind = OpKind::Read;
            if (kinds.insert(kind).second)
                plain.add_op(key.first, key.second, {kind, {}, {}});
        }
    }
    return plain;
}

std::string matrix_fingerprint(const CrudMatrix& matrix) {
    std::uint64_t h = fnv1a64(kFnvOffset, std::string("matrix"));
    h = fnv1a64(h, static_cast<std::uint64_t>(matrix.attributed));
    for (const auto& entity : matrix.entities) {
        h = fnv1a64(h, entity.id);
        for (const auto& attr : entity.attributes) h = fnv1a64(h, attr);
        for (const auto& sub : entity.sub_entities) h = fnv1a64(h, sub);
        h = fnv1a64(h, entity.priority ? static_cast<std::uint64_t>(*entity.priority) + 1 : 0);
    }
    for (const auto& fn : matrix.functions) {
        h = fnv1a64(h, fn.id);
        h = fnv1a64(h, fn.name);
        h = fnv1a64(h, fn.priority ? static_cast<std::uint64_t>(*fn.priority) + 1 : 0);
    }
    for (const auto& [key, ops] : matrix.cells) {
        h = fnv1a64(h, key.first);
        h = fnv1a64(h, key.second);
        for (const auto& op : ops) {
            h = fnv1a64(h, std::string(1, op_letter(op.kind)));
            for (const auto& attr : op.attributes) h = fnv1a64(h, attr);
            h = fnv1a64(h, op.source_entity);
        }
    }
    return hash_hex(h);
}

}  // namespace dcyt
