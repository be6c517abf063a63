#pragma once

#include <string>

#include "dcyt/matrix.hpp"
#include "dcyt/rng.hpp"

namespace dcyt::testing {

// Seeded random attributed matrix for property tests: every entity gets at
// least one create, one delete and one read (plus a best read), entities
// may have several creates/deletes, update cells sometimes carry an extra
// read, and mutation functions sprinkle influence marks on other entities.
inline CrudMatrix random_matrix(std::uint64_t seed) {
    Rng rng(derive_seed(seed, "matrixgen"));
    CrudMatrix matrix;

    std::size_t num_entities = 1 + rng.below(4);
    for (std::size_t e = 0; e < num_entities; ++e) {
        Entity entity;
        entity.id = "E" + std::to_string(e + 1);
        std::size_t attr_count = 1 + rng.below(5);
        for (std::size_t a = 0; a < attr_count; ++a)
            entity.attributes.push_back("a" + std::to_string(a + 1));
        matrix.entities.push_back(std::move(entity));
    }

    auto subset = [&](const Entity& entity) {
        std::size_t size = 1 + rng.below(entity.attributes.size());
        auto indices = rng.sample_indices(entity.attributes.size(), size);
        std::sort(indices.begin(), indices.end());
        std::vector<AttributeId> attrs;
        for (std::size_t i : indices) attrs.push_back(entity.attributes[i]);
        return attrs;
    };

    int next_fn = 0;
    auto fresh_fn = [&] {
        std::string id = "g" + std::to_string(++next_fn);
        std::optional<int> priority;
        if (rng.chance(0.25)) priority = static_cast<int>(rng.below(5));
        matrix.functions.push_back({id, id, priority});
        return id;
    };

    for (const auto& entity : matrix.entities) {
        std::size_t creates = 1 + rng.below(2);
        std::size_t deletes = 1 + rng.below(2);
        std::size_t updates = rng.below(4);
        std::size_t reads = 1 + rng.below(4);
        for (std::size_t i = 0; i < creates; ++i)
            matrix.add_op(fresh_fn(), entity.id, OperationSpec::create());
        for (std::size_t i = 0; i < updates; ++i) {
            FunctionId fn = fresh_fn();
            matrix.add_op(fn, entity.id, OperationSpec::update(subset(entity)));
            if (rng.chance(0.3))
                matrix.add_op(fn, entity.id, OperationSpec::read(subset(entity)));
        }
        for (std::size_t i = 0; i < deletes; ++i)
            matrix.add_op(fresh_fn(), entity.id, OperationSpec::del());
        for (std::size_t i = 0; i < reads; ++i)
            matrix.add_op(fresh_fn(), entity.id, OperationSpec::read(subset(entity)));

        // promote one read of the column to the best read
        std::vector<std::pair<FunctionId, std::size_t>> read_cells;
        for (const auto& fn : matrix.functions) {
            const auto* ops = matrix.cell(fn.id, entity.id);
            if (!ops) continue;
            for (std::size_t k = 0; k < ops->size(); ++k)
                if ((*ops)[k].kind == OpKind::Read) read_cells.emplace_back(fn.id, k);
        }
        auto [fn, index] = read_cells[rng.below(read_cells.size())];
        matrix.cells[{fn, entity.id}][index].kind = OpKind::BestRead;
    }

    // influence marks: a mutation of one entity may influence another
    for (const auto& entity : matrix.entities) {
        for (const auto& fn : matrix.functions) {
            const auto* ops = matrix.cell(fn.id, entity.id);
            if (!ops) continue;
            bool mutates = false;
            for (const auto& op : *ops) mutates |= is_mutation(op.kind);
            if (!mutates) continue;
            for (const auto& other : matrix.entities) {
                if (other.id == entity.id) continue;
                if (rng.chance(0.12))
                    matrix.add_op(fn.id, other.id, OperationSpec::influenced(entity.id));
            }
        }
    }
    return matrix;
}

}  // namespace dcyt::testing
