#pragma once

#include <string>

#include "dcyt/generator.hpp"

namespace dcyt::testing {

// Verifies the create/read/update/delete chaining discipline of a
// generated case: starts with a create, every mutation of the case entity
// is followed by at least one read of it before the next mutation, at
// least one delete exists, and the case ends on a read. Returns an empty
// string when the case conforms, otherwise a description.
inline std::string pattern_violation(const TestCase& test_case) {
    const auto& steps = test_case.steps;
    if (steps.empty()) return "case is empty";
    if (!steps.front().op || steps.front().op->kind != OpKind::Create ||
        steps.front().entity != test_case.entity)
        return "case does not start with a create on its entity";
    if (!steps.back().op || !is_read(steps.back().op->kind))
        return "case does not end with a read";

    bool has_delete = false;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const TestStep& step = steps[i];
        if (step.entity != test_case.entity || !step.op || !is_mutation(step.op->kind))
            continue;
        if (step.op->kind == OpKind::Delete) has_delete = true;
        bool read_follows = false;
        for (std::size_t j = i + 1; j < steps.size(); ++j) {
            const TestStep& later = steps[j];
            if (later.entity == test_case.entity && later.op && is_mutation(later.op->kind))
                break;
            if (later.entity == test_case.entity && later.op && is_read(later.op->kind)) {
                read_follows = true;
                break;
            }
        }
        if (!read_follows)
            return "mutation at step " + std::to_string(i) + " (" + step.function +
                   ") has no verifying read";
    }
    if (!has_delete) return "case contains no delete";
    return "";
}

}  // namespace dcyt::testing
