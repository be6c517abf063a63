#include "dcyt/consistency.hpp"

#include <algorithm>
#include <deque>

namespace dcyt {

namespace {

// Tracked state set of the nondeterministic walk.
struct Walker {
    const TransitionSystem& ts;
    std::set<StateId> tracked;

    explicit Walker(const TransitionSystem& system) : ts(system), tracked{system.initial} {}

    bool enabled(const FunctionId& fn) const {
        for (const auto& state : tracked) {
            const auto* next = ts.successors(state, fn);
            if (next && !next->empty()) return true;
        }
        return false;
    }

    void execute(const FunctionId& fn) {
        std::set<StateId> next;
        for (const auto& state : tracked) {
            const auto* targets = ts.successors(state, fn);
            if (targets) next.insert(targets->begin(), targets->end());
        }
        tracked = std::move(next);
    }

    void reset_to_all() { tracked = {ts.states.begin(), ts.states.end()}; }
};

void require_known_labels(const TestCase& test_case, const TransitionSystem& ts) {
    for (const auto& step : test_case.steps)
        if (!ts.has_label(step.function))
            throw ModelError("function '" + step.function +
                             "' labels no edge of the transition system");
}

// Shortest sequence of functions leading the start set to one that enables
// `target`. Breadth-first over state sets; expanding labels in declaration
// order makes the first hit the declaration-lexicographic smallest among
// the shortest fillers.
std::optional<std::vector<FunctionId>> shortest_filler(const TransitionSystem& ts,
                                                       const std::set<StateId>& start,
                                                       const FunctionId& target) {
    const std::vector<FunctionId> labels = ts.ordered_labels();
    auto enables = [&](const std::set<StateId>& states) {
        for (const auto& state : states) {
            const auto* next = ts.successors(state, target);
            if (next && !next->empty()) return true;
        }
        return false;
    };
    auto step = [&](const std::set<StateId>& states, const FunctionId& fn) {
        std::set<StateId> next;
        for (const auto& state : states) {
            const auto* targets = ts.successors(state, fn);
            if (targets) next.insert(targets->begin(), targets->end());
        }
        return next;
    };

    constexpr std::size_t kVisitBudget = 100000;
    std::set<std::set<StateId>> visited{start};
    std::deque<std::pair<std::set<StateId>, std::vector<FunctionId>>> frontier;
    frontier.emplace_back(start, std::vector<FunctionId>{});
    while (!frontier.empty()) {
        auto [states, path] = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& fn : labels) {
            std::set<StateId> next = step(states, fn);
            if (next.empty()) continue;  // fn not executable here
            std::vector<FunctionId> next_path = path;
            next_path.push_back(fn);
            if (enables(next)) return next_path;
            if (visited.insert(next).second) frontier.emplace_back(std::move(next),
                                                                   std::move(next_path));
            if (visited.size() > kVisitBudget)
                throw ModelError("repair search exceeded its state budget");
        }
    }
    return std::nullopt;
}

// Operation a filler function performs on the case entity, when the matrix
// knows one.
std::optional<OperationSpec> filler_op(const CrudMatrix* matrix, const FunctionId& fn,
                                       const EntityId& entity) {
    if (!matrix) return std::nullopt;
    const auto* ops = matrix->cell(fn, entity);
    if (!ops) return std::nullopt;
    for (const auto& op : *ops)
        if (op.kind != OpKind::Influenced) return op;
    return std::nullopt;
}

}  // namespace

std::vector<ConsistencyFinding> check_case(const TestCase& test_case,
                                           const TransitionSystem& ts) {
    require_known_labels(test_case, ts);
    std::vector<ConsistencyFinding> findings;
    Walker walker(ts);
    for (std::size_t i = 0; i < test_case.steps.size(); ++i) {
        const FunctionId& fn = test_case.steps[i].function;
        if (walker.enabled(fn)) {
            walker.execute(fn);
            continue;
        }
        ConsistencyFinding finding;
        finding.step_index = i == 0 ? 0 : i - 1;
        finding.kind = FindingKind::Inconsistent;
        finding.blocked_step = i;
        finding.detail =
            i == 0 ? "'" + fn + "' is not enabled in the initial state"
                   : "'" + fn + "' is not enabled after '" +
                         test_case.steps[i - 1].function + "'";
        findings.push_back(std::move(finding));
        // localise later findings instead of cascading
        walker.reset_to_all();
        walker.execute(fn);
    }
    return findings;
}

RepairResult repair_case(const TestCase& test_case, const TransitionSystem& ts,
                         const CrudMatrix* matrix) {
    require_known_labels(test_case, ts);
    RepairResult result;
    result.repaired = test_case;
    result.repaired.steps.clear();

    Walker walker(ts);
    for (std::size_t i = 0; i < test_case.steps.size(); ++i) {
        const TestStep& step = test_case.steps[i];
        if (!walker.enabled(step.function)) {
            auto filler = shortest_filler(ts, walker.tracked, step.function);
            if (filler) {
                Insertion insertion;
                insertion.position = i;
                insertion.functions = *filler;
                for (const auto& fn : *filler) {
                    std::optional<OperationSpec> op =
                        filler_op(matrix, fn, test_case.entity);
                    result.repaired.steps.push_back(
                        {fn, op, op ? test_case.entity : EntityId{},
                         StepOrigin::RepairFiller});
                    walker.execute(fn);
                }
                result.insertions.push_back(std::move(insertion));
            } else {
                result.unrepairable.push_back(
                    result.repaired.steps.empty() ? 0 : result.repaired.steps.size() - 1);
                walker.reset_to_all();
            }
        }
        result.repaired.steps.push_back(step);
        walker.execute(step.function);
    }
    return result;
}

std::vector<EfficiencyFlag> efficiency_flags(const TestCase& test_case,
                                             const CrudMatrix& matrix) {
    for (const auto& step : test_case.steps)
        if (!matrix.find_function(step.function))
            throw ModelError("unknown function '" + step.function + "'");

    std::vector<EfficiencyFlag> flags;
    std::optional<std::size_t> last_mutation;
    for (std::size_t i = 0; i < test_case.steps.size(); ++i) {
        const TestStep& step = test_case.steps[i];
        if (step.entity != test_case.entity || !step.op) continue;
        if (is_mutation(step.op->kind)) {
            last_mutation = i;
            continue;
        }
        if (step.origin != StepOrigin::ReadAssigned || !is_read(step.op->kind)) continue;
        if (!last_mutation) continue;
        const TestStep& mutation = test_case.steps[*last_mutation];
        if (mutation.op->kind != OpKind::Update) continue;
        bool overlaps = false;
        for (const auto& attr : mutation.op->attributes)
            if (std::find(step.op->attributes.begin(), step.op->attributes.end(), attr) !=
                step.op->attributes.end())
                overlaps = true;
        if (!overlaps) flags.push_back({*last_mutation, i});
    }
    return flags;
}

}  // namespace dcyt
