#include "dcyt/generator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dcyt/rng.hpp"

namespace dcyt {

namespace {

const std::vector<std::pair<Criterion, const char*>>& criterion_table() {
    static const std::vector<std::pair<Criterion, const char*>> table = {
        {Criterion::Dcyt1R, "dcyt-1r"},
        {Criterion::DcytNR, "dcyt-nr"},
        {Criterion::SimpleRead, "or"},
        {Criterion::BestRead, "ob"},
        {Criterion::AllReadsOnce, "ir"},
        {Criterion::AllReadsOnceInfluenced, "iri"},
        {Criterion::AllReadsAlways, "nr"},
        {Criterion::AllReadsAlwaysInfluenced, "nri"},
    };
    return table;
}

bool requires_attributes(Criterion criterion) {
    switch (criterion) {
        case Criterion::BestRead:
        case Criterion::AllReadsOnce:
        case Criterion::AllReadsOnceInfluenced:
        case Criterion::AllReadsAlways:
        case Criterion::AllReadsAlwaysInfluenced:
            return true;
        default:
            return false;
    }
}

using ReadCandidate = std::pair<FunctionId, OperationSpec>;

// Priority-guided pick: the candidate whose function has the smallest
// priority rank; ties and unranked sets fall back to a seeded uniform draw.
std::size_t pick_by_priority(const CrudMatrix& matrix,
                             const std::vector<ReadCandidate>& candidates, Rng& rng) {
    std::optional<std::size_t> best;
    std::optional<int> best_rank;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const Function* fn = matrix.find_function(candidates[i].first);
        if (!fn || !fn->priority) continue;
        if (!best_rank || *fn->priority < *best_rank) {
            best = i;
            best_rank = *fn->priority;
        }
    }
    if (best) return *best;
    return static_cast<std::size_t>(rng.below(candidates.size()));
}

struct Slot {
    FunctionId function;
    OperationSpec op;
    std::vector<ReadCandidate> reads;
};

// Skeleton: every Create, then every Update, then every Delete, each
// exactly once. Entities with several creates/deletes chain cycles
// (C1 U* D1, C2 D2, ...) pairing creates and deletes by declaration order;
// all updates sit in the first cycle.
std::vector<Slot> build_skeleton(const EntityOperations& ops) {
    std::vector<Slot> slots;
    std::size_t cycles = std::max(ops.creates.size(), ops.deletes.size());
    for (std::size_t cycle = 0; cycle < cycles; ++cycle) {
        if (cycle < ops.creates.size())
            slots.push_back({ops.creates[cycle].first, ops.creates[cycle].second, {}});
        if (cycle == 0)
            for (const auto& update : ops.updates)
                slots.push_back({update.first, update.second, {}});
        if (cycle < ops.deletes.size())
            slots.push_back({ops.deletes[cycle].first, ops.deletes[cycle].second, {}});
    }
    return slots;
}

std::size_t overlap_size(const std::vector<AttributeId>& a, const std::vector<AttributeId>& b) {
    std::size_t n = 0;
    for (const auto& attr : a)
        if (std::find(b.begin(), b.end(), attr) != b.end()) ++n;
    return n;
}

ReadCandidate take_best_overlap(std::vector<ReadCandidate>& pool,
                                const std::vector<AttributeId>& updated) {
    auto chosen = select_read(pool, updated);
    pool.erase(std::find_if(pool.begin(), pool.end(),
                            [&](const ReadCandidate& c) { return c == chosen; }));
    return chosen;
}

// All-reads-once distribution. With enough reads every slot gets a similar
// share (counts differ by at most one); update slots choose their reads by
// attribute overlap, create/delete slots take the rest in declaration
// order. With fewer reads than slots, updates are served first and every
// empty slot falls back to the entity's best read.
void assign_reads_once(std::vector<Slot>& slots, const std::vector<ReadCandidate>& reads,
                       const ReadCandidate& fallback) {
    std::vector<ReadCandidate> pool = reads;
    bool deficit = reads.size() < slots.size();
    std::vector<std::size_t> quota(slots.size(), 1);
    if (!deficit) {
        std::size_t base = reads.size() / slots.size();
        std::size_t extra = reads.size() % slots.size();
        for (std::size_t i = 0; i < slots.size(); ++i) quota[i] = base + (i < extra ? 1 : 0);
    }
    auto take_for = [&](OpKind kind, bool by_overlap) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            if (slots[i].op.kind != kind) continue;
            std::size_t want = deficit ? (pool.empty() ? 0 : 1) : quota[i];
            for (std::size_t k = 0; k < want && !pool.empty(); ++k) {
                if (by_overlap)
                    slots[i].reads.push_back(take_best_overlap(pool, slots[i].op.attributes));
                else {
                    slots[i].reads.push_back(pool.front());
                    pool.erase(pool.begin());
                }
            }
        }
    };
    take_for(OpKind::Update, true);
    take_for(OpKind::Create, false);
    take_for(OpKind::Delete, false);

    for (auto& slot : slots)
        if (slot.reads.empty()) slot.reads.push_back(fallback);
}

TestCase assemble(const EntityId& entity, Criterion criterion, std::uint64_t seed,
                  const std::vector<Slot>& slots) {
    TestCase test_case;
    test_case.entity = entity;
    test_case.criterion = criterion;
    test_case.seed = seed;
    for (const auto& slot : slots) {
        test_case.steps.push_back({slot.function, slot.op, entity, StepOrigin::Skeleton});
        for (const auto& read : slot.reads)
            test_case.steps.push_back({read.first, read.second, entity,
                                       StepOrigin::ReadAssigned});
    }
    return test_case;
}

}  // namespace

std::string criterion_name(Criterion criterion) {
    for (const auto& [value, name] : criterion_table())
        if (value == criterion) return name;
    throw ModelError("invalid criterion");
}

Criterion criterion_from_name(const std::string& name) {
    for (const auto& [value, table_name] : criterion_table())
        if (name == table_name) return value;
    throw ModelError("unknown criterion '" + name + "'");
}

const std::vector<Criterion>& all_criteria() {
    static const std::vector<Criterion> values = [] {
        std::vector<Criterion> out;
        for (const auto& [value, name] : criterion_table()) out.push_back(value);
        return out;
    }();
    return values;
}

bool is_baseline(Criterion criterion) {
    return criterion == Criterion::Dcyt1R || criterion == Criterion::DcytNR;
}

bool reflects_influence(Criterion criterion) {
    return criterion == Criterion::AllReadsOnceInfluenced ||
           criterion == Criterion::AllReadsAlwaysInfluenced;
}

std::string origin_name(StepOrigin origin) {
    switch (origin) {
        case StepOrigin::Skeleton: return "skeleton";
        case StepOrigin::ReadAssigned: return "read-assigned";
        case StepOrigin::InfluenceExtension: return "influence-extension";
        case StepOrigin::RepairFiller: return "repair-filler";
    }
    throw ModelError("invalid step origin");
}

StepOrigin origin_from_name(const std::string& name) {
    if (name == "skeleton") return StepOrigin::Skeleton;
    if (name == "read-assigned") return StepOrigin::ReadAssigned;
    if (name == "influence-extension") return StepOrigin::InfluenceExtension;
    if (name == "repair-filler") return StepOrigin::RepairFiller;
    throw ModelError("unknown step origin '" + name + "'");
}

std::pair<FunctionId, OperationSpec> select_read(
    const std::vector<std::pair<FunctionId, OperationSpec>>& candidates,
    const std::vector<AttributeId>& updated_attrs) {
    if (candidates.empty()) throw ModelError("select_read: empty candidate list");
    std::size_t best = 0;
    std::size_t best_overlap = overlap_size(updated_attrs, candidates[0].second.attributes);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        std::size_t candidate_overlap =
            overlap_size(updated_attrs, candidates[i].second.attributes);
        bool better = false;
        if (candidate_overlap != best_overlap) {
            better = candidate_overlap > best_overlap;
        } else {
            bool cand_b = candidates[i].second.kind == OpKind::BestRead;
            bool best_b = candidates[best].second.kind == OpKind::BestRead;
            if (cand_b != best_b)
                better = cand_b;
            else
                better = candidates[i].second.attributes.size() >
                         candidates[best].second.attributes.size();
        }
        if (better) {
            best = i;
            best_overlap = candidate_overlap;
        }
    }
    return candidates[best];
}

TestCase generate_test_case(const CrudMatrix& matrix, const EntityId& entity,
                            Criterion criterion, std::uint64_t seed) {
    if (requires_attributes(criterion) && !matrix.attributed)
        throw ModelError("criterion '" + criterion_name(criterion) +
                         "' requires an attribute-annotated matrix");

    if (is_baseline(criterion) && matrix.attributed) {
        CrudMatrix plain = erase_attributes(matrix);
        TestCase test_case = generate_test_case(plain, entity, criterion, seed);
        return test_case;
    }

    EntityOperations ops = operations_on(matrix, entity);
    if (ops.creates.empty())
        throw ModelError("entity '" + entity + "' has no C operation");
    if (ops.deletes.empty())
        throw ModelError("entity '" + entity + "' has no D operation");
    if (ops.reads.empty())
        throw ModelError("entity '" + entity + "' has no R or B operation");

    std::optional<ReadCandidate> best;
    for (const auto& read : ops.reads)
        if (read.second.kind == OpKind::BestRead) best = read;
    if (criterion == Criterion::BestRead && !best)
        throw ModelError("entity '" + entity + "' has no B operation");

    std::vector<Slot> slots = build_skeleton(ops);
    Rng rng(derive_seed(seed, "reads", entity));

    switch (criterion) {
        case Criterion::Dcyt1R:
            for (auto& slot : slots)
                slot.reads.push_back(ops.reads[rng.below(ops.reads.size())]);
            break;
        case Criterion::SimpleRead:
            for (auto& slot : slots) {
                if (slot.op.kind == OpKind::Update)
                    slot.reads.push_back(select_read(ops.reads, slot.op.attributes));
                else
                    slot.reads.push_back(ops.reads[pick_by_priority(matrix, ops.reads, rng)]);
            }
            break;
        case Criterion::BestRead:
            for (auto& slot : slots) slot.reads.push_back(*best);
            break;
        case Criterion::AllReadsOnce:
        case Criterion::AllReadsOnceInfluenced: {
            ReadCandidate fallback = best ? *best : *effective_best_read(matrix, entity);
            assign_reads_once(slots, ops.reads, fallback);
            break;
        }
        case Criterion::DcytNR:
        case Criterion::AllReadsAlways:
        case Criterion::AllReadsAlwaysInfluenced:
            for (auto& slot : slots) {
                if (best) slot.reads.push_back(*best);
                for (const auto& read : ops.reads)
                    if (read.second.kind != OpKind::BestRead) slot.reads.push_back(read);
            }
            break;
    }

    TestCase test_case = assemble(entity, criterion, seed, slots);
    if (reflects_influence(criterion))
        test_case = extend_influenced(test_case, matrix, derive_seed(seed, "extend", entity));
    return test_case;
}

TestCase extend_influenced(const TestCase& test_case, const CrudMatrix& matrix,
                           std::uint64_t seed) {
    EntityOperations ops = operations_on(matrix, test_case.entity);
    std::map<FunctionId, std::vector<EntityId>> targets;
    for (const auto& [fn, influenced] : ops.influence_targets)
        targets[fn].push_back(influenced);
    if (targets.empty()) return test_case;

    Rng rng(derive_seed(seed, "influence-read", test_case.entity));
    TestCase extended = test_case;
    extended.steps.clear();

    const auto& steps = test_case.steps;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        extended.steps.push_back(steps[i]);
        const TestStep& step = steps[i];
        bool qualifies = step.entity == test_case.entity && step.op &&
                         is_mutation(step.op->kind) && targets.count(step.function);
        if (!qualifies) continue;

        // append the mutation's read block before the verification reads
        std::size_t j = i + 1;
        while (j < steps.size() && steps[j].entity == test_case.entity && steps[j].op &&
               is_read(steps[j].op->kind)) {
            extended.steps.push_back(steps[j]);
            ++j;
        }

        for (const auto& influenced : targets.at(step.function)) {
            auto verification = effective_best_read(matrix, influenced);
            std::optional<ReadCandidate> chosen;
            if (verification && verification->second.kind == OpKind::BestRead) {
                chosen = *verification;
            } else {
                EntityOperations influenced_ops = operations_on(matrix, influenced);
                std::vector<ReadCandidate> candidates;
                for (const auto& read : influenced_ops.reads)
                    if (read.second.kind == OpKind::Read) candidates.push_back(read);
                if (!candidates.empty())
                    chosen = candidates[pick_by_priority(matrix, candidates, rng)];
            }
            if (chosen)
                extended.steps.push_back({chosen->first, chosen->second, influenced,
                                          StepOrigin::InfluenceExtension});
        }
        i = j - 1;
    }
    return extended;
}

TestSuite generate_suite(const CrudMatrix& matrix, Criterion criterion, std::uint64_t seed) {
    ValidationReport report = validate_matrix(matrix);
    if (report.has_errors())
        throw ModelError("matrix does not validate:\n" + report.to_string());
    if (requires_attributes(criterion) && !matrix.attributed)
        throw ModelError("criterion '" + criterion_name(criterion) +
                         "' requires an attribute-annotated matrix");

    TestSuite suite;
    suite.matrix_fingerprint = matrix_fingerprint(matrix);
    suite.criterion = criterion;
    for (const auto& entity : matrix.entities) {
        EntityOperations ops = operations_on(matrix, entity.id);
        std::string reason;
        if (ops.creates.empty())
            reason = "no create operation";
        else if (ops.deletes.empty())
            reason = "no delete operation";
        else if (ops.reads.empty())
            reason = "no read operation";
        else if (criterion == Criterion::BestRead) {
            bool has_best = false;
            for (const auto& read : ops.reads)
                if (read.second.kind == OpKind::BestRead) has_best = true;
            if (!has_best) reason = "no best read operation";
        }
        if (!reason.empty()) {
            suite.skipped.push_back({entity.id, reason});
            continue;
        }
        suite.cases.push_back(generate_test_case(matrix, entity.id, criterion,
                                                 derive_seed(seed, "case", entity.id)));
    }
    return suite;
}

std::vector<UncoveredOp> audit_completeness(const TestSuite& suite, const CrudMatrix& matrix) {
    if (suite.matrix_fingerprint != matrix_fingerprint(matrix))
        throw ModelError("suite was not generated from this matrix (fingerprint mismatch)");

    std::set<std::tuple<FunctionId, EntityId, OpKind>> covered;
    for (const auto& test_case : suite.cases) {
        for (const auto& step : test_case.steps) {
            if (!step.op) continue;
            OpKind kind = step.op->kind == OpKind::BestRead ? OpKind::Read : step.op->kind;
            covered.insert({step.function, step.entity, kind});
        }
    }

    std::vector<UncoveredOp> uncovered;
    for (const auto& fn : matrix.functions) {
        for (const auto& entity : matrix.entities) {
            const auto* ops = matrix.cell(fn.id, entity.id);
            if (!ops) continue;
            std::set<OpKind> kinds;
            for (const auto& op : *ops) {
                if (op.kind == OpKind::Influenced) continue;
                kinds.insert(op.kind == OpKind::BestRead ? OpKind::Read : op.kind);
            }
            for (OpKind kind : {OpKind::Create, OpKind::Read, OpKind::Update, OpKind::Delete})
                if (kinds.count(kind) && !covered.count({fn.id, entity.id, kind}))
                    uncovered.push_back({fn.id, entity.id, kind});
        }
    }
    return uncovered;
}

}  // namespace dcyt
