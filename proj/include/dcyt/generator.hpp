#pragma once

#include <optional>

#include "dcyt/core.hpp"
#include "dcyt/matrix.hpp"

namespace dcyt {

// Coverage criteria. The two Dcyt criteria run on the attribute-erased
// matrix (one random read / all reads after each mutation); the rest
// consume the extended matrix:
//   SimpleRead        (or)  — one read per mutation, priority or random,
//                             overlap-maximised after updates
//   BestRead          (ob)  — the entity's B after every mutation
//   AllReadsOnce      (ir)  — every read used once, distributed over slots
//   AllReadsOnceInf   (iri) — ir + verification reads on influenced entities
//   AllReadsAlways    (nr)  — every read after every mutation
//   AllReadsAlwaysInf (nri) — nr + verification reads on influenced entities
enum class Criterion {
    Dcyt1R,
    DcytNR,
    SimpleRead,
    BestRead,
    AllReadsOnce,
    AllReadsOnceInfluenced,
    AllReadsAlways,
    AllReadsAlwaysInfluenced,
};

std::string criterion_name(Criterion criterion);
Criterion criterion_from_name(const std::string& name);

/// All eight criteria in canonical (report) order.
const std::vector<Criterion>& all_criteria();

/// True for criteria that run on the attribute-erased matrix.
bool is_baseline(Criterion criterion);

/// True for iri/nri, the criteria that append influence verification reads.
bool reflects_influence(Criterion criterion);

enum class StepOrigin { Skeleton, ReadAssigned, InfluenceExtension, RepairFiller };

std::string origin_name(StepOrigin origin);
StepOrigin origin_from_name(const std::string& name);

// One test step: a function exercised through one operation on a target
// entity. Repair fillers inserted purely for navigation carry no
// operation (the function touches no data of the case entity).
struct TestStep {
    FunctionId function;
    std::optional<OperationSpec> op;
    EntityId entity;
    StepOrigin origin = StepOrigin::Skeleton;

    bool operator==(const TestStep&) const = default;
};

struct TestCase {
    EntityId entity;
    Criterion criterion = Criterion::BestRead;
    std::vector<TestStep> steps;
    std::uint64_t seed = 0;
};

struct SkippedEntity {
    EntityId entity;
    std::string reason;
};

struct TestSuite {
    std::string matrix_fingerprint;
    Criterion criterion = Criterion::BestRead;
    std::vector<TestCase> cases;
    std::vector<SkippedEntity> skipped;
};

/// Picks the read whose attribute set overlaps the updated attributes the
/// most; ties broken by B before R, then larger attribute set, then the
/// candidates' given order. Throws on an empty candidate list.
std::pair<FunctionId, OperationSpec> select_read(
    const std::vector<std::pair<FunctionId, OperationSpec>>& candidates,
    const std::vector<AttributeId>& updated_attrs);

/// Generates the test case for one entity under one criterion. The case
/// starts with a Create, chains every mutation exactly once (creates,
/// then updates, then deletes, paired into cycles when an entity has
/// several creates/deletes), and interleaves reads as the criterion
/// prescribes. Deterministic in (matrix, entity, criterion, seed).
TestCase generate_test_case(const CrudMatrix& matrix, const EntityId& entity,
                            Criterion criterion, std::uint64_t seed);

/// Appends influence verification: after every mutation step whose function
/// also influences another entity, a best read of that entity is inserted
/// behind the step's read block (or a priority/random read when the entity
/// has no B). Insertion-only; the input steps keep their order.
TestCase extend_influenced(const TestCase& test_case, const CrudMatrix& matrix,
                           std::uint64_t seed);

/// One case per generatable entity, in entity declaration order. Entities
/// missing a Create, Delete or read (or a B under the ob criterion) are
/// skipped and listed in the suite. Per-entity seeds derive from
/// (seed, entity id).
TestSuite generate_suite(const CrudMatrix& matrix, Criterion criterion, std::uint64_t seed);

struct UncoveredOp {
    FunctionId function;
    EntityId entity;
    OpKind kind = OpKind::Read;

    bool operator==(const UncoveredOp&) const = default;
};

/// Lists every C/R/U/D occurrence of the matrix (B counted as R, I
/// excluded) that no step of the suite exercises. Throws when the suite was
/// generated from a different matrix.
std::vector<UncoveredOp> audit_completeness(const TestSuite& suite, const CrudMatrix& matrix);

}  // namespace dcyt
