#pragma once

#include "dcyt/generator.hpp"
#include "dcyt/sut.hpp"

namespace dcyt {

enum class FindingKind { Inconsistent, Unrepairable };

// One consistency finding. `step_index` is the step reported inconsistent
// (the predecessor of the function that could not run); `blocked_step` is
// the index of the step that was not executable.
struct ConsistencyFinding {
    std::size_t step_index = 0;
    FindingKind kind = FindingKind::Inconsistent;
    std::string detail;
    std::size_t blocked_step = 0;
};

struct Insertion {
    std::size_t position = 0;  // index in the original case before which fillers go
    std::vector<FunctionId> functions;
};

// Repair output. Original steps keep their relative order; `unrepairable`
// indexes the repaired case (so re-checking the repaired case reports
// exactly these indices).
struct RepairResult {
    TestCase repaired;
    std::vector<Insertion> insertions;
    std::vector<std::size_t> unrepairable;
};

/// Simulates the case as a nondeterministic walk over the transition
/// system. A step is consistent iff some tracked state enables its
/// function; on a failure the preceding step is reported and the tracked
/// set is re-seeded with all states so later findings stay local. Throws
/// when a case function is no edge label of the system.
std::vector<ConsistencyFinding> check_case(const TestCase& test_case,
                                           const TransitionSystem& ts);

/// Repairs every inconsistent gap by inserting a shortest function
/// sequence that leads the tracked state set to one enabling the next
/// step (breadth-first search over state sets; equal-length fillers
/// resolved in function declaration order). Gaps with no enabling
/// sequence are reported unrepairable and left in place. When `matrix` is
/// given, filler steps record the function's operation on the case entity.
RepairResult repair_case(const TestCase& test_case, const TransitionSystem& ts,
                         const CrudMatrix* matrix = nullptr);

struct EfficiencyFlag {
    std::size_t update_step = 0;
    std::size_t read_step = 0;

    bool operator==(const EfficiencyFlag&) const = default;
};

/// Flags update/read pairings that verify nothing: a read assigned after an
/// update whose attribute sets do not intersect. Reads following creates or
/// deletes are never flagged.
std::vector<EfficiencyFlag> efficiency_flags(const TestCase& test_case,
                                             const CrudMatrix& matrix);

}  // namespace dcyt
