#include "doctest.h"

#include "dcyt/consistency.hpp"
#include "dcyt/generator.hpp"
#include "dcyt/sutgen.hpp"
#include "fixtures.hpp"
#include "tsgen.hpp"

using namespace dcyt;
using dcyt::testing::make_order_matrix;
using dcyt::testing::make_order_sut;
using dcyt::testing::oracle_filler_length;
using dcyt::testing::random_case;
using dcyt::testing::random_ts;
using dcyt::testing::tracked_before;

namespace {

TestCase bare_case(std::vector<FunctionId> functions) {
    TestCase test_case;
    test_case.entity = "Order";
    for (auto& fn : functions)
        test_case.steps.push_back({std::move(fn), std::nullopt, "Order",
                                   StepOrigin::Skeleton});
    return test_case;
}

bool is_subsequence(const std::vector<TestStep>& part, const std::vector<TestStep>& whole) {
    std::size_t i = 0;
    for (const auto& step : whole)
        if (i < part.size() && step == part[i]) ++i;
    return i == part.size();
}

}  // namespace

TEST_CASE("a generated best-read case walks the order SUT cleanly") {
    TestCase test_case =
        generate_test_case(make_order_matrix(), "Order", Criterion::BestRead, 1);
    TransitionSystem ts = build_transition_system(make_order_sut());
    CHECK(check_case(test_case, ts).empty());
}

TEST_CASE("a read after delete from the wrong state is flagged") {
    TransitionSystem ts = build_transition_system(make_order_sut());
    auto findings = check_case(bare_case({"f1", "f6", "f5"}), ts);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].step_index == 1);
    CHECK(findings[0].blocked_step == 2);
    CHECK(findings[0].kind == FindingKind::Inconsistent);
}

TEST_CASE("an empty case has no findings") {
    TransitionSystem ts = build_transition_system(make_order_sut());
    CHECK(check_case(bare_case({}), ts).empty());
}

TEST_CASE("unknown function labels are rejected") {
    TransitionSystem ts = build_transition_system(make_order_sut());
    CHECK_THROWS_AS((void)check_case(bare_case({"f1", "nope"}), ts), ModelError);
    CHECK_THROWS_AS((void)repair_case(bare_case({"nope"}), ts), ModelError);
}

TEST_CASE("a first step not enabled initially is reported at index zero") {
    TransitionSystem ts = build_transition_system(make_order_sut());
    auto findings = check_case(bare_case({"f3", "f5"}), ts);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].step_index == 0);
    CHECK(findings[0].blocked_step == 0);
}

TEST_CASE("findings stay local after a failure") {
    TransitionSystem ts = build_transition_system(make_order_sut());
    // f5 fails after f6; the walk restarts from all states, so the rest of
    // the case is judged on its own
    auto findings = check_case(bare_case({"f1", "f6", "f5", "f3", "f6", "f2"}), ts);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].step_index == 1);
}

TEST_CASE("repair inserts the missing connector") {
    ArtificialSut sut = make_order_sut();
    // reopen a path from the deleted state back to the active one
    sut.functions.push_back({"f10", "f10", std::nullopt});
    sut.workflows.push_back({"w1", {{"s2", "s1", "f10"}}});
    TransitionSystem ts = build_transition_system(sut);

    RepairResult result = repair_case(bare_case({"f1", "f6", "f5"}), ts);
    REQUIRE(result.insertions.size() == 1);
    CHECK(result.insertions[0].position == 2);
    CHECK(result.insertions[0].functions == std::vector<FunctionId>{"f10"});
    CHECK(result.unrepairable.empty());
    REQUIRE(result.repaired.steps.size() == 4);
    CHECK(result.repaired.steps[2].function == "f10");
    CHECK(result.repaired.steps[2].origin == StepOrigin::RepairFiller);
    CHECK(check_case(result.repaired, ts).empty());
}

TEST_CASE("gaps with no enabling path are unrepairable") {
    TransitionSystem ts = build_transition_system(make_order_sut());
    RepairResult result = repair_case(bare_case({"f1", "f6", "f5"}), ts);
    CHECK(result.insertions.empty());
    CHECK(result.unrepairable == std::vector<std::size_t>{1});
    // the case is left in place
    REQUIRE(result.repaired.steps.size() == 3);
    auto findings = check_case(result.repaired, ts);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].step_index == 1);
}

TEST_CASE("a consistent case repairs to itself") {
    TransitionSystem ts = build_transition_system(make_order_sut());
    TestCase test_case = bare_case({"f1", "f2", "f3", "f2"});
    RepairResult result = repair_case(test_case, ts);
    CHECK(result.insertions.empty());
    CHECK(result.unrepairable.empty());
    CHECK(result.repaired.steps == test_case.steps);
}

TEST_CASE("fillers record the function's operation on the case entity") {
    ArtificialSut sut = make_order_sut();
    sut.functions.push_back({"f10", "f10", std::nullopt});
    sut.workflows.push_back({"w1", {{"s2", "s1", "f10"}}});
    TransitionSystem ts = build_transition_system(sut);
    CrudMatrix matrix = make_order_matrix();

    // repair [f1, f6, f2-from-s2, f5]: f5 needs s1 again, reachable via f10
    RepairResult result = repair_case(bare_case({"f1", "f6", "f5"}), ts, &matrix);
    REQUIRE(result.insertions.size() == 1);
    const TestStep& filler = result.repaired.steps[2];
    CHECK(filler.function == "f10");
    CHECK(!filler.op);  // f10 touches no data of Order
    CHECK(filler.entity.empty());

    // a filler that is itself an order function keeps its operation
    ArtificialSut sut2 = make_order_sut();
    sut2.lifecycles[0].edges.push_back(
        {"s2", "s1", "f3", {OperationSpec::update({"status"})}});
    TransitionSystem ts2 = build_transition_system(sut2);
    RepairResult result2 = repair_case(bare_case({"f1", "f6", "f5"}), ts2, &matrix);
    REQUIRE(result2.insertions.size() == 1);
    const TestStep& filler2 = result2.repaired.steps[2];
    CHECK(filler2.function == "f3");
    REQUIRE(filler2.op);
    CHECK(filler2.op->kind == OpKind::Update);
    CHECK(filler2.entity == "Order");
}

TEST_CASE("repair matches the shortest-sequence oracle on random systems") {
    std::size_t repaired_gaps = 0, unrepairable_gaps = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        TransitionSystem ts = random_ts(seed);
        for (std::uint64_t c = 0; c < 4; ++c) {
            TestCase test_case = random_case(ts, seed * 100 + c);
            RepairResult result = repair_case(test_case, ts);

            CHECK(is_subsequence(test_case.steps, result.repaired.steps));

            // re-checking reports exactly the unrepairable indices
            std::vector<std::size_t> rechecked;
            for (const auto& finding : check_case(result.repaired, ts))
                rechecked.push_back(finding.step_index);
            CHECK(rechecked == result.unrepairable);

            // every filler is minimal per the independent plain-state search
            std::size_t offset = 0;
            std::vector<std::size_t> insertion_starts;
            for (const auto& insertion : result.insertions) {
                insertion_starts.push_back(insertion.position + offset);
                offset += insertion.functions.size();
            }
            for (std::size_t k = 0; k < result.insertions.size(); ++k) {
                ++repaired_gaps;
                const Insertion& insertion = result.insertions[k];
                std::size_t start = insertion_starts[k];
                auto tracked = tracked_before(ts, result.repaired.steps, start);
                const FunctionId& blocked =
                    result.repaired.steps[start + insertion.functions.size()].function;
                long long oracle = oracle_filler_length(ts, tracked, blocked);
                CHECK(oracle == static_cast<long long>(insertion.functions.size()));
            }
            unrepairable_gaps += result.unrepairable.size();
        }
    }
    // the sample must actually exercise both outcomes
    CHECK(repaired_gaps > 50);
    CHECK(unrepairable_gaps > 0);
}

TEST_CASE("unrepairable gaps agree with the reachability oracle") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        TransitionSystem ts = random_ts(seed);
        TestCase test_case = random_case(ts, seed + 4242);
        RepairResult result = repair_case(test_case, ts);
        // the residual findings of the repaired case are the unrepairable
        // gaps; none of them may have a reachable enabling state
        for (const auto& finding : check_case(result.repaired, ts)) {
            auto tracked = tracked_before(ts, result.repaired.steps, finding.blocked_step);
            CHECK(oracle_filler_length(
                      ts, tracked,
                      result.repaired.steps[finding.blocked_step].function) == -1);
        }
    }
}

TEST_CASE("generated suites repair cleanly up to unrepairable gaps") {
    for (std::uint64_t seed : {5, 6, 7, 8}) {
        SutGenConfig config = preset_config("small");
        config.seed = seed;
        ArtificialSut sut = generate_sut(config);
        CrudMatrix matrix = derive_crud_matrix(sut, 1.0, seed);
        TransitionSystem ts = build_transition_system(sut);
        for (Criterion criterion :
             {Criterion::AllReadsOnce, Criterion::AllReadsAlwaysInfluenced}) {
            TestSuite suite = generate_suite(matrix, criterion, seed);
            for (const auto& test_case : suite.cases) {
                RepairResult result = repair_case(test_case, ts, &matrix);
                std::vector<std::size_t> rechecked;
                for (const auto& finding : check_case(result.repaired, ts))
                    rechecked.push_back(finding.step_index);
                CAPTURE(seed);
                CAPTURE(criterion_name(criterion));
                CHECK(rechecked == result.unrepairable);
                CHECK(is_subsequence(test_case.steps, result.repaired.steps));
            }
        }
    }
}

TEST_CASE("update/read pairs without attribute overlap are flagged") {
    CrudMatrix matrix = make_order_matrix();

    SUBCASE("disjoint pair is flagged") {
        TestCase test_case;
        test_case.entity = "Order";
        test_case.steps.push_back(
            {"f4", OperationSpec::update({"total"}), "Order", StepOrigin::Skeleton});
        test_case.steps.push_back(
            {"f5", OperationSpec::read({"status"}), "Order", StepOrigin::ReadAssigned});
        auto flags = efficiency_flags(test_case, matrix);
        REQUIRE(flags.size() == 1);
        CHECK(flags[0] == EfficiencyFlag{0, 1});
    }
    SUBCASE("overlapping pair is fine") {
        TestCase test_case;
        test_case.entity = "Order";
        test_case.steps.push_back(
            {"f3", OperationSpec::update({"status"}), "Order", StepOrigin::Skeleton});
        test_case.steps.push_back(
            {"f5", OperationSpec::read({"status"}), "Order", StepOrigin::ReadAssigned});
        CHECK(efficiency_flags(test_case, matrix).empty());
    }
    SUBCASE("the wide best read never trips the flag") {
        TestCase test_case =
            generate_test_case(matrix, "Order", Criterion::BestRead, 1);
        CHECK(efficiency_flags(test_case, matrix).empty());
    }
    SUBCASE("unknown functions are rejected") {
        TestCase test_case;
        test_case.entity = "Order";
        test_case.steps.push_back({"zz", std::nullopt, "Order", StepOrigin::Skeleton});
        CHECK_THROWS_AS((void)efficiency_flags(test_case, matrix), ModelError);
    }
}
