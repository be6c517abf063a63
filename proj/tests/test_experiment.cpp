#include "doctest.h"

#include "dcyt/experiment.hpp"
#include "dcyt/serialization.hpp"

using namespace dcyt;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig config;
    SutGenConfig instance;
    instance.num_entities = 2;
    instance.attrs_per_entity = {2, 3};
    instance.num_functions = 8;
    instance.num_states = 4;
    instance.num_workflows = 1;
    instance.edges_per_workflow = {2, 4};
    instance.ops_density = 0.5;
    instance.num_defects = 2;
    instance.activators_per_defect = {1, 2};
    instance.num_influence_facts = 1;
    instance.influence_probability = 0.3;
    config.instances.push_back({"tiny", "", instance});
    config.criteria = {Criterion::DcytNR, Criterion::AllReadsAlways};
    config.seeds_per_instance = 2;
    return config;
}

}  // namespace

TEST_CASE("a two-criterion experiment produces two rows") {
    ExperimentReport report = run_experiment(tiny_config(), 1);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].criterion == Criterion::DcytNR);
    CHECK(!report.rows[0].avg_step_increase);
    CHECK(report.rows[1].criterion == Criterion::AllReadsAlways);
    CHECK(report.rows[1].avg_step_increase);
    CHECK(report.rows[1].baseline == Criterion::DcytNR);
    for (const auto& row : report.rows) {
        CHECK(row.avg_steps > 0.0);
        CHECK(row.avg_inconsistent_ratio >= 0.0);
        CHECK(row.avg_leakage_ratio >= 0.0);
        CHECK(row.avg_leakage_ratio <= 1.0);
    }
}

TEST_CASE("the full criterion set produces a table-shaped report") {
    ExperimentConfig config = tiny_config();
    config.criteria = {Criterion::Dcyt1R,      Criterion::DcytNR,
                       Criterion::AllReadsOnce, Criterion::AllReadsOnceInfluenced,
                       Criterion::AllReadsAlways, Criterion::AllReadsAlwaysInfluenced};
    config.seeds_per_instance = 1;
    ExperimentReport report = run_experiment(config, 3);
    REQUIRE(report.rows.size() == 6);
    for (const auto& row : report.rows) {
        if (is_baseline(row.criterion))
            CHECK(!row.avg_step_increase);
        else
            CHECK(row.avg_step_increase);
    }
}

TEST_CASE("experiments are deterministic") {
    ExperimentConfig config = tiny_config();
    std::string a = render_json(experiment_report_to_json(run_experiment(config, 11)));
    std::string b = render_json(experiment_report_to_json(run_experiment(config, 11)));
    CHECK(a == b);
    std::string c = render_json(experiment_report_to_json(run_experiment(config, 12)));
    CHECK(a != c);
}

TEST_CASE("criterion sets need a baseline and an extended member") {
    ExperimentConfig config = tiny_config();
    config.criteria = {Criterion::Dcyt1R, Criterion::DcytNR};
    CHECK_THROWS_AS((void)run_experiment(config, 1), ModelError);
    config.criteria = {Criterion::AllReadsOnce};
    CHECK_THROWS_AS((void)run_experiment(config, 1), ModelError);
}

TEST_CASE("experiments need at least one instance") {
    ExperimentConfig config = tiny_config();
    config.instances.clear();
    CHECK_THROWS_AS((void)run_experiment(config, 1), ModelError);
}

TEST_CASE("the text report prints one row per criterion") {
    ExperimentReport report = run_experiment(tiny_config(), 1);
    std::string text = render_experiment_text(report);
    CHECK(text.find("dcyt-nr") != std::string::npos);
    CHECK(text.find("nr") != std::string::npos);
    CHECK(text.find("criterion") != std::string::npos);
}
