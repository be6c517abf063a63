#include "doctest.h"

#include "dcyt/generator.hpp"
#include "dcyt/rng.hpp"
#include "dcyt/serialization.hpp"
#include "dcyt/sutgen.hpp"
#include "fixtures.hpp"

using namespace dcyt;

namespace {

SutGenConfig random_config(std::uint64_t seed) {
    Rng rng(derive_seed(seed, "configgen"));
    SutGenConfig config;
    config.num_entities = 1 + rng.below(5);
    config.attrs_per_entity = {1 + rng.below(3), 3 + rng.below(3)};
    config.num_functions = 3 + rng.below(config.num_entities * 3);
    config.num_states = 2 + rng.below(8);
    config.num_workflows = rng.below(4);
    config.edges_per_workflow = {1 + rng.below(3), 4 + rng.below(4)};
    config.ops_density = 0.25 * (1 + rng.below(4));
    config.num_defects = rng.below(config.num_entities + 1);
    config.activators_per_defect = {1, 1 + rng.below(3)};
    config.num_influence_facts = config.num_entities >= 2 ? rng.below(3) : 0;
    config.influence_probability = 0.3;
    config.seed = seed;
    return config;
}

}  // namespace

TEST_CASE("generated SUTs validate cleanly over random configs") {
    std::size_t generated = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        SutGenConfig config = random_config(seed);
        try {
            ArtificialSut sut = generate_sut(config);
            ++generated;
            CAPTURE(seed);
            CHECK(validate_sut(sut).empty());
            // generator/validator compatibility extends to the derived matrix
            CHECK(validate_matrix(derive_crud_matrix(sut, 1.0, seed)).empty());
        } catch (const ConfigError&) {
            // structurally unsatisfiable draw; the error is the contract
        }
    }
    CHECK(generated >= 30);
}

TEST_CASE("the minimal config yields create, read and delete functions") {
    SutGenConfig config;
    config.num_entities = 1;
    config.attrs_per_entity = {2, 2};
    config.num_functions = 3;
    config.num_states = 2;
    config.num_workflows = 0;
    config.ops_density = 0.5;
    config.seed = 1;
    ArtificialSut sut = generate_sut(config);
    CHECK(validate_sut(sut).empty());

    bool has_create = false, has_read = false, has_delete = false;
    for (const auto& fn : sut.functions) {
        auto kinds = ops_performed(sut, fn.id, sut.entities[0].id);
        has_create |= kinds.count(OpKind::Create) > 0;
        has_read |= kinds.count(OpKind::Read) > 0;
        has_delete |= kinds.count(OpKind::Delete) > 0;
    }
    CHECK(has_create);
    CHECK(has_read);
    CHECK(has_delete);
}

TEST_CASE("different seeds give structurally different SUTs") {
    SutGenConfig a = preset_config("small");
    a.seed = 1;
    SutGenConfig b = preset_config("small");
    b.seed = 2;
    CHECK(sut_fingerprint(generate_sut(a)) != sut_fingerprint(generate_sut(b)));
}

TEST_CASE("identical configs give identical SUTs") {
    SutGenConfig config = preset_config("medium");
    config.seed = 17;
    Json a = sut_to_json(generate_sut(config));
    Json b = sut_to_json(generate_sut(config));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("impossible defect counts are reported") {
    SutGenConfig config;
    config.num_entities = 1;
    config.attrs_per_entity = {2, 2};
    config.num_functions = 3;
    config.num_states = 2;
    config.ops_density = 0.5;
    config.num_defects = 500;
    config.activators_per_defect = {1, 2};
    config.seed = 1;
    CHECK_THROWS_AS((void)generate_sut(config), ConfigError);
}

TEST_CASE("influence facts need a second entity") {
    SutGenConfig config;
    config.num_entities = 1;
    config.attrs_per_entity = {2, 2};
    config.num_functions = 3;
    config.num_states = 2;
    config.ops_density = 0.5;
    config.num_influence_facts = 1;
    config.influence_probability = 0.5;
    config.seed = 1;
    CHECK_THROWS_AS((void)generate_sut(config), ConfigError);
}

TEST_CASE("config invariants are enforced") {
    SutGenConfig config = preset_config("small");
    SUBCASE("at least two states") {
        config.num_states = 1;
        CHECK_THROWS_AS((void)validate_config(config), ConfigError);
    }
    SUBCASE("ranges must not be inverted") {
        config.attrs_per_entity = {4, 2};
        CHECK_THROWS_AS((void)validate_config(config), ConfigError);
    }
    SUBCASE("density within (0,1]") {
        config.ops_density = 0.0;
        CHECK_THROWS_AS((void)validate_config(config), ConfigError);
    }
}

TEST_CASE("defect injection adds valid defects and nothing else") {
    ArtificialSut sut = dcyt::testing::make_order_sut();
    sut.defects.clear();

    SUBCASE("injected defects validate") {
        ArtificialSut injected = inject_defects(sut, 2, {1, 2}, 3);
        CHECK(injected.defects.size() == 2);
        CHECK(validate_sut(injected).empty());
        // everything else untouched
        CHECK(sut_fingerprint(injected) != sut_fingerprint(sut));
        ArtificialSut stripped = injected;
        stripped.defects.clear();
        CHECK(sut_fingerprint(stripped) == sut_fingerprint(sut));
    }
    SUBCASE("zero defects is the identity") {
        ArtificialSut same = inject_defects(sut, 0, {1, 2}, 3);
        CHECK(sut_fingerprint(same) == sut_fingerprint(sut));
    }
    SUBCASE("injection is deterministic") {
        CHECK(sut_fingerprint(inject_defects(sut, 2, {1, 2}, 3)) ==
              sut_fingerprint(inject_defects(sut, 2, {1, 2}, 3)));
    }
    SUBCASE("cause sites are sampled without replacement") {
        ArtificialSut injected = inject_defects(sut, 3, {1, 2}, 3);
        std::set<std::string> causes;
        for (const auto& defect : injected.defects)
            CHECK(causes
                      .insert(defect.entity + "|" + defect.cause_function + "|" +
                              std::string(1, op_letter(defect.cause_op)))
                      .second);
    }
}

TEST_CASE("derived matrices from generated SUTs support every criterion") {
    for (std::uint64_t seed : {11, 22, 33}) {
        SutGenConfig config = preset_config("small");
        config.seed = seed;
        ArtificialSut sut = generate_sut(config);
        CrudMatrix matrix = derive_crud_matrix(sut, 1.0, seed);
        REQUIRE(!validate_matrix(matrix).has_errors());
        for (Criterion criterion : all_criteria()) {
            TestSuite suite = generate_suite(matrix, criterion, seed);
            CAPTURE(criterion_name(criterion));
            CHECK(suite.cases.size() == sut.entities.size());
            CHECK(suite.skipped.empty());
        }
    }
}
