#include "dcyt/sutgen.hpp"

#include <algorithm>

#include "dcyt/rng.hpp"

namespace dcyt {

namespace {

std::vector<AttributeId> random_attr_subset(Rng& rng, const std::vector<AttributeId>& attrs,
                                            bool full = false) {
    if (full || attrs.size() == 1) return attrs;
    std::size_t size = static_cast<std::size_t>(rng.between(1, attrs.size()));
    auto indices = rng.sample_indices(attrs.size(), size);
    std::sort(indices.begin(), indices.end());  // keep declaration order
    std::vector<AttributeId> subset;
    for (std::size_t i : indices) subset.push_back(attrs[i]);
    return subset;
}

struct CauseTriple {
    EntityId entity;
    FunctionId function;
    OpKind op;

    bool operator==(const CauseTriple&) const = default;
};

std::vector<CauseTriple> cause_triples(const ArtificialSut& sut) {
    std::vector<CauseTriple> triples;
    for (const auto& entity : sut.entities)
        for (const auto& fn : sut.functions) {
            auto kinds = ops_performed(sut, fn.id, entity.id);
            if (kinds.count(OpKind::Create)) triples.push_back({entity.id, fn.id, OpKind::Create});
            if (kinds.count(OpKind::Update)) triples.push_back({entity.id, fn.id, OpKind::Update});
        }
    return triples;
}

std::vector<Defect> sample_defects(const ArtificialSut& sut, std::size_t n,
                                   CountRange activators_range, std::uint64_t seed) {
    std::vector<CauseTriple> triples = cause_triples(sut);
    // skip cause sites already used by existing defects
    std::erase_if(triples, [&](const CauseTriple& t) {
        for (const auto& defect : sut.defects)
            if (defect.entity == t.entity && defect.cause_function == t.function &&
                defect.cause_op == t.op)
                return true;
        return false;
    });
    if (n > triples.size())
        throw ConfigError("cannot inject " + std::to_string(n) + " defects: only " +
                          std::to_string(triples.size()) + " unused cause sites exist");

    Rng rng(derive_seed(seed, "defects"));
    auto picks = rng.sample_indices(triples.size(), n);
    std::vector<Defect> defects;
    for (std::size_t pick : picks) {
        const CauseTriple& cause = triples[pick];
        Defect defect;
        defect.entity = cause.entity;
        defect.cause_function = cause.function;
        defect.cause_op = cause.op;

        std::vector<DefectActivator> candidates;
        for (const auto& fn : sut.functions)
            for (OpKind kind : {OpKind::Create, OpKind::Read, OpKind::Update, OpKind::Delete})
                if (ops_performed(sut, fn.id, cause.entity).count(kind))
                    candidates.push_back({fn.id, kind});
        std::size_t want = static_cast<std::size_t>(
            rng.between(activators_range.min, activators_range.max));
        want = std::clamp<std::size_t>(want, 1, candidates.size());
        auto activator_picks = rng.sample_indices(candidates.size(), want);
        std::sort(activator_picks.begin(), activator_picks.end());
        for (std::size_t i : activator_picks) defect.activators.push_back(candidates[i]);
        defects.push_back(std::move(defect));
    }
    return defects;
}

}  // namespace

void validate_config(const SutGenConfig& config) {
    auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
    if (config.num_entities < 1) fail("at least one entity is required");
    if (config.num_functions < 1) fail("at least one function is required");
    if (config.num_states < 2) fail("at least two states are required");
    if (config.attrs_per_entity.min < 1) fail("entities need at least one attribute");
    if (config.attrs_per_entity.min > config.attrs_per_entity.max)
        fail("attrs_per_entity range is inverted");
    if (config.edges_per_workflow.min > config.edges_per_workflow.max)
        fail("edges_per_workflow range is inverted");
    if (config.num_workflows > 0 && config.edges_per_workflow.min < 1)
        fail("workflows need at least one edge");
    if (config.ops_density <= 0.0 || config.ops_density > 1.0)
        fail("ops_density must be in (0, 1]");
    if (config.activators_per_defect.min > config.activators_per_defect.max)
        fail("activators_per_defect range is inverted");
    if (config.num_defects > 0 && config.activators_per_defect.min < 1)
        fail("defects need at least one activator");
    if (config.influence_probability < 0.0 || config.influence_probability > 1.0)
        fail("influence_probability must be in [0, 1]");
}

ArtificialSut generate_sut(const SutGenConfig& config) {
    validate_config(config);
    const std::uint64_t seed = config.seed;

    ArtificialSut sut;
    for (std::size_t s = 0; s < config.num_states; ++s)
        sut.states.push_back("s" + std::to_string(s));
    sut.initial_state = sut.states.front();

    for (std::size_t f = 0; f < config.num_functions; ++f) {
        FunctionId id = "f" + std::to_string(f + 1);
        sut.functions.push_back({id, id, std::nullopt});
    }

    for (std::size_t e = 0; e < config.num_entities; ++e) {
        Entity entity;
        entity.id = "E" + std::to_string(e + 1);
        Rng rng(derive_seed(seed, "entity", entity.id));
        std::size_t attr_count = static_cast<std::size_t>(
            rng.between(config.attrs_per_entity.min, config.attrs_per_entity.max));
        for (std::size_t a = 0; a < attr_count; ++a)
            entity.attributes.push_back("a" + std::to_string(a + 1));
        sut.entities.push_back(std::move(entity));
    }

    // Lifecycles. Each entity gets a spanning arborescence from the initial
    // state over a state subset (the first entity spans every state, which
    // keeps the whole system reachable), a Create on the first edge, a
    // Delete on the last tree edge, three read screens (record view after
    // create, a listing, a post-delete check), then density-driven extra
    // edges and R/U ops.
    struct PendingEdge {
        StateId from;
        StateId to;
        std::vector<OperationSpec> ops;
    };
    std::vector<std::vector<PendingEdge>> lifecycle_edges(config.num_entities);
    for (std::size_t e = 0; e < config.num_entities; ++e) {
        const Entity& entity = sut.entities[e];
        Rng rng(derive_seed(seed, "lifecycle", entity.id));
        std::vector<PendingEdge>& edges = lifecycle_edges[e];

        std::vector<StateId> others(sut.states.begin() + 1, sut.states.end());
        rng.shuffle(others);
        std::size_t subset_size =
            e == 0 ? config.num_states
                   : static_cast<std::size_t>(rng.between(2, config.num_states));
        std::vector<StateId> subset{sut.initial_state};
        subset.insert(subset.end(), others.begin(),
                      others.begin() + static_cast<std::ptrdiff_t>(subset_size - 1));

        std::vector<StateId> connected{sut.initial_state};
        for (std::size_t i = 1; i < subset.size(); ++i) {
            StateId parent = connected[rng.below(connected.size())];
            edges.push_back({parent, subset[i], {}});
            connected.push_back(subset[i]);
        }

        StateId create_target = edges.empty() ? sut.initial_state : edges.front().to;
        StateId delete_target = edges.empty() ? sut.initial_state : edges.back().to;
        if (edges.empty()) {
            // degenerate two-state subset cannot happen (num_states >= 2),
            // but keep the construction total
            edges.push_back({sut.initial_state, sut.initial_state, {}});
            create_target = delete_target = sut.initial_state;
        }
        edges.front().ops.push_back(OperationSpec::create());
        edges.back().ops.push_back(OperationSpec::del());

        edges.push_back({create_target, create_target,
                         {OperationSpec::read(random_attr_subset(rng, entity.attributes,
                                                                 /*full=*/true))}});
        StateId listing_state = subset[rng.below(subset.size())];
        edges.push_back({listing_state, listing_state,
                         {OperationSpec::read(random_attr_subset(rng, entity.attributes))}});
        edges.push_back({delete_target, delete_target,
                         {OperationSpec::read(random_attr_subset(rng, entity.attributes))}});

        std::size_t extra = static_cast<std::size_t>(config.ops_density * subset.size() + 0.5);
        for (std::size_t x = 0; x < extra; ++x) {
            StateId from = subset[rng.below(subset.size())];
            StateId to = subset[rng.below(subset.size())];
            edges.push_back({from, to, {}});
        }

        for (auto& edge : edges) {
            bool has_read = false, has_update = false;
            for (const auto& op : edge.ops) {
                has_read |= op.kind == OpKind::Read;
                has_update |= op.kind == OpKind::Update;
            }
            if (!has_read && rng.chance(config.ops_density))
                edge.ops.push_back(OperationSpec::read(random_attr_subset(rng, entity.attributes)));
            if (!has_update && rng.chance(config.ops_density))
                edge.ops.push_back(
                    OperationSpec::update(random_attr_subset(rng, entity.attributes)));
        }
    }

    // Workflows as random walks over the full state set.
    std::vector<std::vector<std::pair<StateId, StateId>>> workflow_edges(config.num_workflows);
    for (std::size_t w = 0; w < config.num_workflows; ++w) {
        std::string id = "w" + std::to_string(w + 1);
        Rng rng(derive_seed(seed, "workflow", id));
        std::size_t length = static_cast<std::size_t>(
            rng.between(config.edges_per_workflow.min, config.edges_per_workflow.max));
        StateId current = sut.states[rng.below(sut.states.size())];
        for (std::size_t i = 0; i < length; ++i) {
            StateId next = sut.states[rng.below(sut.states.size())];
            workflow_edges[w].emplace_back(current, next);
            current = next;
        }
    }

    // Function labels: every function labels at least one edge; the rest
    // of the slots draw uniformly.
    std::size_t total_slots = 0;
    for (const auto& edges : lifecycle_edges) total_slots += edges.size();
    for (const auto& edges : workflow_edges) total_slots += edges.size();
    if (total_slots < config.num_functions)
        throw ConfigError("cannot place " + std::to_string(config.num_functions) +
                          " functions on " + std::to_string(total_slots) + " edges");

    Rng label_rng(derive_seed(seed, "labels"));
    std::vector<FunctionId> slot_labels(total_slots);
    {
        auto slots_for_unique = label_rng.sample_indices(total_slots, config.num_functions);
        std::vector<std::size_t> function_order(config.num_functions);
        for (std::size_t i = 0; i < config.num_functions; ++i) function_order[i] = i;
        label_rng.shuffle(function_order);
        for (std::size_t i = 0; i < config.num_functions; ++i)
            slot_labels[slots_for_unique[i]] = sut.functions[function_order[i]].id;
        for (auto& label : slot_labels)
            if (label.empty())
                label = sut.functions[label_rng.below(config.num_functions)].id;
    }

    std::size_t slot = 0;
    for (std::size_t e = 0; e < config.num_entities; ++e) {
        LifecycleGraph lifecycle;
        lifecycle.entity = sut.entities[e].id;
        for (const auto& edge : lifecycle_edges[e])
            lifecycle.edges.push_back({edge.from, edge.to, slot_labels[slot++], edge.ops});
        sut.lifecycles.push_back(std::move(lifecycle));
    }
    for (std::size_t w = 0; w < config.num_workflows; ++w) {
        WorkflowGraph workflow;
        workflow.id = "w" + std::to_string(w + 1);
        for (const auto& [from, to] : workflow_edges[w])
            workflow.edges.push_back({from, to, slot_labels[slot++]});
        sut.workflows.push_back(std::move(workflow));
    }

    // Influence facts: function mutating one entity side-effects another.
    if (config.num_influence_facts > 0) {
        struct InfluenceCandidate {
            EntityId influenced;
            FunctionId function;
            EntityId source;
        };
        std::vector<InfluenceCandidate> candidates;
        for (const auto& influenced : sut.entities)
            for (const auto& fn : sut.functions)
                for (const auto& source : sut.entities) {
                    if (influenced.id == source.id) continue;
                    auto kinds = ops_performed(sut, fn.id, source.id);
                    if (kinds.count(OpKind::Create) || kinds.count(OpKind::Update) ||
                        kinds.count(OpKind::Delete))
                        candidates.push_back({influenced.id, fn.id, source.id});
                }
        if (config.num_influence_facts > candidates.size())
            throw ConfigError("cannot place " + std::to_string(config.num_influence_facts) +
                              " influence facts: only " + std::to_string(candidates.size()) +
                              " (entity, function, entity) sites exist");
        Rng rng(derive_seed(seed, "influences"));
        auto picks = rng.sample_indices(candidates.size(), config.num_influence_facts);
        std::sort(picks.begin(), picks.end());
        for (std::size_t pick : picks)
            sut.influence_facts.push_back({candidates[pick].influenced,
                                           candidates[pick].function, candidates[pick].source,
                                           config.influence_probability});
    }

    if (config.num_defects > 0) {
        auto defects =
            sample_defects(sut, config.num_defects, config.activators_per_defect, seed);
        sut.defects = std::move(defects);
    }

    return sut;
}

ArtificialSut inject_defects(const ArtificialSut& sut, std::size_t n,
                             CountRange activators_range, std::uint64_t seed) {
    ArtificialSut result = sut;
    if (n == 0) return result;
    auto defects = sample_defects(sut, n, activators_range, seed);
    result.defects.insert(result.defects.end(), defects.begin(), defects.end());
    return result;
}

SutGenConfig preset_config(const std::string& name) {
    SutGenConfig config;
    config.ops_density = 0.5;
    config.influence_probability = 0.3;
    if (name == "small") {
        config.num_entities = 3;
        config.attrs_per_entity = {2, 4};
        config.num_functions = 12;
        config.num_states = 5;
        config.num_workflows = 2;
        config.edges_per_workflow = {3, 6};
        config.num_defects = 5;
        config.activators_per_defect = {1, 3};
        config.num_influence_facts = 2;
    } else if (name == "medium") {
        config.num_entities = 5;
        config.attrs_per_entity = {2, 5};
        config.num_functions = 20;
        config.num_states = 6;
        config.num_workflows = 3;
        config.edges_per_workflow = {4, 8};
        config.num_defects = 8;
        config.activators_per_defect = {1, 3};
        config.num_influence_facts = 4;
    } else if (name == "large") {
        config.num_entities = 8;
        config.attrs_per_entity = {3, 6};
        config.num_functions = 32;
        config.num_states = 8;
        config.num_workflows = 4;
        config.edges_per_workflow = {5, 10};
        config.num_defects = 12;
        config.activators_per_defect = {1, 4};
        config.num_influence_facts = 6;
    } else if (name == "xlarge") {
        config.num_entities = 12;
        config.attrs_per_entity = {3, 7};
        config.num_functions = 48;
        config.num_states = 10;
        config.num_workflows = 5;
        config.edges_per_workflow = {6, 12};
        config.num_defects = 18;
        config.activators_per_defect = {2, 4};
        config.num_influence_facts = 10;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return config;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"small", "medium", "large", "xlarge"};
    return names;
}

}  // namespace dcyt
