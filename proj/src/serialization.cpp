#include "dcyt/serialization.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace dcyt {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError(path + ": " + what);
}

const Json& member(const Json& node, const char* key, const std::string& path) {
    if (!node.is_object()) fail(path, "expected an object");
    auto it = node.find(key);
    if (it == node.end()) fail(path + "." + key, "missing");
    return *it;
}

const Json* optional_member(const Json& node, const char* key) {
    if (!node.is_object()) return nullptr;
    auto it = node.find(key);
    if (it == node.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string as_string(const Json& node, const std::string& path) {
    if (!node.is_string()) fail(path, "expected a string");
    return node.get<std::string>();
}

double as_number(const Json& node, const std::string& path) {
    if (!node.is_number()) fail(path, "expected a number");
    return node.get<double>();
}

std::uint64_t as_u64(const Json& node, const std::string& path) {
    if (node.is_number_unsigned()) return node.get<std::uint64_t>();
    if (node.is_number_integer()) {
        std::int64_t value = node.get<std::int64_t>();
        if (value < 0) fail(path, "expected a non-negative integer");
        return static_cast<std::uint64_t>(value);
    }
    fail(path, "expected an integer");
}

std::size_t as_size(const Json& node, const std::string& path) {
    return static_cast<std::size_t>(as_u64(node, path));
}

const Json& as_array(const Json& node, const std::string& path) {
    if (!node.is_array()) fail(path, "expected an array");
    return node;
}

std::vector<std::string> string_list(const Json& node, const std::string& path) {
    std::vector<std::string> out;
    const Json& arr = as_array(node, path);
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(as_string(arr[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

OpKind kind_from_json(const Json& node, const std::string& path) {
    std::string text = as_string(node, path);
    if (text.size() != 1) fail(path, "expected a single operation letter");
    try {
        return op_from_letter(text[0]);
    } catch (const ModelError& e) {
        fail(path, e.what());
    }
}

Json op_to_json(const OperationSpec& op) {
    Json node;
    node["kind"] = std::string(1, op_letter(op.kind));
    if (!op.attributes.empty()) node["attributes"] = op.attributes;
    if (op.kind == OpKind::Influenced) node["source"] = op.source_entity;
    return node;
}

OperationSpec op_from_json(const Json& node, const std::string& path) {
    OperationSpec op;
    op.kind = kind_from_json(member(node, "kind", path), path + ".kind");
    if (const Json* attrs = optional_member(node, "attributes"))
        op.attributes = string_list(*attrs, path + ".attributes");
    if (op.kind == OpKind::Influenced)
        op.source_entity = as_string(member(node, "source", path), path + ".source");
    return op;
}

Json entity_to_json(const Entity& entity) {
    Json node;
    node["id"] = entity.id;
    node["attributes"] = entity.attributes;
    if (!entity.sub_entities.empty()) node["sub_entities"] = entity.sub_entities;
    if (entity.priority) node["priority"] = *entity.priority;
    return node;
}

Entity entity_from_json(const Json& node, const std::string& path) {
    Entity entity;
    entity.id = as_string(member(node, "id", path), path + ".id");
    entity.attributes = string_list(member(node, "attributes", path), path + ".attributes");
    if (const Json* subs = optional_member(node, "sub_entities"))
        entity.sub_entities = string_list(*subs, path + ".sub_entities");
    if (const Json* prio = optional_member(node, "priority"))
        entity.priority = static_cast<int>(as_u64(*prio, path + ".priority"));
    return entity;
}

Json function_to_json(const Function& fn) {
    Json node;
    node["id"] = fn.id;
    node["name"] = fn.name;
    if (fn.priority) node["priority"] = *fn.priority;
    return node;
}

Function function_from_json(const Json& node, const std::string& path) {
    Function fn;
    fn.id = as_string(member(node, "id", path), path + ".id");
    fn.name = fn.id;
    if (const Json* name = optional_member(node, "name"))
        fn.name = as_string(*name, path + ".name");
    if (const Json* prio = optional_member(node, "priority"))
        fn.priority = static_cast<int>(as_u64(*prio, path + ".priority"));
    return fn;
}

int checked_schema_version(const Json& doc, const std::string& source) {
    int version = static_cast<int>(
        as_u64(member(doc, "schema_version", source), source + ".schema_version"));
    if (version != kSchemaVersion)
        fail(source + ".schema_version",
             "unknown schema version " + std::to_string(version) + " (expected " +
                 std::to_string(kSchemaVersion) + ")");
    return version;
}

std::string percent(double ratio) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.1f%%", ratio * 100.0);
    return buffer;
}

std::string step_op_text(const TestStep& step) {
    if (!step.op) return "-";
    std::string text(1, op_letter(step.op->kind));
    if (!step.op->attributes.empty()) {
        text += "{";
        for (std::size_t i = 0; i < step.op->attributes.size(); ++i) {
            if (i > 0) text += ",";
            text += step.op->attributes[i];
        }
        text += "}";
    }
    return text;
}

}  // namespace

std::string document_kind_name(DocumentKind kind) {
    switch (kind) {
        case DocumentKind::Matrix: return "matrix";
        case DocumentKind::Sut: return "sut";
        case DocumentKind::Suite: return "suite";
        case DocumentKind::Config: return "config";
        case DocumentKind::Experiment: return "experiment";
    }
    throw ModelError("invalid document kind");
}

const CrudMatrix& ModelDocument::matrix() const {
    if (kind != DocumentKind::Matrix) throw ModelError("document is not a matrix");
    return std::get<CrudMatrix>(payload);
}
const ArtificialSut& ModelDocument::sut() const {
    if (kind != DocumentKind::Sut) throw ModelError("document is not a SUT");
    return std::get<ArtificialSut>(payload);
}
const TestSuite& ModelDocument::suite() const {
    if (kind != DocumentKind::Suite) throw ModelError("document is not a test suite");
    return std::get<TestSuite>(payload);
}
const SutGenConfig& ModelDocument::config() const {
    if (kind != DocumentKind::Config) throw ModelError("document is not a generator config");
    return std::get<SutGenConfig>(payload);
}
const ExperimentConfig& ModelDocument::experiment() const {
    if (kind != DocumentKind::Experiment)
        throw ModelError("document is not an experiment config");
    return std::get<ExperimentConfig>(payload);
}

Json matrix_to_json(const CrudMatrix& matrix) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "matrix";
    doc["attributed"] = matrix.attributed;
    doc["entities"] = Json::array();
    for (const auto& entity : matrix.entities) doc["entities"].push_back(entity_to_json(entity));
    doc["functions"] = Json::array();
    for (const auto& fn : matrix.functions) doc["functions"].push_back(function_to_json(fn));
    doc["cells"] = Json::array();
    for (const auto& fn : matrix.functions) {
        for (const auto& entity : matrix.entities) {
            const auto* ops = matrix.cell(fn.id, entity.id);
            if (!ops || ops->empty()) continue;
            Json cell;
            cell["function"] = fn.id;
            cell["entity"] = entity.id;
            cell["ops"] = Json::array();
            for (const auto& op : *ops) cell["ops"].push_back(op_to_json(op));
            doc["cells"].push_back(std::move(cell));
        }
    }
    return doc;
}

CrudMatrix matrix_from_json(const Json& doc) {
    checked_schema_version(doc, "matrix");
    CrudMatrix matrix;
    if (const Json* attributed = optional_member(doc, "attributed"))
        matrix.attributed = attributed->get<bool>();
    const Json& entities = as_array(member(doc, "entities", "matrix"), "matrix.entities");
    for (std::size_t i = 0; i < entities.size(); ++i)
        matrix.entities.push_back(
            entity_from_json(entities[i], "matrix.entities[" + std::to_string(i) + "]"));
    const Json& functions = as_array(member(doc, "functions", "matrix"), "matrix.functions");
    for (std::size_t i = 0; i < functions.size(); ++i)
        matrix.functions.push_back(
            function_from_json(functions[i], "matrix.functions[" + std::to_string(i) + "]"));
    const Json& cells = as_array(member(doc, "cells", "matrix"), "matrix.cells");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::string path = "matrix.cells[" + std::to_string(i) + "]";
        const Json& cell = cells[i];
        FunctionId fn = as_string(member(cell, "function", path), path + ".function");
        EntityId entity = as_string(member(cell, "entity", path), path + ".entity");
        const Json& ops = as_array(member(cell, "ops", path), path + ".ops");
        for (std::size_t k = 0; k < ops.size(); ++k)
            matrix.add_op(fn, entity,
                          op_from_json(ops[k], path + ".ops[" + std::to_string(k) + "]"));
    }
    return matrix;
}

Json sut_to_json(const ArtificialSut& sut) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "sut";
    doc["functions"] = Json::array();
    for (const auto& fn : sut.functions) doc["functions"].push_back(function_to_json(fn));
    doc["entities"] = Json::array();
    for (const auto& entity : sut.entities) doc["entities"].push_back(entity_to_json(entity));
    doc["states"] = sut.states;
    doc["initial_state"] = sut.initial_state;
    doc["workflows"] = Json::array();
    for (const auto& workflow : sut.workflows) {
        Json node;
        node["id"] = workflow.id;
        node["edges"] = Json::array();
        for (const auto& edge : workflow.edges) {
            Json e;
            e["from"] = edge.from;
            e["to"] = edge.to;
            e["function"] = edge.function;
            node["edges"].push_back(std::move(e));
        }
        doc["workflows"].push_back(std::move(node));
    }
    doc["lifecycles"] = Json::array();
    for (const auto& lifecycle : sut.lifecycles) {
        Json node;
        node["entity"] = lifecycle.entity;
        node["edges"] = Json::array();
        for (const auto& edge : lifecycle.edges) {
            Json e;
            e["from"] = edge.from;
            e["to"] = edge.to;
            e["function"] = edge.function;
            e["ops"] = Json::array();
            for (const auto& op : edge.ops) e["ops"].push_back(op_to_json(op));
            node["edges"].push_back(std::move(e));
        }
        doc["lifecycles"].push_back(std::move(node));
    }
    doc["defects"] = Json::array();
    for (const auto& defect : sut.defects) {
        Json node;
        node["entity"] = defect.entity;
        node["cause_function"] = defect.cause_function;
        node["cause_op"] = std::string(1, op_letter(defect.cause_op));
        node["activators"] = Json::array();
        for (const auto& activator : defect.activators) {
            Json a;
            a["function"] = activator.function;
            a["op"] = std::string(1, op_letter(activator.op));
            node["activators"].push_back(std::move(a));
        }
        doc["defects"].push_back(std::move(node));
    }
    doc["influences"] = Json::array();
    for (const auto& fact : sut.influence_facts) {
        Json node;
        node["influenced"] = fact.influenced;
        node["function"] = fact.function;
        node["source"] = fact.source;
        node["probability"] = fact.inconsistency_probability;
        doc["influences"].push_back(std::move(node));
    }
    return doc;
}

ArtificialSut sut_from_json(const Json& doc) {
    checked_schema_version(doc, "sut");
    ArtificialSut sut;
    const Json& functions = as_array(member(doc, "functions", "sut"), "sut.functions");
    for (std::size_t i = 0; i < functions.size(); ++i)
        sut.functions.push_back(
            function_from_json(functions[i], "sut.functions[" + std::to_string(i) + "]"));
    const Json& entities = as_array(member(doc, "entities", "sut"), "sut.entities");
    for (std::size_t i = 0; i < entities.size(); ++i)
        sut.entities.push_back(
            entity_from_json(entities[i], "sut.entities[" + std::to_string(i) + "]"));
    sut.states = string_list(member(doc, "states", "sut"), "sut.states");
    sut.initial_state = as_string(member(doc, "initial_state", "sut"), "sut.initial_state");
    const Json& workflows = as_array(member(doc, "workflows", "sut"), "sut.workflows");
    for (std::size_t i = 0; i < workflows.size(); ++i) {
        std::string path = "sut.workflows[" + std::to_string(i) + "]";
        WorkflowGraph workflow;
        workflow.id = as_string(member(workflows[i], "id", path), path + ".id");
        const Json& edges = as_array(member(workflows[i], "edges", path), path + ".edges");
        for (std::size_t k = 0; k < edges.size(); ++k) {
            std::string epath = path + ".edges[" + std::to_string(k) + "]";
            workflow.edges.push_back(
                {as_string(member(edges[k], "from", epath), epath + ".from"),
                 as_string(member(edges[k], "to", epath), epath + ".to"),
                 as_string(member(edges[k], "function", epath), epath + ".function")});
        }
        sut.workflows.push_back(std::move(workflow));
    }
    const Json& lifecycles = as_array(member(doc, "lifecycles", "sut"), "sut.lifecycles");
    for (std::size_t i = 0; i < lifecycles.size(); ++i) {
        std::string path = "sut.lifecycles[" + std::to_string(i) + "]";
        LifecycleGraph lifecycle;
        lifecycle.entity = as_string(member(lifecycles[i], "entity", path), path + ".entity");
        const Json& edges = as_array(member(lifecycles[i], "edges", path), path + ".edges");
        for (std::size_t k = 0; k < edges.size(); ++k) {
            std::string epath = path + ".edges[" + std::to_string(k) + "]";
            LifecycleEdge edge;
            edge.from = as_string(member(edges[k], "from", epath), epath + ".from");
            edge.to = as_string(member(edges[k], "to", epath), epath + ".to");
            edge.function = as_string(member(edges[k], "function", epath), epath + ".function");
            const Json& ops = as_array(member(edges[k], "ops", epath), epath + ".ops");
            for (std::size_t o = 0; o < ops.size(); ++o)
                edge.ops.push_back(
                    op_from_json(ops[o], epath + ".ops[" + std::to_string(o) + "]"));
            lifecycle.edges.push_back(std::move(edge));
        }
        sut.lifecycles.push_back(std::move(lifecycle));
    }
    if (const Json* defects = optional_member(doc, "defects")) {
        for (std::size_t i = 0; i < defects->size(); ++i) {
            std::string path = "sut.defects[" + std::to_string(i) + "]";
            const Json& node = (*defects)[i];
            Defect defect;
            defect.entity = as_string(member(node, "entity", path), path + ".entity");
            defect.cause_function =
                as_string(member(node, "cause_function", path), path + ".cause_function");
            defect.cause_op = kind_from_json(member(node, "cause_op", path), path + ".cause_op");
            const Json& activators =
                as_array(member(node, "activators", path), path + ".activators");
            for (std::size_t k = 0; k < activators.size(); ++k) {
                std::string apath = path + ".activators[" + std::to_string(k) + "]";
                defect.activators.push_back(
                    {as_string(member(activators[k], "function", apath), apath + ".function"),
                     kind_from_json(member(activators[k], "op", apath), apath + ".op")});
            }
            sut.defects.push_back(std::move(defect));
        }
    }
    if (const Json* influences = optional_member(doc, "influences")) {
        for (std::size_t i = 0; i < influences->size(); ++i) {
            std::string path = "sut.influences[" + std::to_string(i) + "]";
            const Json& node = (*influences)[i];
            sut.influence_facts.push_back(
                {as_string(member(node, "influenced", path), path + ".influenced"),
                 as_string(member(node, "function", path), path + ".function"),
                 as_string(member(node, "source", path), path + ".source"),
                 as_number(member(node, "probability", path), path + ".probability")});
        }
    }
    return sut;
}

Json suite_to_json(const TestSuite& suite) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "suite";
    doc["matrix_fingerprint"] = suite.matrix_fingerprint;
    doc["criterion"] = criterion_name(suite.criterion);
    doc["cases"] = Json::array();
    for (const auto& test_case : suite.cases) {
        Json node;
        node["entity"] = test_case.entity;
        node["criterion"] = criterion_name(test_case.criterion);
        node["seed"] = test_case.seed;
        node["steps"] = Json::array();
        for (const auto& step : test_case.steps) {
            Json s;
            s["function"] = step.function;
            s["op"] = step.op ? op_to_json(*step.op) : Json(nullptr);
            s["entity"] = step.entity.empty() ? Json(nullptr) : Json(step.entity);
            s["origin"] = origin_name(step.origin);
            node["steps"].push_back(std::move(s));
        }
        doc["cases"].push_back(std::move(node));
    }
    doc["skipped"] = Json::array();
    for (const auto& skipped : suite.skipped) {
        Json node;
        node["entity"] = skipped.entity;
        node["reason"] = skipped.reason;
        doc["skipped"].push_back(std::move(node));
    }
    return doc;
}

TestSuite suite_from_json(const Json& doc) {
    checked_schema_version(doc, "suite");
    TestSuite suite;
    suite.matrix_fingerprint =
        as_string(member(doc, "matrix_fingerprint", "suite"), "suite.matrix_fingerprint");
    suite.criterion = criterion_from_name(
        as_string(member(doc, "criterion", "suite"), "suite.criterion"));
    const Json& cases = as_array(member(doc, "cases", "suite"), "suite.cases");
    for (std::size_t i = 0; i < cases.size(); ++i) {
        std::string path = "suite.cases[" + std::to_string(i) + "]";
        const Json& node = cases[i];
        TestCase test_case;
        test_case.entity = as_string(member(node, "entity", path), path + ".entity");
        test_case.criterion =
            criterion_from_name(as_string(member(node, "criterion", path), path + ".criterion"));
        test_case.seed = as_u64(member(node, "seed", path), path + ".seed");
        const Json& steps = as_array(member(node, "steps", path), path + ".steps");
        for (std::size_t k = 0; k < steps.size(); ++k) {
            std::string spath = path + ".steps[" + std::to_string(k) + "]";
            const Json& snode = steps[k];
            TestStep step;
            step.function = as_string(member(snode, "function", spath), spath + ".function");
            if (const Json* op = optional_member(snode, "op"))
                step.op = op_from_json(*op, spath + ".op");
            if (const Json* entity = optional_member(snode, "entity"))
                step.entity = as_string(*entity, spath + ".entity");
            step.origin =
                origin_from_name(as_string(member(snode, "origin", spath), spath + ".origin"));
            test_case.steps.push_back(std::move(step));
        }
        suite.cases.push_back(std::move(test_case));
    }
    if (const Json* skipped = optional_member(doc, "skipped")) {
        for (std::size_t i = 0; i < skipped->size(); ++i) {
            std::string path = "suite.skipped[" + std::to_string(i) + "]";
            suite.skipped.push_back(
                {as_string(member((*skipped)[i], "entity", path), path + ".entity"),
                 as_string(member((*skipped)[i], "reason", path), path + ".reason")});
        }
    }
    return suite;
}

Json config_to_json(const SutGenConfig& config) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "config";
    doc["num_entities"] = config.num_entities;
    doc["attrs_per_entity"] = {{"min", config.attrs_per_entity.min},
                               {"max", config.attrs_per_entity.max}};
    doc["num_functions"] = config.num_functions;
    doc["num_states"] = config.num_states;
    doc["num_workflows"] = config.num_workflows;
    doc["edges_per_workflow"] = {{"min", config.edges_per_workflow.min},
                                 {"max", config.edges_per_workflow.max}};
    doc["ops_density"] = config.ops_density;
    doc["num_defects"] = config.num_defects;
    doc["activators_per_defect"] = {{"min", config.activators_per_defect.min},
                                    {"max", config.activators_per_defect.max}};
    doc["num_influence_facts"] = config.num_influence_facts;
    doc["influence_probability"] = config.influence_probability;
    doc["seed"] = config.seed;
    return doc;
}

namespace {

CountRange range_from_json(const Json& node, const std::string& path) {
    return {as_size(member(node, "min", path), path + ".min"),
            as_size(member(node, "max", path), path + ".max")};
}

}  // namespace

SutGenConfig config_from_json(const Json& doc) {
    checked_schema_version(doc, "config");
    SutGenConfig config;
    config.num_entities = as_size(member(doc, "num_entities", "config"), "config.num_entities");
    config.attrs_per_entity =
        range_from_json(member(doc, "attrs_per_entity", "config"), "config.attrs_per_entity");
    config.num_functions =
        as_size(member(doc, "num_functions", "config"), "config.num_functions");
    config.num_states = as_size(member(doc, "num_states", "config"), "config.num_states");
    config.num_workflows =
        as_size(member(doc, "num_workflows", "config"), "config.num_workflows");
    config.edges_per_workflow = range_from_json(member(doc, "edges_per_workflow", "config"),
                                                "config.edges_per_workflow");
    config.ops_density = as_number(member(doc, "ops_density", "config"), "config.ops_density");
    config.num_defects = as_size(member(doc, "num_defects", "config"), "config.num_defects");
    config.activators_per_defect = range_from_json(
        member(doc, "activators_per_defect", "config"), "config.activators_per_defect");
    config.num_influence_facts =
        as_size(member(doc, "num_influence_facts", "config"), "config.num_influence_facts");
    config.influence_probability = as_number(member(doc, "influence_probability", "config"),
                                             "config.influence_probability");
    if (const Json* seed = optional_member(doc, "seed"))
        config.seed = as_u64(*seed, "config.seed");
    return config;
}

Json experiment_config_to_json(const ExperimentConfig& config) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "experiment";
    doc["instances"] = Json::array();
    for (const auto& spec : config.instances) {
        Json node;
        if (!spec.label.empty()) node["label"] = spec.label;
        if (!spec.preset.empty()) node["preset"] = spec.preset;
        if (spec.config) node["config"] = config_to_json(*spec.config);
        doc["instances"].push_back(std::move(node));
    }
    doc["criteria"] = Json::array();
    for (Criterion criterion : config.criteria)
        doc["criteria"].push_back(criterion_name(criterion));
    doc["capture_ratio"] = config.capture_ratio;
    doc["seeds_per_instance"] = config.seeds_per_instance;
    doc["strict_detection"] = config.strict_detection;
    return doc;
}

ExperimentConfig experiment_config_from_json(const Json& doc) {
    checked_schema_version(doc, "experiment");
    ExperimentConfig config;
    const Json& instances =
        as_array(member(doc, "instances", "experiment"), "experiment.instances");
    for (std::size_t i = 0; i < instances.size(); ++i) {
        std::string path = "experiment.instances[" + std::to_string(i) + "]";
        InstanceSpec spec;
        if (const Json* label = optional_member(instances[i], "label"))
            spec.label = as_string(*label, path + ".label");
        if (const Json* preset = optional_member(instances[i], "preset"))
            spec.preset = as_string(*preset, path + ".preset");
        if (const Json* inline_config = optional_member(instances[i], "config"))
            spec.config = config_from_json(*inline_config);
        if (spec.preset.empty() && !spec.config)
            fail(path, "instance needs a preset or an inline config");
        config.instances.push_back(std::move(spec));
    }
    const Json& criteria = as_array(member(doc, "criteria", "experiment"), "experiment.criteria");
    for (std::size_t i = 0; i < criteria.size(); ++i)
        config.criteria.push_back(criterion_from_name(
            as_string(criteria[i], "experiment.criteria[" + std::to_string(i) + "]")));
    if (const Json* ratio = optional_member(doc, "capture_ratio"))
        config.capture_ratio = as_number(*ratio, "experiment.capture_ratio");
    if (const Json* seeds = optional_member(doc, "seeds_per_instance"))
        config.seeds_per_instance = as_size(*seeds, "experiment.seeds_per_instance");
    if (const Json* strict = optional_member(doc, "strict_detection"))
        config.strict_detection = strict->get<bool>();
    return config;
}

Json report_to_json(const SimulationReport& report) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "report";
    doc["sut_fingerprint"] = report.sut_fingerprint;
    doc["criterion"] = report.criterion;
    doc["seed"] = report.seed;
    doc["total_steps"] = report.total_steps;
    doc["inconsistent_steps"] = report.inconsistent_steps;
    doc["inconsistent_ratio"] = report.inconsistent_ratio;
    auto defect_refs = [](const std::vector<DefectRef>& refs) {
        Json arr = Json::array();
        for (const auto& ref : refs) {
            Json node;
            node["index"] = ref.index;
            node["entity"] = ref.entity;
            node["cause_function"] = ref.cause_function;
            node["cause_op"] = std::string(1, op_letter(ref.cause_op));
            arr.push_back(std::move(node));
        }
        return arr;
    };
    doc["detected_defects"] = defect_refs(report.detected_defects);
    doc["leaked_defects"] = defect_refs(report.leaked_defects);
    doc["leakage_ratio"] = report.leakage_ratio;
    doc["per_case"] = Json::array();
    for (const auto& breakdown : report.per_case) {
        Json node;
        node["entity"] = breakdown.entity;
        node["total_steps"] = breakdown.total_steps;
        node["inconsistent_indices"] = breakdown.inconsistent_steps;
        node["influence_events"] = breakdown.influence_events;
        doc["per_case"].push_back(std::move(node));
    }
    return doc;
}

Json experiment_report_to_json(const ExperimentReport& report) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "experiment-report";
    doc["seed"] = report.seed;
    doc["capture_ratio"] = report.capture_ratio;
    doc["seeds_per_instance"] = report.seeds_per_instance;
    doc["instances"] = report.instance_labels;
    doc["rows"] = Json::array();
    for (const auto& row : report.rows) {
        Json node;
        node["criterion"] = criterion_name(row.criterion);
        node["baseline"] = row.baseline ? Json(criterion_name(*row.baseline)) : Json(nullptr);
        node["avg_steps"] = row.avg_steps;
        node["avg_inconsistent_ratio"] = row.avg_inconsistent_ratio;
        node["avg_leakage_ratio"] = row.avg_leakage_ratio;
        node["avg_step_increase"] =
            row.avg_step_increase ? Json(*row.avg_step_increase) : Json(nullptr);
        doc["rows"].push_back(std::move(node));
    }
    return doc;
}

ModelDocument parse_model_document(const std::string& content, const std::string& source) {
    Json doc;
    try {
        doc = Json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
        // convert the byte offset into line/column
        std::size_t offset = std::min(e.byte, content.size());
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i + 1 <= offset && i < content.size(); ++i) {
            if (content[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + e.what());
    }

    std::string kind = as_string(member(doc, "kind", source), source + ".kind");
    ModelDocument document;
    document.schema_version = checked_schema_version(doc, source);
    try {
        if (kind == "matrix") {
            document.kind = DocumentKind::Matrix;
            CrudMatrix matrix = matrix_from_json(doc);
            ValidationReport report = validate_matrix(matrix);
            if (report.has_errors())
                throw ParseError(source + ": matrix does not validate:\n" + report.to_string());
            document.payload = std::move(matrix);
        } else if (kind == "sut") {
            document.kind = DocumentKind::Sut;
            ArtificialSut sut = sut_from_json(doc);
            ValidationReport report = validate_sut(sut);
            if (report.has_errors())
                throw ParseError(source + ": SUT does not validate:\n" + report.to_string());
            document.payload = std::move(sut);
        } else if (kind == "suite") {
            document.kind = DocumentKind::Suite;
            document.payload = suite_from_json(doc);
        } else if (kind == "config") {
            document.kind = DocumentKind::Config;
            SutGenConfig config = config_from_json(doc);
            validate_config(config);
            document.payload = std::move(config);
        } else if (kind == "experiment") {
            document.kind = DocumentKind::Experiment;
            document.payload = experiment_config_from_json(doc);
        } else {
            fail(source + ".kind", "unknown document kind '" + kind + "'");
        }
    } catch (const ModelError& e) {
        throw ParseError(source + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(source + ": " + e.what());
    }
    return document;
}

ModelDocument load_document(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return parse_model_document(buffer.str(), "<stdin>");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model_document(buffer.str(), path);
}

std::string render_json(const Json& doc) { return doc.dump(2) + "\n"; }

std::string render_suite(const TestSuite& suite, RenderFormat format) {
    if (format == RenderFormat::Json) return render_json(suite_to_json(suite));

    std::ostringstream out;
    out << "suite criterion=" << criterion_name(suite.criterion)
        << " matrix=" << suite.matrix_fingerprint << "\n";
    for (const auto& test_case : suite.cases) {
        out << "\n# " << test_case.entity << " (" << criterion_name(test_case.criterion)
            << ", seed " << test_case.seed << ")\n";
        for (std::size_t i = 0; i < test_case.steps.size(); ++i) {
            const TestStep& step = test_case.steps[i];
            out << (i + 1) << ". " << step.function << " " << step_op_text(step) << " "
                << (step.entity.empty() ? "-" : step.entity) << " ["
                << origin_name(step.origin) << "]\n";
        }
    }
    for (const auto& skipped : suite.skipped)
        out << "\n# skipped " << skipped.entity << ": " << skipped.reason << "\n";
    return out.str();
}

std::string render_report_text(const SimulationReport& report) {
    std::ostringstream out;
    out << "criterion: " << report.criterion << "\n";
    out << "total steps: " << report.total_steps << "\n";
    out << "inconsistent steps: " << report.inconsistent_steps << " ("
        << percent(report.inconsistent_ratio) << ")\n";
    std::size_t defects = report.detected_defects.size() + report.leaked_defects.size();
    out << "detected defects: " << report.detected_defects.size() << "/" << defects << "\n";
    out << "leaked defects: " << report.leaked_defects.size() << "/" << defects << " ("
        << percent(report.leakage_ratio) << ")\n";
    for (const auto& breakdown : report.per_case) {
        out << "  " << breakdown.entity << ": steps=" << breakdown.total_steps
            << " inconsistent=" << breakdown.inconsistent_steps.size()
            << " influence-events=" << breakdown.influence_events << "\n";
    }
    return out.str();
}

std::string render_experiment_text(const ExperimentReport& report) {
    std::ostringstream out;
    out << "instances:";
    for (const auto& label : report.instance_labels) out << " " << label;
    out << "\nseeds per instance: " << report.seeds_per_instance
        << ", capture ratio: " << report.capture_ratio << ", seed: " << report.seed << "\n\n";

    auto pad = [](std::string text, std::size_t width) {
        if (text.size() < width) text.append(width - text.size(), ' ');
        return text;
    };
    out << pad("criterion", 12) << pad("avg steps", 12) << pad("inconsistent", 15)
        << pad("leakage", 11) << "step increase\n";
    for (const auto& row : report.rows) {
        char steps[32];
        std::snprintf(steps, sizeof(steps), "%.1f", row.avg_steps);
        out << pad(criterion_name(row.criterion), 12) << pad(steps, 12)
            << pad(percent(row.avg_inconsistent_ratio), 15)
            << pad(percent(row.avg_leakage_ratio), 11)
            << (row.avg_step_increase ? percent(*row.avg_step_increase) : "-") << "\n";
    }
    return out.str();
}

CrudMatrix import_csv_matrix(const std::string& content, const std::string& source) {
    std::vector<std::vector<std::string>> rows;
    {
        std::istringstream in(content);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::string field;
            std::istringstream line_in(line);
            while (std::getline(line_in, field, ',')) {
                // trim surrounding whitespace
                std::size_t begin = field.find_first_not_of(" \t");
                std::size_t end = field.find_last_not_of(" \t");
                fields.push_back(begin == std::string::npos
                                     ? ""
                                     : field.substr(begin, end - begin + 1));
            }
            if (line.back() == ',') fields.push_back("");
            rows.push_back(std::move(fields));
        }
    }
    if (rows.empty()) throw ParseError(source + ": empty CSV input");

    CrudMatrix matrix;
    matrix.attributed = false;
    const auto& header = rows.front();
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty())
            throw ParseError(source + ": line 1: empty entity id in column " +
                             std::to_string(c + 1));
        matrix.entities.push_back({header[c], {}, {}, std::nullopt});
    }
    if (matrix.entities.empty()) throw ParseError(source + ": header declares no entities");

    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        std::string line_no = std::to_string(r + 1);
        if (row.empty() || row[0].empty())
            throw ParseError(source + ": line " + line_no + ": missing function id");
        if (row.size() > header.size())
            throw ParseError(source + ": line " + line_no + ": more cells than entities");
        matrix.functions.push_back({row[0], row[0], std::nullopt});
        for (std::size_t c = 1; c < row.size(); ++c) {
            for (char letter : row[c]) {
                if (letter == ' ') continue;
                OpKind kind;
                try {
                    kind = op_from_letter(letter);
                } catch (const ModelError&) {
                    throw ParseError(source + ": line " + line_no + ", column " +
                                     std::to_string(c + 1) + ": unknown operation letter '" +
                                     letter + "'");
                }
                if (kind == OpKind::BestRead || kind == OpKind::Influenced)
                    throw ParseError(source + ": line " + line_no + ", column " +
                                     std::to_string(c + 1) + ": plain CSV cells allow C, R, U, D "
                                     "only");
                matrix.add_op(row[0], matrix.entities[c - 1].id, {kind, {}, {}});
            }
        }
    }

    ValidationReport report = validate_matrix(matrix);
    if (report.has_errors())
        throw ParseError(source + ": imported matrix does not validate:\n" + report.to_string());
    return matrix;
}

}  // namespace dcyt
