#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcyt {

using AttributeId = std::string;
using EntityId = std::string;
using FunctionId = std::string;
using StateId = std::string;

/// Raised when a model element is referenced or combined incorrectly
/// (unknown ids, criterion/matrix mismatch, malformed operations).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an input document cannot be parsed or fails schema checks.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a generation config cannot be satisfied (e.g. more defects
/// requested than cause sites exist).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Operation kinds of the extended CRUD matrix. BestRead is a distinguished
// Read; Influenced marks cross-entity side effects and never appears in
// test steps.
enum class OpKind { Create, Read, Update, Delete, BestRead, Influenced };

char op_letter(OpKind kind);
OpKind op_from_letter(char letter);

/// True for Read and BestRead.
inline bool is_read(OpKind kind) {
    return kind == OpKind::Read || kind == OpKind::BestRead;
}

/// True for Create, Update, Delete (the mutating skeleton operations).
inline bool is_mutation(OpKind kind) {
    return kind == OpKind::Create || kind == OpKind::Update || kind == OpKind::Delete;
}

// One operation inside a matrix cell or lifecycle edge. `attributes` is
// meaningful for Read/Update/BestRead; `source_entity` only for Influenced.
struct OperationSpec {
    OpKind kind = OpKind::Create;
    std::vector<AttributeId> attributes;
    EntityId source_entity;

    static OperationSpec create() { return {OpKind::Create, {}, {}}; }
    static OperationSpec read(std::vector<AttributeId> attrs) {
        return {OpKind::Read, std::move(attrs), {}};
    }
    static OperationSpec update(std::vector<AttributeId> attrs) {
        return {OpKind::Update, std::move(attrs), {}};
    }
    static OperationSpec del() { return {OpKind::Delete, {}, {}}; }
    static OperationSpec best_read(std::vector<AttributeId> attrs) {
        return {OpKind::BestRead, std::move(attrs), {}};
    }
    static OperationSpec influenced(EntityId source) {
        return {OpKind::Influenced, {}, std::move(source)};
    }

    bool operator==(const OperationSpec&) const = default;
};

// Conceptual data definition: at least one attribute, optional nested
// entities, optional priority rank (smaller rank = more important).
struct Entity {
    EntityId id;
    std::vector<AttributeId> attributes;
    std::vector<EntityId> sub_entities;
    std::optional<int> priority;

    bool operator==(const Entity&) const = default;
};

// Abstracted unit of functionality that touches data entities.
struct Function {
    FunctionId id;
    std::string name;
    std::optional<int> priority;

    bool operator==(const Function&) const = default;
};

enum class Severity { Error, Warning };

// Validation output entry. Violations are data, not exceptions: a report
// lists everything wrong at once, located by (function, entity, rule).
struct Violation {
    Severity severity = Severity::Error;
    std::string rule;
    FunctionId function_id;
    EntityId entity_id;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool empty() const { return violations.empty(); }
    bool has_errors() const {
        for (const auto& v : violations)
            if (v.severity == Severity::Error) return true;
        return false;
    }
    void add(Severity severity, std::string rule, FunctionId fn, EntityId ent,
             std::string detail) {
        violations.push_back({severity, std::move(rule), std::move(fn), std::move(ent),
                              std::move(detail)});
    }
    std::string to_string() const;
};

/// FNV-1a over a byte string; the building block for content fingerprints.
std::uint64_t fnv1a64(std::uint64_t state, const std::string& bytes);
std::uint64_t fnv1a64(std::uint64_t state, std::uint64_t value);
constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;

/// 16-hex-digit rendering of a 64-bit hash.
std::string hash_hex(std::uint64_t value);

}  // namespace dcyt
