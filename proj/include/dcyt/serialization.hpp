#pragma once

#include <variant>

#include "json.hpp"

#include "dcyt/experiment.hpp"
#include "dcyt/generator.hpp"
#include "dcyt/matrix.hpp"
#include "dcyt/simulator.hpp"
#include "dcyt/sut.hpp"
#include "dcyt/sutgen.hpp"

namespace dcyt {

// Insertion-ordered JSON keeps the documented key order, which makes the
// rendered bytes canonical: same value in, same bytes out.
using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;

enum class DocumentKind { Matrix, Sut, Suite, Config, Experiment };

std::string document_kind_name(DocumentKind kind);

struct ModelDocument {
    DocumentKind kind = DocumentKind::Matrix;
    int schema_version = kSchemaVersion;
    std::variant<CrudMatrix, ArtificialSut, TestSuite, SutGenConfig, ExperimentConfig> payload;

    const CrudMatrix& matrix() const;
    const ArtificialSut& sut() const;
    const TestSuite& suite() const;
    const SutGenConfig& config() const;
    const ExperimentConfig& experiment() const;
};

Json matrix_to_json(const CrudMatrix& matrix);
Json sut_to_json(const ArtificialSut& sut);
Json suite_to_json(const TestSuite& suite);
Json config_to_json(const SutGenConfig& config);
Json experiment_config_to_json(const ExperimentConfig& config);
Json report_to_json(const SimulationReport& report);
Json experiment_report_to_json(const ExperimentReport& report);

CrudMatrix matrix_from_json(const Json& doc);
ArtificialSut sut_from_json(const Json& doc);
TestSuite suite_from_json(const Json& doc);
SutGenConfig config_from_json(const Json& doc);
ExperimentConfig experiment_config_from_json(const Json& doc);

/// Parses and validates one document; the payload already passed its
/// module validator (errors only — warnings pass through). Parse errors
/// carry line/column and the offending field path. `source` names the
/// input in messages.
ModelDocument parse_model_document(const std::string& content,
                                   const std::string& source = "<input>");

/// Reads a file (or stdin when path is "-") and parses it.
ModelDocument load_document(const std::string& path);

/// Canonical bytes of a document: 2-space indented JSON, LF endings.
std::string render_json(const Json& doc);

enum class RenderFormat { Json, Text };

/// Suite bytes: canonical JSON, or a numbered human-readable test plan
/// (one line per step: index, function, op, attributes, entity, origin).
std::string render_suite(const TestSuite& suite, RenderFormat format);

std::string render_report_text(const SimulationReport& report);
std::string render_experiment_text(const ExperimentReport& report);

/// Plain CRUD grid import: first row entity ids, first column function
/// ids, cells subsets of the letters C/R/U/D. Produces an attribute-erased
/// matrix.
CrudMatrix import_csv_matrix(const std::string& content,
                             const std::string& source = "<input>");

}  // namespace dcyt
