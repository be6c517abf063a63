#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dcyt/consistency.hpp"
#include "dcyt/experiment.hpp"
#include "dcyt/generator.hpp"
#include "dcyt/serialization.hpp"
#include "dcyt/simulator.hpp"
#include "dcyt/sutgen.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitInconsistent = 2;
constexpr int kExitUnsatisfiable = 3;

void emit(const std::string& bytes, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << bytes;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw dcyt::ParseError(out_path + ": cannot open for writing");
    out << bytes;
}

dcyt::RenderFormat parse_format(const std::string& name) {
    if (name == "json") return dcyt::RenderFormat::Json;
    if (name == "text") return dcyt::RenderFormat::Text;
    throw dcyt::ParseError("unknown format '" + name + "'");
}

const std::vector<std::string> kCriterionNames = {"dcyt-1r", "dcyt-nr", "or", "ob",
                                                  "ir",      "iri",     "nr", "nri"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-cycle test toolkit: generates, repairs and evaluates "
                 "data-consistency test suites from extended CRUD matrices"};
    app.require_subcommand(1);

    std::string in_path, out_path = "-", sut_path, config_path, entity_id, preset;
    std::string criterion_name = "ob", format_name = "json";
    std::uint64_t seed = 0;
    double capture_ratio = 1.0;
    bool strict_detection = false;
    bool have_seed_override = false;

    auto* validate_cmd = app.add_subcommand("validate", "Validate a model document");
    validate_cmd->add_option("input", in_path, "model document (JSON), or - for stdin")
        ->required();

    auto* import_cmd =
        app.add_subcommand("import-csv", "Import a plain CRUD grid as a matrix document");
    import_cmd->add_option("input", in_path, "CSV file, or - for stdin")->required();
    import_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* suggest_cmd = app.add_subcommand(
        "suggest-best-read", "Suggest the widest read of an entity as its best read");
    suggest_cmd->add_option("input", in_path, "matrix document")->required();
    suggest_cmd->add_option("--entity", entity_id, "entity id")->required();

    auto* generate_cmd = app.add_subcommand("generate", "Generate a test suite from a matrix");
    generate_cmd->add_option("input", in_path, "matrix document")->required();
    generate_cmd->add_option("--criterion", criterion_name, "coverage criterion")
        ->required()
        ->check(CLI::IsMember(kCriterionNames));
    generate_cmd->add_option("--seed", seed, "generation seed")->required();
    generate_cmd->add_option("--format", format_name, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    generate_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* check_cmd =
        app.add_subcommand("check", "Check a suite for inconsistent steps against a SUT");
    check_cmd->add_option("input", in_path, "suite document")->required();
    check_cmd->add_option("--sut", sut_path, "SUT document")->required();

    auto* repair_cmd = app.add_subcommand("repair", "Repair inconsistent steps in a suite");
    repair_cmd->add_option("input", in_path, "suite document")->required();
    repair_cmd->add_option("--sut", sut_path, "SUT document")->required();
    repair_cmd->add_option("--format", format_name, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    repair_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a suite against a SUT");
    simulate_cmd->add_option("input", in_path, "suite document")->required();
    simulate_cmd->add_option("--sut", sut_path, "SUT document")->required();
    simulate_cmd->add_option("--seed", seed, "simulation seed")->required();
    simulate_cmd->add_flag("--strict-detection", strict_detection,
                           "ignore steps after the first inconsistency when detecting defects");
    simulate_cmd->add_option("--format", format_name, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    simulate_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* gensut_cmd = app.add_subcommand("gen-sut", "Generate a random artificial SUT");
    auto* gensut_config = gensut_cmd->add_option("--config", config_path, "config document");
    gensut_cmd->add_option("--preset", preset, "preset name")
        ->check(CLI::IsMember(dcyt::preset_names()))
        ->excludes(gensut_config);
    auto* gensut_seed = gensut_cmd->add_option("--seed", seed, "overrides the config seed");
    gensut_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* derive_cmd =
        app.add_subcommand("derive-matrix", "Derive the extended CRUD matrix of a SUT");
    derive_cmd->add_option("input", in_path, "SUT document")->required();
    derive_cmd->add_option("--capture-ratio", capture_ratio,
                           "probability of capturing each influence fact")
        ->check(CLI::Range(0.0, 1.0));
    derive_cmd->add_option("--seed", seed, "capture sampling seed")->required();
    derive_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    auto* experiment_cmd = app.add_subcommand(
        "experiment", "Run the full evaluation pipeline over SUT instances");
    experiment_cmd->add_option("--config", config_path, "experiment config document")
        ->required();
    experiment_cmd->add_option("--seed", seed, "experiment seed")->required();
    experiment_cmd->add_option("--format", format_name, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    experiment_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidInput;
    }
    have_seed_override = gensut_seed->count() > 0;

    try {
        if (validate_cmd->parsed()) {
            dcyt::ModelDocument doc = dcyt::load_document(in_path);
            dcyt::ValidationReport report;
            if (doc.kind == dcyt::DocumentKind::Matrix)
                report = dcyt::validate_matrix(doc.matrix());
            else if (doc.kind == dcyt::DocumentKind::Sut)
                report = dcyt::validate_sut(doc.sut());
            if (!report.empty()) std::cerr << report.to_string();
            std::cout << dcyt::document_kind_name(doc.kind) << ": ok\n";
            return kExitOk;
        }

        if (import_cmd->parsed()) {
            std::string content;
            if (in_path == "-") {
                std::ostringstream buffer;
                buffer << std::cin.rdbuf();
                content = buffer.str();
            } else {
                std::ifstream in(in_path, std::ios::binary);
                if (!in) throw dcyt::ParseError(in_path + ": cannot open file");
                std::ostringstream buffer;
                buffer << in.rdbuf();
                content = buffer.str();
            }
            dcyt::CrudMatrix matrix =
                dcyt::import_csv_matrix(content, in_path == "-" ? "<stdin>" : in_path);
            emit(dcyt::render_json(dcyt::matrix_to_json(matrix)), out_path);
            return kExitOk;
        }

        if (suggest_cmd->parsed()) {
            dcyt::ModelDocument doc = dcyt::load_document(in_path);
            auto best = dcyt::suggest_best_read(doc.matrix(), entity_id);
            std::cout << (best ? *best : std::string("none")) << "\n";
            return kExitOk;
        }

        if (generate_cmd->parsed()) {
            dcyt::ModelDocument doc = dcyt::load_document(in_path);
            dcyt::TestSuite suite = dcyt::generate_suite(
                doc.matrix(), dcyt::criterion_from_name(criterion_name), seed);
            emit(dcyt::render_suite(suite, parse_format(format_name)), out_path);
            return kExitOk;
        }

        if (check_cmd->parsed()) {
            dcyt::ModelDocument suite_doc = dcyt::load_document(in_path);
            dcyt::ModelDocument sut_doc = dcyt::load_document(sut_path);
            dcyt::TransitionSystem ts = dcyt::build_transition_system(sut_doc.sut());
            std::size_t findings = 0;
            for (const auto& test_case : suite_doc.suite().cases) {
                for (const auto& finding : dcyt::check_case(test_case, ts)) {
                    ++findings;
                    std::cout << test_case.entity << " step " << finding.step_index << ": "
                              << finding.detail << "\n";
                }
            }
            if (findings > 0) {
                std::cout << findings << " inconsistent step(s)\n";
                return kExitInconsistent;
            }
            std::cout << "consistent\n";
            return kExitOk;
        }

        if (repair_cmd->parsed()) {
            dcyt::ModelDocument suite_doc = dcyt::load_document(in_path);
            dcyt::ModelDocument sut_doc = dcyt::load_document(sut_path);
            dcyt::TransitionSystem ts = dcyt::build_transition_system(sut_doc.sut());
            dcyt::CrudMatrix matrix = dcyt::derive_crud_matrix(sut_doc.sut(), 1.0, 0);
            dcyt::TestSuite repaired = suite_doc.suite();
            std::size_t insertions = 0, unrepairable = 0;
            for (auto& test_case : repaired.cases) {
                dcyt::RepairResult result = dcyt::repair_case(test_case, ts, &matrix);
                insertions += result.insertions.size();
                unrepairable += result.unrepairable.size();
                test_case = std::move(result.repaired);
            }
            std::cerr << "repaired " << insertions << " gap(s), " << unrepairable
                      << " unrepairable\n";
            emit(dcyt::render_suite(repaired, parse_format(format_name)), out_path);
            return kExitOk;
        }

        if (simulate_cmd->parsed()) {
            dcyt::ModelDocument suite_doc = dcyt::load_document(in_path);
            dcyt::ModelDocument sut_doc = dcyt::load_document(sut_path);
            dcyt::SimulateOptions options;
            options.strict_detection = strict_detection;
            dcyt::SimulationReport report =
                dcyt::simulate(suite_doc.suite(), sut_doc.sut(), seed, options);
            if (parse_format(format_name) == dcyt::RenderFormat::Json)
                emit(dcyt::render_json(dcyt::report_to_json(report)), out_path);
            else
                emit(dcyt::render_report_text(report), out_path);
            return kExitOk;
        }

        if (gensut_cmd->parsed()) {
            dcyt::SutGenConfig config;
            if (!config_path.empty())
                config = dcyt::load_document(config_path).config();
            else if (!preset.empty())
                config = dcyt::preset_config(preset);
            else
                throw dcyt::ParseError("gen-sut needs --config or --preset");
            if (have_seed_override) config.seed = seed;
            dcyt::ArtificialSut sut = dcyt::generate_sut(config);
            emit(dcyt::render_json(dcyt::sut_to_json(sut)), out_path);
            return kExitOk;
        }

        if (derive_cmd->parsed()) {
            dcyt::ModelDocument sut_doc = dcyt::load_document(in_path);
            dcyt::CrudMatrix matrix =
                dcyt::derive_crud_matrix(sut_doc.sut(), capture_ratio, seed);
            emit(dcyt::render_json(dcyt::matrix_to_json(matrix)), out_path);
            return kExitOk;
        }

        if (experiment_cmd->parsed()) {
            dcyt::ExperimentConfig config = dcyt::load_document(config_path).experiment();
            dcyt::ExperimentReport report = dcyt::run_experiment(config, seed);
            if (parse_format(format_name) == dcyt::RenderFormat::Json)
                emit(dcyt::render_json(dcyt::experiment_report_to_json(report)), out_path);
            else
                emit(dcyt::render_experiment_text(report), out_path);
            return kExitOk;
        }
    } catch (const dcyt::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnsatisfiable;
    } catch (const dcyt::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const dcyt::ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitOk;
}
