// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "slra/dataset.hpp"
#include "slra/model.hpp"
#include "slra/prompt.hpp"

namespace slra {

enum class PredictionKind { Category, NoPerson, ParseFailure };

struct Prediction {
    PredictionKind kind = PredictionKind::ParseFailure;
    std::string category; // set only for kind == Category

    static Prediction of_category(std::string name) {
        return {PredictionKind::Category, std::move(name)};
    }
    static Prediction no_person() { return {PredictionKind::NoPerson, {}}; }
    static Prediction parse_failure() { return {PredictionKind::ParseFailure, {}}; }
};

struct EvalPair {
    std::string id;
    std::string gold;
    Prediction predicted;
    bool lenient = false;
};

struct ClassStats {
    std::size_t correct = 0;
    std::size_t total = 0;

    double accuracy() const {
        return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
    }
};

/// Accuracy table over a label set. The confusion matrix has one row per
/// gold label and one column per label plus two extra columns for
/// NoPerson and ParseFailure verdicts (counted as incorrect, never
/// dropped). Overall accuracy is count-weighted (micro).
struct EvalReport {
    std::vector<std::string> labels;
    std::vector<ClassStats> per_class;
    std::size_t overall_correct = 0;
    std::size_t overall_total = 0;
    std::vector<std::vector<std::size_t>> confusion;
    std::size_t lenient_count = 0;

    double overall_accuracy() const {
        return overall_total == 0
                   ? 0.0
                   : static_cast<double>(overall_correct) / static_cast<double>(overall_total);
    }

    static std::size_t no_person_column(std::size_t label_count) { return label_count; }
    static std::size_t parse_failure_column(std::size_t label_count) { return label_count + 1; }
};

/// ContractError on empty pairs; DataError when a gold or predicted
/// category falls outside the label set.
EvalReport evaluate(const std::vector<EvalPair>& pairs,
                    const std::vector<std::string>& labels);

enum class TableFormat { Text, Csv };

/// One row per label plus an Overall row; accuracy printed as a percent
/// with two decimals. Csv carries counts and round-trips through
/// parse_report_csv.
std::string render_table(const EvalReport& report, TableFormat format);

/// Rebuilds per-class and overall counts from render_table csv output.
EvalReport parse_report_csv(const std::string& csv);

/// Full-fidelity report serialization (labels, counts, confusion,
/// lenient count).
std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(const std::string& text);

struct EndToEndOptions {
    Split split = Split::Test;
    /// When set, every prediction is rendered through the person
    /// template and recovered by the response parser, exercising the
    /// full structured-output path.
    const PromptSpec* prompt_spec = nullptr;
};

/// Predicts over one split of the manifest and tallies the report.
/// CompatibilityError when the checkpoint and manifest disagree on
/// dimension or label set.
EvalReport end_to_end_eval(const ClassifierNet& net, const Manifest& manifest,
                           const EndToEndOptions& options = {});

} // namespace slra
