// SPDX-License-Identifier: Apache-2.0
#include "slra/eval.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

#include "slra/errors.hpp"
#include "slra/parser.hpp"

namespace slra {

using nlohmann::json;

namespace {

std::size_t label_index(const std::vector<std::string>& labels, const std::string& name,
                        const char* role) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == name) return i;
    }
    throw DataError(std::string(role) + " label '" + name + "' is outside the label set");
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

} // namespace

EvalReport evaluate(const std::vector<EvalPair>& pairs,
                    const std::vector<std::string>& labels) {
    if (pairs.empty()) {
        throw ContractError("evaluate: no pairs to evaluate");
    }
    EvalReport report;
    report.labels = labels;
    report.per_class.assign(labels.size(), {});
    report.confusion.assign(labels.size(), std::vector<std::size_t>(labels.size() + 2, 0));

    for (const auto& pair : pairs) {
        std::size_t gold = label_index(labels, pair.gold, "gold");
        std::size_t column;
        bool correct = false;
        switch (pair.predicted.kind) {
        case PredictionKind::Category:
            column = label_index(labels, pair.predicted.category, "predicted");
            correct = column == gold;
            break;
        case PredictionKind::NoPerson:
            column = EvalReport::no_person_column(labels.size());
            break;
        case PredictionKind::ParseFailure:
            column = EvalReport::parse_failure_column(labels.size());
            break;
        default:
            throw ContractError("evaluate: bad prediction kind");
        }
        report.confusion[gold][column] += 1;
        report.per_class[gold].total += 1;
        report.overall_total += 1;
        if (correct) {
            report.per_class[gold].correct += 1;
            report.overall_correct += 1;
        }
        if (pair.lenient) report.lenient_count += 1;
    }
    return report;
}

std::string render_table(const EvalReport& report, TableFormat format) {
    std::ostringstream out;
    if (format == TableFormat::Csv) {
        out << "emotion,correct,total,accuracy_percent\n";
        for (std::size_t i = 0; i < report.labels.size(); ++i) {
            out << csv_field(report.labels[i]) << "," << report.per_class[i].correct << ","
                << report.per_class[i].total << "," << percent(report.per_class[i].accuracy())
                << "\n";
        }
        out << "Overall," << report.overall_correct << "," << report.overall_total << ","
            << percent(report.overall_accuracy()) << "\n";
        return out.str();
    }

    std::size_t name_width = std::string("Overall").size();
    for (const auto& label : report.labels) name_width = std::max(name_width, label.size());

    char line[160];
    std::snprintf(line, sizeof(line), "%-*s  %12s  %8s  %8s\n", static_cast<int>(name_width),
                  "Emotion", "Accuracy (%)", "Correct", "Total");
    out << line;
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        std::snprintf(line, sizeof(line), "%-*s  %12s  %8zu  %8zu\n",
                      static_cast<int>(name_width), report.labels[i].c_str(),
                      percent(report.per_class[i].accuracy()).c_str(),
                      report.per_class[i].correct, report.per_class[i].total);
        out << line;
    }
    std::snprintf(line, sizeof(line), "%-*s  %12s  %8zu  %8zu\n", static_cast<int>(name_width),
                  "Overall", percent(report.overall_accuracy()).c_str(),
                  report.overall_correct, report.overall_total);
    out << line;
    if (report.lenient_count > 0) {
        out << "(" << report.lenient_count << " verdicts recovered by the lenient parser)\n";
    }
    return out.str();
}

EvalReport parse_report_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != "emotion,correct,total,accuracy_percent") {
        throw ParseError("report csv: missing or unexpected header");
    }
    EvalReport report;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        // Fields: name (possibly quoted), correct, total, percent.
        std::string name;
        std::size_t pos = 0;
        if (!line.empty() && line[0] == '"') {
            pos = 1;
            while (pos < line.size()) {
                if (line[pos] == '"') {
                    if (pos + 1 < line.size() && line[pos + 1] == '"') {
                        name.push_back('"');
                        pos += 2;
                        continue;
                    }
                    ++pos;
                    break;
                }
                name.push_back(line[pos++]);
            }
            if (pos >= line.size() || line[pos] != ',') {
                throw ParseError("report csv line " + std::to_string(line_no) +
                                 ": malformed quoted field");
            }
            ++pos;
        } else {
            std::size_t comma = line.find(',');
            if (comma == std::string::npos) {
                throw ParseError("report csv line " + std::to_string(line_no) +
                                 ": expected 4 fields");
            }
            name = line.substr(0, comma);
            pos = comma + 1;
        }
        std::size_t correct = 0, total = 0;
        if (std::sscanf(line.c_str() + pos, "%zu,%zu", &correct, &total) != 2) {
            throw ParseError("report csv line " + std::to_string(line_no) +
                             ": expected numeric counts");
        }
        if (name == "Overall") {
            report.overall_correct = correct;
            report.overall_total = total;
        } else {
            report.labels.push_back(name);
            report.per_class.push_back({correct, total});
        }
    }
    return report;
}

std::string report_to_json(const EvalReport& report) {
    json per_class = json::array();
    for (std::size_t i = 0; i < report.labels.size(); ++i) {
        per_class.push_back({{"correct", report.per_class[i].correct},
                             {"label", report.labels[i]},
                             {"total", report.per_class[i].total}});
    }
    json doc{{"confusion", report.confusion},
             {"confusion_columns", "labels then NoPerson then ParseFailure"},
             {"lenient_count", report.lenient_count},
             {"overall", {{"correct", report.overall_correct}, {"total", report.overall_total}}},
             {"per_class", per_class}};
    return doc.dump(2) + "\n";
}

EvalReport report_from_json(const std::string& text) {
    json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw ParseError("report json: malformed document");
    }
    try {
        EvalReport report;
        for (const auto& entry : parsed.at("per_class")) {
            report.labels.push_back(entry.at("label").get<std::string>());
            report.per_class.push_back({entry.at("correct").get<std::size_t>(),
                                        entry.at("total").get<std::size_t>()});
        }
        report.overall_correct = parsed.at("overall").at("correct").get<std::size_t>();
        report.overall_total = parsed.at("overall").at("total").get<std::size_t>();
        report.confusion =
            parsed.at("confusion").get<std::vector<std::vector<std::size_t>>>();
        report.lenient_count = parsed.at("lenient_count").get<std::size_t>();
        return report;
    } catch (const json::exception& e) {
        throw ParseError(std::string("report json: ") + e.what());
    }
}

EvalReport end_to_end_eval(const ClassifierNet& net, const Manifest& manifest,
                           const EndToEndOptions& options) {
    if (manifest.header.dimension != net.d_in()) {
        throw CompatibilityError("manifest dimension " +
                                 std::to_string(manifest.header.dimension) +
                                 " does not match checkpoint input width " +
                                 std::to_string(net.d_in()));
    }
    if (manifest.header.labels != net.active_labels) {
        throw CompatibilityError(
            "manifest label set does not match the checkpoint label set");
    }

    std::vector<EvalPair> pairs;
    for (const auto& record : manifest.records) {
        if (record.split != options.split) continue;
        std::string predicted = predict(net, record.features);
        EvalPair pair;
        pair.id = record.id;
        pair.gold = record.label;
        if (options.prompt_spec != nullptr) {
            // Round-trip through the structured-output surface the
            // deployed model would use.
            std::string transcript = fill_person_template(
                "Predicted from manifest record '" + record.id + "'.", predicted);
            try {
                ParsedResponse parsed = parse_lenient(transcript, net.active_labels);
                pair.lenient = parsed.lenient;
                pair.predicted = parsed.no_person ? Prediction::no_person()
                                                  : Prediction::of_category(parsed.category);
            } catch (const ResponseParseError&) {
                pair.predicted = Prediction::parse_failure();
            }
        } else {
            pair.predicted = Prediction::of_category(std::move(predicted));
        }
        pairs.push_back(std::move(pair));
    }
    if (pairs.empty()) {
        throw DataError("manifest has no records in split '" + split_name(options.split) + "'");
    }
    return evaluate(pairs, manifest.header.labels);
}

} // namespace slra
