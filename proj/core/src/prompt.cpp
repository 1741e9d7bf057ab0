// SPDX-License-Identifier: Apache-2.0
#include "slra/prompt.hpp"

#include <set>
#include <sstream>

#include "json.hpp"

#include "slra/categories.hpp"
#include "slra/errors.hpp"
#include "slra/io.hpp"

namespace slra {

using nlohmann::json;

namespace {

const std::string kAnalysisPersonSlot =
    "[Provide a detailed analysis of the facial expression, describing the features that "
    "led to your conclusion.]";
const std::string kAnalysisNoPersonSlot =
    "[Provide a detailed analysis of the image, noting the absence of any person.]";
const std::string kCategorySlot = "[Selected Category]";

std::string replace_once(std::string text, const std::string& slot, const std::string& value) {
    auto pos = text.find(slot);
    if (pos == std::string::npos) {
        throw ContractError("template is missing slot " + slot);
    }
    return text.replace(pos, slot.size(), value);
}

std::string number_word(std::size_t n) {
    static const char* words[] = {"zero", "one", "two",   "three", "four",  "five", "six",
                                  "seven", "eight", "nine", "ten",  "eleven", "twelve"};
    if (n < sizeof(words) / sizeof(words[0])) return words[n];
    return std::to_string(n);
}

} // namespace

const std::string& default_person_template() {
    static const std::string text =
        "Analysis: " + kAnalysisPersonSlot +
        " Conclusion: The facial expression of the person in the image is '" + kCategorySlot +
        "'.";
    return text;
}

const std::string& default_no_person_template() {
    static const std::string text =
        "Analysis: " + kAnalysisNoPersonSlot + " Conclusion: There is no one in the image.";
    return text;
}

std::string default_task_objective(std::size_t category_count) {
    return "Your task is to analyze the facial expression of the person(s) in the provided "
           "image and classify it into one of the " +
           number_word(category_count) + " predefined categories.";
}

const std::string& default_guidelines() {
    static const std::string text =
        "Carefully examine the image to identify visible facial features like the eyes, "
        "eyebrows, mouth, and overall facial tension. Weigh how the observed features "
        "combine before selecting a category, and describe the evidence for your choice.";
    return text;
}

PromptSpec make_prompt_spec(const std::vector<std::string>& categories) {
    PromptSpec spec;
    spec.task_objective = default_task_objective(categories.size());
    for (const auto& name : categories) {
        spec.categories.push_back({name, category_description(name)});
    }
    spec.guidelines = default_guidelines();
    spec.templates.no_person = default_no_person_template();
    spec.templates.person = default_person_template();
    return spec;
}

std::string build_prompt(const PromptSpec& spec) {
    if (spec.categories.size() < 2) {
        throw ContractError("build_prompt: need at least two categories");
    }
    std::set<std::string> seen;
    for (const auto& c : spec.categories) {
        if (c.name.empty() || c.description.empty()) {
            throw ContractError("build_prompt: category name and description must be non-empty");
        }
        if (!seen.insert(c.name).second) {
            throw ContractError("build_prompt: duplicate category name '" + c.name + "'");
        }
    }
    if (spec.task_objective.empty() || spec.guidelines.empty() ||
        spec.templates.no_person.empty() || spec.templates.person.empty()) {
        throw ContractError("build_prompt: all four sections must be non-empty");
    }

    std::ostringstream out;
    out << "Task Objective:\n" << spec.task_objective << "\n\n";
    out << "Category Definitions:\n";
    for (const auto& c : spec.categories) {
        out << "- " << c.name << ": " << c.description << "\n";
    }
    out << "\nAnalysis Guidelines:\n" << spec.guidelines << "\n\n";
    out << "Output Format:\n";
    out << "- If no person is present: \"" << spec.templates.no_person << "\"\n";
    out << "- If a person is present: \"" << spec.templates.person << "\"\n";
    return out.str();
}

std::string fill_person_template(const std::string& analysis, const std::string& category) {
    std::string text = replace_once(default_person_template(), kAnalysisPersonSlot, analysis);
    return replace_once(std::move(text), kCategorySlot, category);
}

std::string fill_no_person_template(const std::string& analysis) {
    return replace_once(default_no_person_template(), kAnalysisNoPersonSlot, analysis);
}

std::string InferenceRequest::to_json_line() const {
    return json{{"image", image_ref}, {"prompt", prompt}}.dump();
}

InferenceRequest attach(const std::string& prompt, const std::string& image_ref) {
    if (prompt.empty()) {
        throw ContractError("attach: prompt must be non-empty");
    }
    return {image_ref, prompt};
}

PromptSpec load_prompt_spec(const std::string& path) {
    json parsed = json::parse(read_file(path), nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object()) {
        throw ParseError(path + ": malformed prompt spec");
    }
    try {
        PromptSpec spec;
        spec.task_objective = parsed.at("task_objective").get<std::string>();
        for (const auto& c : parsed.at("categories")) {
            spec.categories.push_back(
                {c.at("name").get<std::string>(), c.at("description").get<std::string>()});
        }
        spec.guidelines = parsed.at("guidelines").get<std::string>();
        spec.templates.no_person = parsed.at("output_format").at("no_person").get<std::string>();
        spec.templates.person = parsed.at("output_format").at("person").get<std::string>();
        return spec;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void save_prompt_spec(const PromptSpec& spec, const std::string& path) {
    json categories = json::array();
    for (const auto& c : spec.categories) {
        categories.push_back({{"description", c.description}, {"name", c.name}});
    }
    json doc{{"task_objective", spec.task_objective},
             {"categories", categories},
             {"guidelines", spec.guidelines},
             {"output_format",
              {{"no_person", spec.templates.no_person}, {"person", spec.templates.person}}}};
    atomic_write_file(path, doc.dump(2) + "\n");
}

} // namespace slra
