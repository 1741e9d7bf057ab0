// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace slra {

struct CategoryDefinition {
    std::string name;
    std::string description;
};

struct OutputTemplates {
    std::string no_person;
    std::string person;
};

/// The four context-prompt sections, in emission order: task objective,
/// category definitions, analysis guidelines, output format.
struct PromptSpec {
    std::string task_objective;
    std::vector<CategoryDefinition> categories;
    std::string guidelines;
    OutputTemplates templates;
};

/// Registry-backed spec for a category set, with the default objective,
/// guidelines, and output templates.
PromptSpec make_prompt_spec(const std::vector<std::string>& categories);

/// Default section texts. The person template carries the literal
/// "[Selected Category]" slot; the no-person template the literal
/// "There is no one in the image" sentence.
const std::string& default_person_template();
const std::string& default_no_person_template();
std::string default_task_objective(std::size_t category_count);
const std::string& default_guidelines();

/// Deterministic prompt text with the four sections in order and each
/// category name exactly once in the definitions section. ContractError
/// on duplicate names or fewer than two categories.
std::string build_prompt(const PromptSpec& spec);

/// A filled person-template transcript: the analysis slot replaced by
/// analysis, the category slot by category.
std::string fill_person_template(const std::string& analysis, const std::string& category);
std::string fill_no_person_template(const std::string& analysis);

/// A context prompt paired with the image it should accompany.
struct InferenceRequest {
    std::string image_ref;
    std::string prompt;

    bool operator==(const InferenceRequest&) const = default;
    std::string to_json_line() const;
};

/// ContractError on an empty prompt.
InferenceRequest attach(const std::string& prompt, const std::string& image_ref);

PromptSpec load_prompt_spec(const std::string& path);
void save_prompt_spec(const PromptSpec& spec, const std::string& path);

} // namespace slra
