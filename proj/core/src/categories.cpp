// SPDX-License-Identifier: Apache-2.0
#include "slra/categories.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "slra/errors.hpp"

namespace slra {

namespace {

// Canonical facial-feature phrase per basic emotion; compound
// descriptions are composed from these by rule.
const std::map<std::string, std::string>& basic_features() {
    static const std::map<std::string, std::string> features = {
        {"Sadness", "downturned lips and drooping eyelids"},
        {"Surprise", "raised eyebrows and wide-open eyes"},
        {"Happiness", "a bright smile and raised cheeks"},
        {"Disgust", "a wrinkled nose and a raised upper lip"},
        {"Anger", "furrowed brows and a tightened jaw"},
        {"Fear", "widened eyes and tensed facial features"},
        {"Neutral", "relaxed facial muscles and a level gaze"},
    };
    return features;
}

// The three worked compound definitions ship verbatim; the rest are
// generated from their parents' feature phrases.
const std::map<std::string, std::string>& fixed_compound_descriptions() {
    static const std::map<std::string, std::string> fixed = {
        {"Fearfully Surprised",
         "A mix of fear and surprise, characterized by widened eyes, raised eyebrows, "
         "and a slightly open mouth."},
        {"Happily Surprised",
         "A blend of happiness and surprise, featuring a bright smile, raised eyebrows, "
         "and wide-open eyes."},
        {"Sadly Surprised",
         "A combination of sadness and surprise, with downturned lips, raised eyebrows, "
         "and a look of shock."},
    };
    return fixed;
}

const std::map<std::string, std::pair<std::string, std::string>>& parent_table() {
    static const std::map<std::string, std::pair<std::string, std::string>> parents = {
        {"Happily Surprised", {"Happiness", "Surprise"}},
        {"Sadly Disgusted", {"Sadness", "Disgust"}},
        {"Happily Disgusted", {"Happiness", "Disgust"}},
        {"Fearfully Angry", {"Fear", "Anger"}},
        {"Angrily Disgusted", {"Anger", "Disgust"}},
        {"Angrily Surprised", {"Anger", "Surprise"}},
        {"Sadly Surprised", {"Sadness", "Surprise"}},
        {"Fearfully Surprised", {"Fear", "Surprise"}},
        {"Disgustedly Surprised", {"Disgust", "Surprise"}},
        {"Sadly Fearful", {"Sadness", "Fear"}},
        {"Sadly Angry", {"Sadness", "Anger"}},
    };
    return parents;
}

std::string to_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

const std::vector<std::string>& basic_emotions() {
    static const std::vector<std::string> labels = {
        "Sadness", "Surprise", "Happiness", "Disgust", "Anger", "Fear", "Neutral",
    };
    return labels;
}

const std::vector<std::string>& compound_emotions() {
    static const std::vector<std::string> labels = {
        "Happily Surprised",   "Sadly Disgusted",  "Happily Disgusted",
        "Fearfully Angry",     "Angrily Disgusted", "Angrily Surprised",
        "Sadly Surprised",     "Fearfully Surprised", "Disgustedly Surprised",
        "Sadly Fearful",       "Sadly Angry",
    };
    return labels;
}

const std::vector<std::string>& challenge_emotions() {
    static const std::vector<std::string> labels = {
        "Fearfully Surprised", "Happily Surprised", "Sadly Surprised",
        "Disgustedly Surprised", "Angrily Surprised", "Sadly Fearful", "Sadly Angry",
    };
    return labels;
}

std::pair<std::string, std::string> compound_parents(const std::string& name) {
    auto it = parent_table().find(name);
    if (it == parent_table().end()) {
        throw DataError("unknown compound emotion '" + name + "'");
    }
    return it->second;
}

std::string category_description(const std::string& name) {
    if (auto it = fixed_compound_descriptions().find(name);
        it != fixed_compound_descriptions().end()) {
        return it->second;
    }
    if (auto it = basic_features().find(name); it != basic_features().end()) {
        return "Characterized by " + it->second + ".";
    }
    auto [a, b] = compound_parents(name);
    return "A combination of " + to_lower(a) + " and " + to_lower(b) + ", combining " +
           basic_features().at(a) + " with " + basic_features().at(b) + ".";
}

std::string normalize_category(std::string_view name) {
    std::string out;
    out.reserve(name.size());
    bool in_space = true; // swallows leading whitespace
    for (char c : name) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::string match_category(std::string_view mention, const std::vector<std::string>& active) {
    std::string normalized = normalize_category(mention);
    for (const auto& name : active) {
        if (normalize_category(name) == normalized) return name;
    }
    return {};
}

std::vector<std::string> resolve_category_set(const std::string& spec) {
    if (spec == "basic") return basic_emotions();
    if (spec == "compound") return compound_emotions();
    if (spec == "challenge") return challenge_emotions();

    std::vector<std::string> all;
    all.insert(all.end(), basic_emotions().begin(), basic_emotions().end());
    all.insert(all.end(), compound_emotions().begin(), compound_emotions().end());

    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (normalize_category(token).empty()) continue;
        std::string canonical = match_category(token, all);
        if (canonical.empty()) {
            throw DataError("unknown category '" + token + "' in category set");
        }
        out.push_back(canonical);
    }
    if (out.empty()) {
        throw DataError("empty category set '" + spec + "'");
    }
    return out;
}

} // namespace slra
