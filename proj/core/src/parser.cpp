// SPDX-License-Identifier: Apache-2.0
#include "slra/parser.hpp"

#include <cctype>

#include "slra/categories.hpp"

namespace slra {

namespace {

const std::string kAnalysisMarker = "Analysis:";
const std::string kConclusionMarker = "Conclusion:";
const std::string kNoPersonSentence = "There is no one in the image";
const std::string kPersonSentencePrefix =
    "The facial expression of the person in the image is";

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view skip_ws(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size() && is_space(s[i])) ++i;
    return s.substr(i);
}

std::string snippet(std::string_view s, std::size_t max_len = 60) {
    std::string out(s.substr(0, max_len));
    if (s.size() > max_len) out += "...";
    return out;
}

// Normalized copy (lowercase, whitespace runs collapsed to one space)
// with a map from each normalized char back to its source offset.
struct NormalizedText {
    std::string text;
    std::vector<std::size_t> source_pos;
};

NormalizedText normalize_with_positions(std::string_view s) {
    NormalizedText out;
    bool in_space = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (is_space(s[i])) {
            in_space = true;
            continue;
        }
        if (in_space && !out.text.empty()) {
            out.text.push_back(' ');
            out.source_pos.push_back(i);
        }
        in_space = false;
        out.text.push_back(
            static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
        out.source_pos.push_back(i);
    }
    return out;
}

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

std::size_t find_last_ci(std::string_view haystack, std::string_view lowered_needle) {
    NormalizedText norm = normalize_with_positions(haystack);
    std::size_t pos = norm.text.rfind(lowered_needle);
    if (pos == std::string::npos) return std::string::npos;
    return norm.source_pos[pos];
}

} // namespace

std::string parse_error_kind_name(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::MissingAnalysis: return "MissingAnalysis";
    case ParseErrorKind::MissingConclusion: return "MissingConclusion";
    case ParseErrorKind::UnknownCategory: return "UnknownCategory";
    case ParseErrorKind::MalformedConclusion: return "MalformedConclusion";
    case ParseErrorKind::NoMatch: return "NoMatch";
    }
    return "ParseError";
}

ResponseParseError::ResponseParseError(ParseErrorKind kind, std::string offending)
    : DataError(parse_error_kind_name(kind) + ": \"" + snippet(offending) + "\""),
      kind_(kind),
      offending_(std::move(offending)) {}

ParsedResponse parse(std::string_view transcript,
                     const std::vector<std::string>& active_categories) {
    if (active_categories.empty()) {
        throw ContractError("parse: active category set must be non-empty");
    }

    std::string_view rest = skip_ws(transcript);
    if (!rest.starts_with(kAnalysisMarker)) {
        throw ResponseParseError(ParseErrorKind::MissingAnalysis, std::string(rest));
    }
    rest.remove_prefix(kAnalysisMarker.size());

    std::size_t conclusion_at = rest.find(kConclusionMarker);
    if (conclusion_at == std::string_view::npos) {
        throw ResponseParseError(ParseErrorKind::MissingConclusion, std::string(rest));
    }

    ParsedResponse result;
    result.analysis = std::string(rest.substr(0, conclusion_at));

    std::string_view conclusion =
        skip_ws(rest.substr(conclusion_at + kConclusionMarker.size()));

    if (conclusion.starts_with(kNoPersonSentence)) {
        std::string_view tail = conclusion.substr(kNoPersonSentence.size());
        if (tail.starts_with('.')) tail.remove_prefix(1);
        if (!skip_ws(tail).empty()) {
            throw ResponseParseError(ParseErrorKind::MalformedConclusion,
                                     std::string(conclusion));
        }
        result.no_person = true;
        return result;
    }

    if (!conclusion.starts_with(kPersonSentencePrefix)) {
        throw ResponseParseError(ParseErrorKind::MalformedConclusion, std::string(conclusion));
    }
    std::string_view after = skip_ws(conclusion.substr(kPersonSentencePrefix.size()));
    if (!after.starts_with('\'')) {
        throw ResponseParseError(ParseErrorKind::MalformedConclusion, std::string(conclusion));
    }
    after.remove_prefix(1);
    std::size_t close = after.find('\'');
    if (close == std::string_view::npos) {
        throw ResponseParseError(ParseErrorKind::MalformedConclusion, std::string(conclusion));
    }
    std::string_view mention = after.substr(0, close);
    std::string_view tail = after.substr(close + 1);
    if (tail.starts_with('.')) tail.remove_prefix(1);
    if (!skip_ws(tail).empty()) {
        throw ResponseParseError(ParseErrorKind::MalformedConclusion, std::string(conclusion));
    }

    std::string canonical = match_category(mention, active_categories);
    if (canonical.empty()) {
        throw ResponseParseError(ParseErrorKind::UnknownCategory, std::string(mention));
    }
    result.category = std::move(canonical);
    return result;
}

ParsedResponse parse_lenient(std::string_view transcript,
                             const std::vector<std::string>& active_categories) {
    try {
        return parse(transcript, active_categories);
    } catch (const ResponseParseError&) {
        // fall through to the scanning tier
    }

    // Scan region: everything after the last "Conclusion" mention, or the
    // whole transcript when there is none.
    std::string_view region = transcript;
    std::size_t marker = find_last_ci(transcript, "conclusion");
    if (marker != std::string::npos) {
        region = transcript.substr(marker + std::string_view("conclusion").size());
    }

    NormalizedText norm = normalize_with_positions(region);
    std::size_t best_pos = std::string::npos;
    std::size_t best_len = 0;
    std::string best_name;
    for (const auto& name : active_categories) {
        std::string needle = normalize_category(name);
        if (needle.empty()) continue;
        std::size_t from = 0;
        while (true) {
            std::size_t at = norm.text.find(needle, from);
            if (at == std::string::npos) break;
            bool left_ok = at == 0 || !is_word_char(norm.text[at - 1]);
            std::size_t end = at + needle.size();
            bool right_ok = end == norm.text.size() || !is_word_char(norm.text[end]);
            if (left_ok && right_ok) {
                // Last mention wins; on an exact position tie the longer
                // (more specific) name does.
                if (best_pos == std::string::npos || at > best_pos ||
                    (at == best_pos && needle.size() > best_len)) {
                    best_pos = at;
                    best_len = needle.size();
                    best_name = name;
                }
            }
            from = at + 1;
        }
    }

    ParsedResponse result;
    result.lenient = true;
    if (marker != std::string::npos) {
        result.analysis = std::string(transcript.substr(0, marker));
    }

    if (!best_name.empty()) {
        result.category = std::move(best_name);
        return result;
    }

    NormalizedText whole = normalize_with_positions(transcript);
    if (whole.text.find(normalize_category(kNoPersonSentence)) != std::string::npos) {
        result.no_person = true;
        return result;
    }

    throw ResponseParseError(ParseErrorKind::NoMatch, std::string(transcript));
}

} // namespace slra
