// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "slra/errors.hpp"

namespace slra {

enum class ParseErrorKind {
    MissingAnalysis,
    MissingConclusion,
    UnknownCategory,
    MalformedConclusion,
    NoMatch,
};

std::string parse_error_kind_name(ParseErrorKind kind);

/// A transcript that violates the structured-output grammar. Carries the
/// offending substring for diagnostics.
class ResponseParseError : public DataError {
public:
    ResponseParseError(ParseErrorKind kind, std::string offending);

    ParseErrorKind kind() const { return kind_; }
    const std::string& offending() const { return offending_; }

private:
    ParseErrorKind kind_;
    std::string offending_;
};

/// Parsed structured output: verbatim analysis text plus either a
/// category verdict or a no-person verdict.
struct ParsedResponse {
    std::string analysis;
    std::string category; // canonical name; empty for a no-person verdict
    bool no_person = false;
    bool lenient = false; // true when the lenient fallback produced the verdict
};

/// Strict template parser: "Analysis: <text> Conclusion: <sentence>"
/// where the sentence is either the no-person sentence or the person
/// sentence with a single-quoted category. The category is matched after
/// normalization against active_categories. Throws ResponseParseError
/// with kind MissingAnalysis / MissingConclusion / UnknownCategory /
/// MalformedConclusion.
ParsedResponse parse(std::string_view transcript,
                     const std::vector<std::string>& active_categories);

/// Strict parse first; on failure, scans the text after the last
/// "Conclusion" marker (whole text when absent) for category mentions,
/// the last mention winning. NoPerson when the no-person sentence
/// appears anywhere. Throws kind NoMatch when neither is found.
ParsedResponse parse_lenient(std::string_view transcript,
                             const std::vector<std::string>& active_categories);

} // namespace slra
