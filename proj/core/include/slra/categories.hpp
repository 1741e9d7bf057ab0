// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace slra {

/// The seven basic emotions, in reporting order.
const std::vector<std::string>& basic_emotions();

/// The eleven compound emotions, in reporting order.
const std::vector<std::string>& compound_emotions();

/// The seven compound classes used in the in-the-wild challenge setting
/// (a subset of compound_emotions()).
const std::vector<std::string>& challenge_emotions();

/// The two basic parents of a compound emotion. DataError if unknown.
std::pair<std::string, std::string> compound_parents(const std::string& name);

/// Facial-feature description for any registered category.
std::string category_description(const std::string& name);

/// trim + collapse internal whitespace + lowercase. The prompt builder
/// and the response parser share this, so every name a prompt emits is
/// recoverable by the parser.
std::string normalize_category(std::string_view name);

/// Canonical name for a (possibly sloppy) mention, matched after
/// normalization against the given set. Empty when no match.
std::string match_category(std::string_view mention, const std::vector<std::string>& active);

/// "basic" | "compound" | "challenge" | comma-separated names.
std::vector<std::string> resolve_category_set(const std::string& spec);

} // namespace slra
