// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "slra/categories.hpp"
#include "slra/parser.hpp"
#include "slra/prompt.hpp"

using namespace slra;

namespace {

// The worked inference transcript for a happily-surprised face.
const std::string kWorkedTranscript =
    "Analysis: The person in the image has wide-open eyes, raised eyebrows, and a bright "
    "smile, \nindicating a mix of happiness and surprise.\nConclusion: The facial expression "
    "of the person in the image is 'Happily Surprised'.";

ParseErrorKind kind_of(const std::string& transcript,
                       const std::vector<std::string>& categories, bool lenient = false) {
    try {
        if (lenient) {
            parse_lenient(transcript, categories);
        } else {
            parse(transcript, categories);
        }
    } catch (const ResponseParseError& e) {
        return e.kind();
    }
    FAIL("expected a parse error");
    return ParseErrorKind::NoMatch;
}

} // namespace

TEST_CASE("strict parse of the worked transcript") {
    ParsedResponse r = parse(kWorkedTranscript, challenge_emotions());
    CHECK(r.category == "Happily Surprised");
    CHECK(!r.no_person);
    CHECK(!r.lenient);
    // Analysis text is the verbatim bytes between the two markers.
    CHECK(r.analysis ==
          " The person in the image has wide-open eyes, raised eyebrows, and a bright "
          "smile, \nindicating a mix of happiness and surprise.\n");
}

TEST_CASE("strict parse of the no-person form") {
    ParsedResponse r = parse(
        "Analysis: empty room, no faces. Conclusion: There is no one in the image.",
        challenge_emotions());
    CHECK(r.no_person);
    CHECK(r.category.empty());

    // Optional final period.
    CHECK(parse("Analysis: x Conclusion: There is no one in the image",
                challenge_emotions())
              .no_person);
}

TEST_CASE("strict parse normalizes case and internal whitespace in the category") {
    ParsedResponse r = parse(
        "Analysis: x Conclusion: The facial expression of the person in the image is "
        "'happily  surprised'.",
        challenge_emotions());
    CHECK(r.category == "Happily Surprised");
}

TEST_CASE("strict parse accepts leading whitespace and a trailing newline") {
    ParsedResponse r = parse(
        "  \n" + kWorkedTranscript + "\n", challenge_emotions());
    CHECK(r.category == "Happily Surprised");
}

TEST_CASE("strict parse error kinds are distinct and carry the offender") {
    CHECK(kind_of("No marker here at all.", challenge_emotions()) ==
          ParseErrorKind::MissingAnalysis);
    CHECK(kind_of("Analysis: runs forever without a verdict", challenge_emotions()) ==
          ParseErrorKind::MissingConclusion);
    CHECK(kind_of("Analysis: x Conclusion: The facial expression of the person in the image "
                  "is 'Joyful'.",
                  challenge_emotions()) == ParseErrorKind::UnknownCategory);
    CHECK(kind_of("Analysis: x Conclusion: It sure looks cheerful.", challenge_emotions()) ==
          ParseErrorKind::MalformedConclusion);
    CHECK(kind_of("Analysis: x Conclusion: The facial expression of the person in the image "
                  "is 'Happily Surprised'. Extra trailing words.",
                  challenge_emotions()) == ParseErrorKind::MalformedConclusion);

    try {
        parse("Analysis: x Conclusion: The facial expression of the person in the image is "
              "'Joyful'.",
              challenge_emotions());
        FAIL("expected UnknownCategory");
    } catch (const ResponseParseError& e) {
        CHECK(e.offending() == "Joyful");
        CHECK(std::string(e.what()).find("Joyful") != std::string::npos);
    }
}

TEST_CASE("parse rejects an empty category set") {
    CHECK_THROWS_AS(parse(kWorkedTranscript, {}), ContractError);
}

TEST_CASE("lenient parse recovers a bare category mention") {
    ParsedResponse r = parse_lenient("I think the answer is Sadly Angry.",
                                     challenge_emotions());
    CHECK(r.category == "Sadly Angry");
    CHECK(r.lenient);
}

TEST_CASE("lenient parse: the last mention wins") {
    ParsedResponse r = parse_lenient(
        "It could be Happily Surprised, but on reflection it is Sadly Surprised",
        challenge_emotions());
    CHECK(r.category == "Sadly Surprised");
    CHECK(r.lenient);
}

TEST_CASE("lenient parse scans only after the last conclusion marker") {
    ParsedResponse r = parse_lenient(
        "Analysis: mentions Sadly Angry early. Conclusion (draft): maybe. Conclusion -> "
        "Fearfully Surprised",
        challenge_emotions());
    CHECK(r.category == "Fearfully Surprised");
}

TEST_CASE("lenient parse finds the no-person sentence anywhere") {
    ParsedResponse r = parse_lenient("after a careful look, there is no one in the image",
                                     challenge_emotions());
    CHECK(r.no_person);
    CHECK(r.lenient);
}

TEST_CASE("lenient parse with nothing to find is NoMatch") {
    CHECK(kind_of("No conclusion available.", challenge_emotions(), /*lenient=*/true) ==
          ParseErrorKind::NoMatch);
}

TEST_CASE("lenient does not match category words embedded in longer words") {
    // "Sadly Angryish" should not count as a mention of "Sadly Angry".
    CHECK(kind_of("Verdict: Sadly Angryish", challenge_emotions(), /*lenient=*/true) ==
          ParseErrorKind::NoMatch);
}

TEST_CASE("property: template round-trip over every registered category") {
    for (const auto* set : {&challenge_emotions(), &compound_emotions(), &basic_emotions()}) {
        for (const auto& category : *set) {
            std::string transcript = fill_person_template("Synthetic check.", category);
            ParsedResponse strict = parse(transcript, *set);
            CHECK(strict.category == category);
            CHECK(!strict.lenient);
        }
        ParsedResponse none = parse(fill_no_person_template("Synthetic check."), *set);
        CHECK(none.no_person);
    }
}

TEST_CASE("property: strict accepts implies lenient accepts with the same verdict") {
    std::vector<std::string> transcripts = {
        kWorkedTranscript,
        fill_person_template("a", "Sadly Fearful"),
        fill_no_person_template("b"),
        "Analysis: x Conclusion: There is no one in the image",
    };
    for (const auto& t : transcripts) {
        ParsedResponse strict = parse(t, challenge_emotions());
        ParsedResponse lenient = parse_lenient(t, challenge_emotions());
        CHECK(strict.category == lenient.category);
        CHECK(strict.no_person == lenient.no_person);
        CHECK(!lenient.lenient); // strict tier answered
        CHECK(strict.analysis == lenient.analysis);
    }
}

TEST_CASE("parsing preserves the transcript bytes") {
    std::string transcript = kWorkedTranscript;
    std::string copy = transcript;
    parse(transcript, challenge_emotions());
    parse_lenient(transcript, challenge_emotions());
    CHECK(transcript == copy);
}
