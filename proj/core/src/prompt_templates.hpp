#pragma once

#include <string_view>

namespace verifact::templates {

// Few-shot extraction prompts. The window and focus sentence are spliced
// between the pieces: head + window + middle + sentence + tail.
extern const std::string_view kNonQaHead;
extern const std::string_view kQaHead;
extern const std::string_view kFocusLine;
extern const std::string_view kFactsTail;

// Verification prompts.
extern const std::string_view kVerifyIntro;
extern const std::string_view kTernaryDefinitions;
extern const std::string_view kBinaryDefinitions;
extern const std::string_view kTernaryExamples;
extern const std::string_view kBinaryExamples;
extern const std::string_view kTaskHeader;
extern const std::string_view kDecisionSlot;
extern const std::string_view kTernaryShortTask;
extern const std::string_view kBinaryShortTask;

}  // namespace verifact::templates
