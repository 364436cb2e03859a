#pragma once

#include <string>
#include <vector>

#include "eco/advisor.hpp"
#include "eco/roi_store.hpp"
#include "eco/source_unit.hpp"
#include "eco/templates.hpp"

namespace eco {

struct PromptBundle {
    std::string kind;  // symbolic | retrieval | combined | instruction_only | cot
    std::string text;
};

/// Tips-plus-source prompt; diagnoses are enumerated 1., 2., ... in order.
PromptBundle compose_symbolic(const std::vector<BottleneckDiagnosis>& diagnoses,
                              const SourceUnit& src, const TemplateSet& ts);

/// Example-pair prompt with 1 or 2 triplets. `with_instructions` false drops
/// the bracketed instruction slots (plain ICL/RAG shape).
PromptBundle compose_retrieval(const std::vector<RoiTriplet>& triplets,
                               const SourceUnit& src, const TemplateSet& ts,
                               bool with_instructions = true);
// throws TooManyExamples for >2 triplets, Error for 0

/// Diagnoses section followed by example section; the source appears exactly
/// once, at the end. Falls back to the single-section prompt when one side
/// is empty.
PromptBundle compose_combined(const std::vector<BottleneckDiagnosis>& diagnoses,
                              const std::vector<RoiTriplet>& triplets,
                              const SourceUnit& src, const TemplateSet& ts);

/// kind: "instruction_only" or "cot".
PromptBundle compose_baseline(const std::string& kind, const SourceUnit& src,
                              const TemplateSet& ts);

}  // namespace eco
