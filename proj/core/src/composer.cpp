#include "eco/composer.hpp"

#include "eco/errors.hpp"

namespace eco {

static std::string strip_trailing_newlines(std::string s) {
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

PromptBundle compose_symbolic(const std::vector<BottleneckDiagnosis>& diagnoses,
                              const SourceUnit& src, const TemplateSet& ts) {
    std::string explanations;
    int n = 0;
    for (const auto& d : diagnoses)
        explanations += std::to_string(++n) + ". " + d.text + "\n";
    PromptBundle b;
    b.kind = "symbolic";
    b.text = substitute(ts.get("symbolic"),
                        {{"explanations", explanations},
                         {"src_code", strip_trailing_newlines(src.text)}});
    return b;
}

static std::string render_example(const RoiTriplet& t, int index,
                                  const TemplateSet& ts,
                                  bool with_instructions) {
    std::string tmpl = ts.get("retrieval_example");
    if (!with_instructions) {
        size_t pos = tmpl.rfind("[{instruction}]");
        if (pos != std::string::npos) tmpl.erase(pos);
    }
    std::string block =
        substitute(tmpl,
                   {{"index", std::to_string(index)},
                    {"slow_code", strip_trailing_newlines(t.pair.slow.text)},
                    {"fast_code", strip_trailing_newlines(t.pair.fast.text)},
                    {"instruction",
                     strip_trailing_newlines(t.instruction.raw_text)}});
    return strip_trailing_newlines(block);
}

PromptBundle compose_retrieval(const std::vector<RoiTriplet>& triplets,
                               const SourceUnit& src, const TemplateSet& ts,
                               bool with_instructions) {
    if (triplets.empty()) throw Error("retrieval prompt needs at least 1 example");
    if (triplets.size() > 2) throw TooManyExamples(triplets.size());
    // The template separates sections with one blank line, except after a
    // bracketed instruction where it uses two.
    std::string gap = with_instructions ? "\n\n\n" : "\n\n";
    std::string text = strip_trailing_newlines(ts.get("retrieval_header"));
    int index = 0;
    for (const auto& t : triplets) {
        text += index == 0 ? "\n\n" : gap;
        text += render_example(t, ++index, ts, with_instructions);
    }
    text += gap + substitute(ts.get("retrieval_footer"),
                             {{"src_code", strip_trailing_newlines(src.text)}});
    PromptBundle b;
    b.kind = "retrieval";
    b.text = std::move(text);
    return b;
}

PromptBundle compose_combined(const std::vector<BottleneckDiagnosis>& diagnoses,
                              const std::vector<RoiTriplet>& triplets,
                              const SourceUnit& src, const TemplateSet& ts) {
    if (diagnoses.empty()) {
        PromptBundle b = compose_retrieval(triplets, src, ts);
        b.kind = "combined";
        return b;
    }
    if (triplets.empty()) {
        PromptBundle b = compose_symbolic(diagnoses, src, ts);
        b.kind = "combined";
        return b;
    }
    std::string symbolic = compose_symbolic(diagnoses, src, ts).text;
    size_t cut = symbolic.find("### Original code:");
    if (cut == std::string::npos)
        throw Error("symbolic template lacks the source section marker");
    std::string head = symbolic.substr(0, cut);

    std::string retrieval = compose_retrieval(triplets, src, ts).text;
    const std::string lead =
        "Optimize the program and provide a more efficient version. ";
    if (retrieval.rfind(lead, 0) == 0) retrieval.erase(0, lead.size());

    PromptBundle b;
    b.kind = "combined";
    b.text = head + retrieval;
    return b;
}

PromptBundle compose_baseline(const std::string& kind, const SourceUnit& src,
                              const TemplateSet& ts) {
    std::string name;
    if (kind == "cot")
        name = "baseline_cot";
    else if (kind == "instruction_only")
        name = "baseline_instruction";
    else
        throw Error("unknown baseline kind: " + kind);
    PromptBundle b;
    b.kind = kind;
    b.text = substitute(ts.get(name),
                        {{"src_code", strip_trailing_newlines(src.text)}});
    return b;
}

}  // namespace eco
