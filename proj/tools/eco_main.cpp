#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eco/advisor.hpp"
#include "eco/composer.hpp"
#include "eco/curator.hpp"
#include "eco/errors.hpp"
#include "eco/evaluator.hpp"
#include "eco/gateway.hpp"
#include "eco/pipeline.hpp"
#include "eco/retriever.hpp"
#include "eco/roi_store.hpp"
#include "eco/templates.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
    std::string rules_file = std::string(ECO_ASSET_DIR) + "/rules.json";
    std::string template_dir = std::string(ECO_ASSET_DIR) + "/templates";
    std::string mock_dir;
    std::string base_url;
    std::string model = "default";
};

eco::Gateway make_gateway(const CommonOpts& o) {
    eco::GatewayConfig cfg;
    cfg.mock_dir = o.mock_dir;
    cfg.base_url = o.base_url;
    cfg.model = o.model;
    return eco::Gateway(cfg);
}

std::vector<eco::CodePair> load_pairs(const fs::path& dir) {
    std::vector<fs::path> subdirs;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_directory()) subdirs.push_back(e.path());
    std::sort(subdirs.begin(), subdirs.end());
    std::vector<eco::CodePair> pairs;
    for (const auto& d : subdirs) {
        if (!fs::exists(d / "slow.cpp") || !fs::exists(d / "fast.cpp")) continue;
        eco::CodePair p;
        p.pair_id = d.filename().string();
        p.problem_id = p.pair_id.substr(0, p.pair_id.find('.'));
        p.slow = eco::SourceUnit::from_file(d / "slow.cpp");
        p.fast = eco::SourceUnit::from_file(d / "fast.cpp");
        pairs.push_back(std::move(p));
    }
    return pairs;
}

int cmd_cpg(const std::string& code, bool strict) {
    eco::ParseOptions opts;
    opts.strict = strict;
    auto g = eco::build_cpg(eco::SourceUnit::from_file(code), opts);
    g.dump(std::cout);
    for (const auto& w : g.warnings()) std::cerr << "warning: " << w << "\n";
    return 0;
}

int cmd_advise(const std::string& code, const CommonOpts& o, bool as_json) {
    auto rules = eco::RuleSet::load(o.rules_file);
    auto diagnoses = eco::advise(eco::SourceUnit::from_file(code), rules);
    if (as_json) {
        for (const auto& d : diagnoses) {
            ordered_json entities = ordered_json::array();
            for (const auto& e : d.entities)
                entities.push_back({{"kind", e.kind},
                                    {"name", e.name},
                                    {"start_line", e.span.start_line},
                                    {"end_line", e.span.end_line}});
            std::cout << ordered_json{{"rule_id", d.rule_id},
                                      {"category", d.category},
                                      {"entities", entities},
                                      {"text", d.text}}
                             .dump()
                      << "\n";
        }
    } else {
        for (const auto& d : diagnoses) std::cout << d.text << "\n";
    }
    return 0;
}

int cmd_histogram(const std::vector<std::string>& files, const CommonOpts& o) {
    auto rules = eco::RuleSet::load(o.rules_file);
    std::vector<eco::SourceUnit> corpus;
    for (const auto& f : files) {
        if (fs::is_directory(f)) {
            std::vector<fs::path> entries;
            for (const auto& e : fs::recursive_directory_iterator(f))
                if (e.path().extension() == ".cpp") entries.push_back(e.path());
            std::sort(entries.begin(), entries.end());
            for (const auto& e : entries)
                corpus.push_back(eco::SourceUnit::from_file(e));
        } else {
            corpus.push_back(eco::SourceUnit::from_file(f));
        }
    }
    std::vector<std::string> skipped;
    auto counts = eco::bottleneck_histogram(corpus, rules, &skipped);
    for (const auto& [category, count] : counts)
        std::cout << category << "\t" << count << "\n";
    for (const auto& s : skipped) std::cerr << "skipped: " << s << "\n";
    return 0;
}

int cmd_distill(const std::string& pairs_dir, const std::string& out,
                const CommonOpts& o, const std::string& marker) {
    auto templates = eco::TemplateSet::load(o.template_dir);
    auto pairs = load_pairs(pairs_dir);
    eco::Gateway gateway = make_gateway(o);
    eco::RoiDatabase db;
    if (fs::exists(out)) db = eco::RoiDatabase::load(out);
    eco::build_db(db, pairs, gateway, templates.get("distill"), marker);
    db.save(out);
    std::cout << "triplets: " << db.size() << "\n";
    for (const auto& e : db.errors()) std::cerr << "error: " << e << "\n";
    return db.errors().empty() ? 0 : 1;
}

int cmd_retrieve(const std::string& db_path, const std::string& code, int k,
                 const CommonOpts& o, bool by_code) {
    auto db = eco::RoiDatabase::load(db_path);
    auto index = eco::RetrievalIndex::build(
        db, 512, by_code ? eco::IndexSource::SlowCode : eco::IndexSource::Instruction);
    auto src = eco::SourceUnit::from_file(code);
    std::string query;
    if (by_code) {
        query = src.text;
    } else {
        auto templates = eco::TemplateSet::load(o.template_dir);
        eco::Gateway gateway = make_gateway(o);
        query = eco::analyze_performance(src, gateway, templates.get("analysis")).text;
    }
    for (const auto& s : index.retrieve(query, k))
        std::cout << db.triplets()[s.index].pair.pair_id << "\t" << s.score
                  << "\n";
    return 0;
}

int cmd_prompt(const std::string& mode, const std::string& code,
               const std::string& db_path, int k, const CommonOpts& o) {
    auto templates = eco::TemplateSet::load(o.template_dir);
    auto src = eco::SourceUnit::from_file(code);

    if (mode == "cot" || mode == "base") {
        std::cout << eco::compose_baseline(
                         mode == "cot" ? "cot" : "instruction_only", src,
                         templates)
                         .text;
        return 0;
    }
    if (mode == "symbolic") {
        auto rules = eco::RuleSet::load(o.rules_file);
        std::cout << eco::compose_symbolic(eco::advise(src, rules), src,
                                           templates)
                         .text;
        return 0;
    }

    if (db_path.empty()) throw eco::Error("mode '" + mode + "' needs --db");
    auto db = eco::RoiDatabase::load(db_path);
    auto pick = [&](const std::string& query,
                    eco::IndexSource source) -> std::vector<eco::RoiTriplet> {
        auto index = eco::RetrievalIndex::build(db, 512, source);
        std::vector<eco::RoiTriplet> out;
        for (const auto& s : index.retrieve(query, k))
            out.push_back(db.triplets()[s.index]);
        return out;
    };

    if (mode == "icl") {
        std::vector<eco::RoiTriplet> triplets(
            db.triplets().begin(),
            db.triplets().begin() + std::min<size_t>(k, db.size()));
        std::cout << eco::compose_retrieval(triplets, src, templates, false).text;
        return 0;
    }
    if (mode == "rag") {
        auto triplets = pick(src.text, eco::IndexSource::SlowCode);
        std::cout << eco::compose_retrieval(triplets, src, templates, false).text;
        return 0;
    }

    auto templates_gateway = make_gateway(o);
    auto analysis = eco::analyze_performance(src, templates_gateway,
                                             templates.get("analysis"));
    auto triplets = pick(analysis.text, eco::IndexSource::Instruction);
    if (mode == "retrieval") {
        std::cout << eco::compose_retrieval(triplets, src, templates).text;
        return 0;
    }
    if (mode == "eco") {
        auto rules = eco::RuleSet::load(o.rules_file);
        std::cout << eco::compose_combined(eco::advise(src, rules), triplets,
                                           src, templates)
                         .text;
        return 0;
    }
    throw eco::Error("unknown prompt mode: " + mode);
}

int cmd_eval(const std::string& problems_dir, const std::string& candidates_dir,
             int k, int reps, double timeout) {
    auto problems = eco::load_problems(problems_dir);
    eco::PipelineConfig cfg;
    cfg.reps = reps;
    cfg.timeout_seconds = timeout;
    cfg.work_dir = fs::temp_directory_path() / "eco-eval";

    std::vector<eco::EvalRecord> best1, bestk;
    for (const auto& p : problems) {
        std::vector<fs::path> files;
        fs::path dir = fs::path(candidates_dir) / p.id;
        if (fs::is_directory(dir))
            for (const auto& e : fs::directory_iterator(dir))
                if (e.path().extension() == ".cpp") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.size() > static_cast<size_t>(k)) files.resize(k);
        if (files.empty()) {
            std::cerr << "no candidates for " << p.id << "\n";
            continue;
        }
        std::vector<eco::EvalRecord> records;
        for (size_t i = 0; i < files.size(); ++i) {
            auto cand = eco::SourceUnit::from_file(files[i]);
            eco::EvalRecord rec;
            try {
                rec = eco::evaluate_candidate(p, cand, static_cast<int>(i), cfg);
            } catch (const eco::CompileError&) {
                rec.candidate_id = static_cast<int>(i);
            }
            records.push_back(rec);
            std::cout << ordered_json{{"problem", p.id},
                                      {"candidate", rec.candidate_id},
                                      {"correct", rec.correct},
                                      {"t_original", rec.t_original},
                                      {"t_new", rec.t_new},
                                      {"sp", rec.sp},
                                      {"opt", rec.opt}}
                             .dump()
                      << "\n";
        }
        best1.push_back(eco::best_at_k({records[0]}));
        bestk.push_back(eco::best_at_k(records));
    }
    if (best1.empty()) throw eco::Error("nothing evaluated");
    auto s1 = eco::aggregate({best1});
    auto sk = eco::aggregate({bestk});
    std::cout << "best@1\tACC " << s1.acc_percent << "%\tSP " << s1.mean_sp
              << "\tOPT " << s1.opt_percent << "%\n";
    std::cout << "best@" << k << "\tACC " << sk.acc_percent << "%\tSP "
              << sk.mean_sp << "\tOPT " << sk.opt_percent << "%\n";
    return 0;
}

int cmd_curate(const std::string& problems_dir, int cap, int ngram,
               double threshold, int max_keep, bool write) {
    auto problems = eco::load_problems(problems_dir);
    std::vector<eco::ProblemSample> samples;
    for (const auto& p : problems) {
        eco::ProblemSample s;
        s.problem_id = p.id;
        s.sample_id = p.id;
        s.source = p.original;
        s.cases = p.cases;
        samples.push_back(std::move(s));
    }
    samples = eco::cap_per_problem(std::move(samples), cap);
    for (auto& s : samples) {
        size_t before = s.cases.size();
        s.cases = eco::dedup_cases(std::move(s.cases), ngram, threshold, max_keep);
        std::cout << s.problem_id << "\tkept " << s.cases.size() << "/" << before
                  << "\n";
        if (!write) continue;
        fs::path dir = fs::path(problems_dir) / s.problem_id;
        for (const auto& e : fs::directory_iterator(dir)) {
            std::string name = e.path().filename().string();
            if (name.rfind("input.", 0) == 0 || name.rfind("output.", 0) == 0)
                fs::remove(e.path());
        }
        for (size_t i = 0; i < s.cases.size(); ++i) {
            std::ofstream(dir / ("input." + std::to_string(i) + ".txt"))
                << s.cases[i].input;
            std::ofstream(dir / ("output." + std::to_string(i) + ".txt"))
                << s.cases[i].expected_output;
        }
    }
    return 0;
}

int cmd_e2e(const std::string& problems_dir, const std::string& db_path,
            const CommonOpts& o, int top_k, int reps, double timeout) {
    auto templates = eco::TemplateSet::load(o.template_dir);
    auto rules = eco::RuleSet::load(o.rules_file);
    auto problems = eco::load_problems(problems_dir);
    auto db = eco::RoiDatabase::load(db_path);
    auto index = eco::RetrievalIndex::build(db);
    eco::Gateway gateway = make_gateway(o);

    eco::PipelineConfig cfg;
    cfg.top_k = top_k;
    cfg.reps = reps;
    cfg.timeout_seconds = timeout;
    cfg.work_dir = fs::temp_directory_path() / "eco-e2e";

    auto summary =
        eco::run_e2e(problems, db, index, gateway, rules, templates, cfg);
    for (const auto& out : summary.outcomes) {
        if (!out.ok) {
            std::cout << out.problem_id << "\tFAILED\t" << out.error << "\n";
            continue;
        }
        std::cout << out.problem_id << "\tcorrect=" << out.record.correct
                  << "\tsp=" << out.record.sp << "\topt=" << out.record.opt
                  << "\n";
    }
    std::cout << "summary\tACC " << summary.metrics.acc_percent << "%\tSP "
              << summary.metrics.mean_sp << "\tOPT "
              << summary.metrics.opt_percent << "%\n";
    return summary.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Performance-aware prompting toolkit for C++ programs"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string code, pairs_dir, out, db_path, problems_dir, candidates_dir;
    std::string mode, marker = "</think>";
    int k = 2, reps = 5, cap = 10, ngram = 4, max_keep = 10;
    double timeout = 2.0, threshold = 0.9;
    bool strict = false, as_json = false, by_code = false, write = false;
    std::vector<std::string> corpus;

    auto add_common = [&](CLI::App* cmd, bool gateway = false) {
        cmd->add_option("--rules", common.rules_file, "rule set file");
        cmd->add_option("--templates", common.template_dir, "template directory");
        if (gateway) {
            cmd->add_option("--mock", common.mock_dir, "mock fixture directory");
            cmd->add_option("--base-url", common.base_url, "endpoint base URL");
            cmd->add_option("--model", common.model, "model name");
        }
    };

    auto* cpg = app.add_subcommand("cpg", "dump the code property graph");
    cpg->add_option("--code", code)->required();
    cpg->add_flag("--strict", strict);

    auto* advise = app.add_subcommand("advise", "emit bottleneck diagnoses");
    advise->add_option("--code", code)->required();
    advise->add_flag("--json", as_json);
    add_common(advise);

    auto* histogram =
        app.add_subcommand("histogram", "per-category bottleneck counts");
    histogram->add_option("--corpus", corpus, "files or directories")->required();
    add_common(histogram);

    auto* distill = app.add_subcommand("distill", "build the ROI database");
    distill->add_option("--pairs", pairs_dir)->required();
    distill->add_option("--out", out)->required();
    distill->add_option("--marker", marker);
    add_common(distill, true);

    auto* retrieve = app.add_subcommand("retrieve", "top-k similar triplets");
    retrieve->add_option("--db", db_path)->required();
    retrieve->add_option("--code", code)->required();
    retrieve->add_option("-k", k);
    retrieve->add_flag("--by-code", by_code, "rank by code text, no gateway");
    add_common(retrieve, true);

    auto* prompt = app.add_subcommand("prompt", "compose a prompt");
    prompt->add_option("--mode", mode)
        ->required()
        ->check(CLI::IsMember({"eco", "symbolic", "retrieval", "icl", "rag",
                               "cot", "base"}));
    prompt->add_option("--code", code)->required();
    prompt->add_option("--db", db_path);
    prompt->add_option("-k", k);
    add_common(prompt, true);

    auto* eval = app.add_subcommand("eval", "judge candidates against problems");
    eval->add_option("--problems", problems_dir)->required();
    eval->add_option("--candidates", candidates_dir)->required();
    eval->add_option("-k", k);
    eval->add_option("--reps", reps);
    eval->add_option("--timeout", timeout);

    auto* curate = app.add_subcommand("curate", "rebalance and dedup test cases");
    curate->add_option("--problems", problems_dir)->required();
    curate->add_option("--cap", cap);
    curate->add_option("--ngram", ngram);
    curate->add_option("--threshold", threshold);
    curate->add_option("--max-keep", max_keep);
    curate->add_flag("--write", write, "rewrite case files in place");

    auto* e2e = app.add_subcommand("e2e", "full optimize-and-judge loop");
    e2e->add_option("--problems", problems_dir)->required();
    e2e->add_option("--db", db_path)->required();
    e2e->add_option("-k", k);
    e2e->add_option("--reps", reps);
    e2e->add_option("--timeout", timeout);
    add_common(e2e, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*cpg) return cmd_cpg(code, strict);
        if (*advise) return cmd_advise(code, common, as_json);
        if (*histogram) return cmd_histogram(corpus, common);
        if (*distill) return cmd_distill(pairs_dir, out, common, marker);
        if (*retrieve) return cmd_retrieve(db_path, code, k, common, by_code);
        if (*prompt) return cmd_prompt(mode, code, db_path, k, common);
        if (*eval) return cmd_eval(problems_dir, candidates_dir, k, reps, timeout);
        if (*curate)
            return cmd_curate(problems_dir, cap, ngram, threshold, max_keep, write);
        if (*e2e) return cmd_e2e(problems_dir, db_path, common, k, reps, timeout);
    } catch (const eco::ParseError& e) {
        std::cerr << ordered_json{{"error", "parse"}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << ordered_json{{"error", "runtime"}, {"message", e.what()}}.dump()
                  << "\n";
        return 1;
    }
    return 0;
}
