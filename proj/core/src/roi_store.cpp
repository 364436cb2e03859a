#include "eco/roi_store.hpp"

#include <fstream>

#include <json.hpp>

#include "eco/errors.hpp"
#include "eco/templates.hpp"

namespace eco {

using ordered_json = nlohmann::ordered_json;
using nlohmann::json;

bool RoiDatabase::contains(const std::string& pair_id) const {
    for (const auto& t : triplets_)
        if (t.pair.pair_id == pair_id) return true;
    return false;
}

void RoiDatabase::add(RoiTriplet t) {
    for (auto& existing : triplets_)
        if (existing.pair.pair_id == t.pair.pair_id) {
            existing = std::move(t);
            return;
        }
    triplets_.push_back(std::move(t));
}

static ordered_json to_record(const RoiTriplet& t) {
    ordered_json points = ordered_json::array();
    for (const auto& p : t.instruction.points)
        points.push_back({{"description", p.description},
                          {"runtime_improvement", p.runtime_improvement},
                          {"category", p.category}});
    return ordered_json{{"pair_id", t.pair.pair_id},
                        {"problem_id", t.pair.problem_id},
                        {"slow", t.pair.slow.text},
                        {"fast", t.pair.fast.text},
                        {"roi_raw", t.instruction.raw_text},
                        {"points", points}};
}

static RoiTriplet from_record(const ordered_json& j) {
    RoiTriplet t;
    t.pair.pair_id = j.at("pair_id").get<std::string>();
    t.pair.problem_id = j.at("problem_id").get<std::string>();
    t.pair.slow = SourceUnit::from_text(j.at("slow").get<std::string>());
    t.pair.fast = SourceUnit::from_text(j.at("fast").get<std::string>());
    t.instruction.raw_text = j.at("roi_raw").get<std::string>();
    for (const auto& p : j.at("points")) {
        RoiPoint pt;
        pt.description = p.at("description").get<std::string>();
        pt.runtime_improvement = p.at("runtime_improvement").get<int>();
        pt.category = p.at("category").get<std::string>();
        if (pt.runtime_improvement < 1 || pt.runtime_improvement > 10)
            throw Error("runtime_improvement out of range");
        t.instruction.points.push_back(std::move(pt));
    }
    return t;
}

RoiDatabase RoiDatabase::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open database: " + path.string());
    RoiDatabase db;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            db.triplets_.push_back(from_record(ordered_json::parse(line)));
        } catch (const std::exception& e) {
            db.errors_.push_back("corrupt record at line " +
                                 std::to_string(line_no) + ": " + e.what());
        }
    }
    return db;
}

void RoiDatabase::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write database: " + path.string());
    for (const auto& t : triplets_) out << to_record(t).dump() << "\n";
}

// ---------------------------------------------------------------------------

static bool valid_points_array(const json& j, std::vector<RoiPoint>& out) {
    if (!j.is_array() || j.empty()) return false;
    std::vector<RoiPoint> pts;
    bool any = false;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("description")) return false;
        any = true;
        RoiPoint p;
        p.description = e["description"].is_string()
                            ? e["description"].get<std::string>()
                            : e["description"].dump();
        if (e.contains("runtime_improvement")) {
            const auto& r = e["runtime_improvement"];
            if (r.is_number_integer())
                p.runtime_improvement = r.get<int>();
            else if (r.is_string()) {
                try {
                    p.runtime_improvement = std::stoi(r.get<std::string>());
                } catch (...) {
                    continue;  // drop unratable point
                }
            }
        }
        if (p.runtime_improvement < 1 || p.runtime_improvement > 10)
            continue;  // drop out-of-bound point
        p.category = e.value("category", "");
        pts.push_back(std::move(p));
    }
    if (!any) return false;
    out = std::move(pts);
    return true;
}

RoiInstruction parse_instruction(const std::string& response,
                                 const std::string& marker) {
    RoiInstruction out;
    size_t pos = marker.empty() ? std::string::npos : response.rfind(marker);
    out.raw_text =
        pos == std::string::npos ? response : response.substr(pos + marker.size());
    // Trim one leading newline left behind by the marker line.
    if (!out.raw_text.empty() && out.raw_text.front() == '\n')
        out.raw_text.erase(0, 1);

    // Last well-formed array of point objects wins.
    bool found = false;
    for (size_t i = 0; i < out.raw_text.size(); ++i) {
        if (out.raw_text[i] != '[') continue;
        int depth = 0;
        bool in_str = false;
        for (size_t j = i; j < out.raw_text.size(); ++j) {
            char c = out.raw_text[j];
            if (in_str) {
                if (c == '\\')
                    ++j;
                else if (c == '"')
                    in_str = false;
                continue;
            }
            if (c == '"') in_str = true;
            else if (c == '[') ++depth;
            else if (c == ']' && --depth == 0) {
                json parsed =
                    json::parse(out.raw_text.substr(i, j - i + 1), nullptr, false);
                std::vector<RoiPoint> pts;
                if (!parsed.is_discarded() && valid_points_array(parsed, pts)) {
                    out.points = std::move(pts);
                    found = true;
                }
                break;
            }
        }
    }
    out.parse_warning = !found;
    return out;
}

static std::string strip_trailing_newlines(std::string s) {
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

std::string make_distill_prompt(const CodePair& pair,
                                const std::string& template_text) {
    if (pair.slow.text.empty() || pair.fast.text.empty())
        throw Error("code pair has an empty side");
    return substitute(template_text,
                      {{"slow_code", strip_trailing_newlines(pair.slow.text)},
                       {"fast_code", strip_trailing_newlines(pair.fast.text)}});
}

RoiInstruction distill(const CodePair& pair, Gateway& gateway,
                       const std::string& template_text,
                       const std::string& marker) {
    GenerationResponse resp =
        gateway.complete(make_distill_prompt(pair, template_text));
    return parse_instruction(resp.text, marker);
}

void build_db(RoiDatabase& db, const std::vector<CodePair>& pairs,
              Gateway& gateway, const std::string& template_text,
              const std::string& marker) {
    if (pairs.empty()) throw Error("no code pairs to distill");
    for (const auto& pair : pairs) {
        if (db.contains(pair.pair_id)) continue;
        try {
            RoiTriplet t;
            t.pair = pair;
            t.instruction = distill(pair, gateway, template_text, marker);
            db.add(std::move(t));
        } catch (const std::exception& e) {
            db.record_error("pair " + pair.pair_id + ": " + e.what());
        }
    }
}

}  // namespace eco
