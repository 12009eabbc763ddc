#include "lacuna/evaluate.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>

#include "lacuna/eliminate.hpp"
#include "lacuna/merge.hpp"

namespace lacuna {

namespace {

bool blank(const std::string& text) {
    return text.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

std::string EvalReport::combination_name() const { return join(combination, "+"); }

GroundTruth load_truth(const std::string& json_text, const std::set<FunctionId>& universe,
                       const std::string& app_fallback) {
    GroundTruth truth;
    truth.app = app_fallback;
    if (blank(json_text)) {
        if (!universe.empty())
            throw Error("eval", "empty ground truth but the app has " +
                                    std::to_string(universe.size()) + " functions");
        return truth;
    }

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error("eval", std::string("malformed ground truth: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("functions") || !doc["functions"].is_array())
        throw Error("eval", "ground truth must be an object with a \"functions\" array");
    if (doc.contains("app") && doc["app"].is_string()) truth.app = doc["app"].get<std::string>();

    std::set<FunctionId> seen;
    for (const auto& entry : doc["functions"]) {
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("status"))
            throw Error("eval", "ground truth entries need \"id\" and \"status\"");
        std::string raw = entry["id"].get<std::string>();
        std::optional<FunctionId> id = FunctionId::parse(raw);
        if (!id) throw Error("eval", "malformed function id: " + raw);
        if (!universe.count(*id)) throw Error("eval", "ground truth names unknown function " + raw);
        if (!seen.insert(*id).second) throw Error("eval", "duplicate ground truth entry " + raw);
        std::string status = entry["status"].get<std::string>();
        if (status == "dead")
            truth.dead.insert(*id);
        else if (status == "alive")
            truth.alive.insert(*id);
        else
            throw Error("eval", "bad status \"" + status + "\" for " + raw);
    }
    for (const FunctionId& id : universe)
        if (!seen.count(id))
            throw Error("eval", "ground truth does not cover function " + id.canonical());
    return truth;
}

EvalReport score(const std::string& app, const std::vector<std::string>& combination,
                 const std::set<FunctionId>& detected_dead, const GroundTruth& truth) {
    EvalReport r;
    r.app = app;
    r.combination = combination;
    std::sort(r.combination.begin(), r.combination.end());

    for (const FunctionId& id : detected_dead) {
        if (!truth.dead.count(id) && !truth.alive.count(id))
            throw Error("eval", "detected id outside the ground truth universe: " + id.canonical());
        if (truth.dead.count(id))
            ++r.tp;
        else
            ++r.fp;
    }
    for (const FunctionId& id : truth.dead)
        if (!detected_dead.count(id)) ++r.fn;
    for (const FunctionId& id : truth.alive)
        if (!detected_dead.count(id)) ++r.tn;

    if (detected_dead.empty()) {
        if (truth.dead.empty()) {
            r.precision = 1;
        } else {
            r.precision = 0;
            r.undefined_precision = true;
        }
    } else {
        r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    }
    r.recall = truth.dead.empty() ? 1.0
                                  : static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    if (r.precision + r.recall == 0) {
        r.f_score = 0;
        r.undefined_f = true;
    } else {
        r.f_score = 2 * r.precision * r.recall / (r.precision + r.recall);
    }
    return r;
}

std::vector<EvalReport> sweep(const std::string& app, const CallGraph& g0,
                              const std::vector<AnalyzerRun>& runs, const GroundTruth& truth,
                              DiagnosticList& diags) {
    std::vector<EvalReport> out;
    size_t n = runs.size();
    for (size_t mask = 1; mask < (size_t{1} << n); ++mask) {
        std::vector<std::string> names;
        std::vector<std::pair<std::string, CallGraph>> members;
        std::string failed;
        for (size_t i = 0; i < n; ++i) {
            if (!(mask & (size_t{1} << i))) continue;
            names.push_back(runs[i].name);
            if (!runs[i].ok && failed.empty()) failed = runs[i].name;
            members.emplace_back(runs[i].name, runs[i].graph);
        }
        if (!failed.empty()) {
            diags.push_back({app + ":" + join(names, "+"),
                             "combination skipped, analyzer '" + failed + "' failed"});
            continue;
        }
        CallGraph merged = merge_graphs(g0, members);
        EliminationPlan plan = classify(merged);
        out.push_back(score(app, names, plan.dead, truth));
    }
    std::sort(out.begin(), out.end(), [](const EvalReport& a, const EvalReport& b) {
        if (a.f_score != b.f_score) return a.f_score > b.f_score;
        if (a.precision != b.precision) return a.precision > b.precision;
        return a.combination_name() < b.combination_name();
    });
    return out;
}

std::vector<EvalReport> aggregate(const std::vector<EvalReport>& rows) {
    std::map<std::string, std::vector<const EvalReport*>> by_combo;
    for (const EvalReport& r : rows) by_combo[r.combination_name()].push_back(&r);

    std::vector<EvalReport> out;
    for (const auto& [name, group] : by_combo) {
        EvalReport agg;
        agg.app = "<aggregate>";
        agg.combination = group.front()->combination;
        for (const EvalReport* r : group) {
            agg.tp += r->tp;
            agg.fp += r->fp;
            agg.fn += r->fn;
            agg.tn += r->tn;
            agg.precision += r->precision;
            agg.recall += r->recall;
            agg.f_score += r->f_score;
            agg.undefined_precision = agg.undefined_precision || r->undefined_precision;
            agg.undefined_f = agg.undefined_f || r->undefined_f;
        }
        double count = static_cast<double>(group.size());
        agg.precision /= count;
        agg.recall /= count;
        agg.f_score /= count;
        out.push_back(std::move(agg));
    }
    std::sort(out.begin(), out.end(), [](const EvalReport& a, const EvalReport& b) {
        if (a.f_score != b.f_score) return a.f_score > b.f_score;
        if (a.precision != b.precision) return a.precision > b.precision;
        return a.combination_name() < b.combination_name();
    });
    return out;
}

std::string render_reports_json(const std::vector<EvalReport>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const EvalReport& r : rows) {
        nlohmann::ordered_json entry;
        entry["app"] = r.app;
        entry["combination"] = r.combination;
        entry["tp"] = r.tp;
        entry["fp"] = r.fp;
        entry["fn"] = r.fn;
        entry["tn"] = r.tn;
        entry["precision"] = r.precision;
        entry["recall"] = r.recall;
        entry["f_score"] = r.f_score;
        entry["undefined_precision"] = r.undefined_precision;
        entry["undefined_f"] = r.undefined_f;
        arr.push_back(entry);
    }
    return arr.dump(2) + "\n";
}

std::string render_table(const std::vector<EvalReport>& rows) {
    size_t app_w = 3, combo_w = 11;
    for (const EvalReport& r : rows) {
        app_w = std::max(app_w, r.app.size());
        combo_w = std::max(combo_w, r.combination_name().size());
    }
    char line[512];
    std::string out;
    std::snprintf(line, sizeof(line), "%-*s  %-*s  %5s %5s %5s %5s  %9s %9s %9s\n",
                  static_cast<int>(app_w), "app", static_cast<int>(combo_w), "combination", "tp",
                  "fp", "fn", "tn", "precision", "recall", "f_score");
    out += line;
    for (const EvalReport& r : rows) {
        std::snprintf(line, sizeof(line),
                      "%-*s  %-*s  %5zu %5zu %5zu %5zu  %9.4f %9.4f %9.4f%s\n",
                      static_cast<int>(app_w), r.app.c_str(), static_cast<int>(combo_w),
                      r.combination_name().c_str(), r.tp, r.fp, r.fn, r.tn, r.precision, r.recall,
                      r.f_score, r.undefined_precision || r.undefined_f ? "  *" : "");
        out += line;
    }
    if (std::any_of(rows.begin(), rows.end(), [](const EvalReport& r) {
            return r.undefined_precision || r.undefined_f;
        }))
        out += "* metric hit a degenerate case (no detections or zero precision+recall)\n";
    return out;
}

}  // namespace lacuna
