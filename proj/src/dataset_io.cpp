#include "buglens/dataset_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "buglens/errors.hpp"

namespace buglens {

namespace {

std::int64_t timestamp_from_json(const json& value) {
    // Sub-second resolution is truncated on ingestion.
    if (value.is_number_float()) {
        return static_cast<std::int64_t>(value.get<double>());
    }
    return value.get<std::int64_t>();
}

json commit_to_json(const Commit& c) {
    return json{{"id", c.id}, {"timestamp", c.timestamp}, {"ordinal", c.ordinal}};
}

Commit commit_from_json(const json& j) {
    Commit c;
    c.id = j.at("id").get<std::string>();
    c.timestamp = timestamp_from_json(j.at("timestamp"));
    c.ordinal = j.value("ordinal", std::size_t{0});
    return c;
}

}  // namespace

json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DatasetError("cannot open " + path.string());
    }
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) {
        throw DatasetError("malformed JSON in " + path.string());
    }
    return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DatasetError("cannot write " + tmp.string());
        }
        out << content;
        if (!out.flush()) {
            throw DatasetError("short write to " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void save_json_atomic(const std::filesystem::path& path, const json& value) {
    write_file_atomic(path, value.dump(2) + "\n");
}

json history_to_json(const CommitHistory& history) {
    json commits = json::array();
    for (const Commit& c : history.commits()) {
        commits.push_back(json{{"id", c.id}, {"timestamp", c.timestamp}});
    }
    return json{{"commits", std::move(commits)}, {"release_markers", history.release_markers()}};
}

CommitHistory history_from_json(const json& j) {
    std::vector<Commit> commits;
    for (const json& cj : j.at("commits")) {
        Commit c;
        c.id = cj.at("id").get<std::string>();
        c.timestamp = timestamp_from_json(cj.at("timestamp"));
        commits.push_back(std::move(c));
    }
    std::vector<std::string> markers;
    for (const json& m : j.at("release_markers")) {
        markers.push_back(m.get<std::string>());
    }
    return CommitHistory(std::move(commits), std::move(markers));
}

json programs_to_json(const std::vector<TestProgram>& programs) {
    json arr = json::array();
    for (const TestProgram& p : programs) {
        json pj{{"id", p.id}, {"source_ref", p.source_ref}, {"fail_level", p.fail_level}};
        if (p.ground_truth_bug) {
            pj["ground_truth_bug"] = *p.ground_truth_bug;
        }
        arr.push_back(std::move(pj));
    }
    return arr;
}

std::vector<TestProgram> programs_from_json(const json& j) {
    std::vector<TestProgram> programs;
    for (const json& pj : j) {
        TestProgram p;
        p.id = pj.at("id").get<std::string>();
        p.source_ref = pj.at("source_ref").get<std::string>();
        p.fail_level = pj.at("fail_level").get<std::string>();
        if (pj.contains("ground_truth_bug")) {
            p.ground_truth_bug = pj.at("ground_truth_bug").get<std::string>();
        }
        programs.push_back(std::move(p));
    }
    return programs;
}

json universe_to_json(const PassUniverse& universe) {
    return json{{"passes", universe.passes}, {"level_sets", universe.level_sets}};
}

PassUniverse universe_from_json(const json& j) {
    PassUniverse u;
    u.passes = j.at("passes").get<std::vector<std::string>>();
    for (const auto& [symbol, names] : j.at("level_sets").items()) {
        u.level_sets[symbol] = names.get<std::vector<std::string>>();
    }
    return u;
}

json outcome_to_json(const BisectionOutcome& outcome) {
    return json{{"program_id", outcome.program_id},
                {"inducing_commit", commit_to_json(outcome.inducing_commit)},
                {"good_bound", outcome.good_bound},
                {"bad_bound", outcome.bad_bound},
                {"queries", outcome.queries},
                {"verified", outcome.verified},
                {"skipped", outcome.skipped}};
}

BisectionOutcome outcome_from_json(const json& j) {
    BisectionOutcome outcome;
    outcome.program_id = j.at("program_id").get<std::string>();
    outcome.inducing_commit = commit_from_json(j.at("inducing_commit"));
    outcome.good_bound = j.at("good_bound").get<std::string>();
    outcome.bad_bound = j.at("bad_bound").get<std::string>();
    outcome.queries = j.at("queries").get<std::size_t>();
    outcome.verified = j.at("verified").get<bool>();
    outcome.skipped = j.at("skipped").get<std::vector<std::string>>();
    return outcome;
}

json outcomes_to_json(const std::vector<BisectionOutcome>& outcomes) {
    json arr = json::array();
    for (const BisectionOutcome& o : outcomes) {
        arr.push_back(outcome_to_json(o));
    }
    return arr;
}

std::vector<BisectionOutcome> outcomes_from_json(const json& j) {
    std::vector<BisectionOutcome> outcomes;
    for (const json& oj : j) {
        outcomes.push_back(outcome_from_json(oj));
    }
    return outcomes;
}

json fingerprint_to_json(const Fingerprint& fp, const PassUniverse& universe) {
    std::vector<std::string> on;
    for (std::size_t i = 0; i < fp.vector.bits.size() && i < universe.passes.size(); ++i) {
        if (fp.vector.bits[i]) {
            on.push_back(universe.passes[i]);
        }
    }
    return json{{"program_id", fp.program_id},
                {"commit", commit_to_json(fp.commit)},
                {"vector", json{{"level", to_string(fp.vector.level)}, {"on", std::move(on)}}}};
}

Fingerprint fingerprint_from_json(const json& j, const PassUniverse& universe) {
    Fingerprint fp;
    fp.program_id = j.at("program_id").get<std::string>();
    fp.commit = commit_from_json(j.at("commit"));
    const json& vec = j.at("vector");
    auto level = parse_opt_level(vec.at("level").get<std::string>());
    if (!level) {
        throw DatasetError("fingerprint for " + fp.program_id + " has unrecognized level");
    }
    fp.vector.level = *level;
    fp.vector.bits.assign(universe.size(), 0);
    auto index = universe.pass_index();
    for (const json& name : vec.at("on")) {
        auto it = index.find(name.get<std::string>());
        if (it == index.end()) {
            throw DatasetError("fingerprint for " + fp.program_id + " references unknown pass '" +
                               name.get<std::string>() + "'");
        }
        fp.vector.bits[it->second] = 1;
    }
    return fp;
}

json fingerprints_to_json(const std::vector<Fingerprint>& fps, const PassUniverse& universe) {
    json arr = json::array();
    for (const Fingerprint& fp : fps) {
        arr.push_back(fingerprint_to_json(fp, universe));
    }
    return arr;
}

std::vector<Fingerprint> fingerprints_from_json(const json& j, const PassUniverse& universe) {
    std::vector<Fingerprint> fps;
    for (const json& fj : j) {
        fps.push_back(fingerprint_from_json(fj, universe));
    }
    return fps;
}

json ranking_to_json(const RankedList& list, const std::string& mode) {
    return json{{"mode", mode}, {"seed", list.seed}, {"order", list.order}};
}

RankedList ranking_from_json(const json& j, std::string* mode_out) {
    RankedList list;
    list.seed = j.at("seed").get<std::uint64_t>();
    list.order = j.at("order").get<std::vector<std::string>>();
    if (mode_out) {
        *mode_out = j.value("mode", std::string{});
    }
    return list;
}

json report_to_json(const EvaluationReport& report) {
    json curve = json::array();
    for (const CurvePoint& p : report.discovery_curve) {
        curve.push_back(
            json{{"examined", p.examined}, {"mean_bugs", p.mean_bugs}, {"std_bugs", p.std_bugs}});
    }
    json effort = json::array();
    for (const auto& [k, mean] : report.wasted_effort) {
        effort.push_back(json{{"k", k}, {"mean_effort", mean}});
    }
    return json{{"discovery_curve", std::move(curve)},
                {"wasted_effort", std::move(effort)},
                {"repetitions", report.repetitions},
                {"per_rep_effort", report.per_rep_effort},
                {"build_stats",
                 json{{"distinct_versions_built", report.build_stats.distinct_versions_built},
                      {"versions_per_case", report.build_stats.versions_per_case}}}};
}

EvaluationReport report_from_json(const json& j) {
    EvaluationReport report;
    for (const json& pj : j.at("discovery_curve")) {
        CurvePoint p;
        p.examined = pj.at("examined").get<std::size_t>();
        p.mean_bugs = pj.at("mean_bugs").get<double>();
        p.std_bugs = pj.at("std_bugs").get<double>();
        report.discovery_curve.push_back(p);
    }
    for (const json& ej : j.at("wasted_effort")) {
        report.wasted_effort[ej.at("k").get<std::size_t>()] = ej.at("mean_effort").get<double>();
    }
    report.repetitions = j.at("repetitions").get<std::size_t>();
    report.per_rep_effort = j.at("per_rep_effort").get<std::vector<std::vector<std::size_t>>>();
    report.build_stats.distinct_versions_built =
        j.at("build_stats").at("distinct_versions_built").get<std::size_t>();
    report.build_stats.versions_per_case =
        j.at("build_stats").at("versions_per_case").get<double>();
    return report;
}

}  // namespace buglens
