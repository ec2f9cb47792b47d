#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "buglens/model.hpp"

namespace buglens {

using json = nlohmann::json;

/// Reads and parses a JSON file; throws DatasetError naming the path.
json load_json_file(const std::filesystem::path& path);

/// Writes `content` atomically (temp file in the same directory + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Serializes with 2-space indentation and writes atomically. Object keys are
/// emitted sorted, so identical values yield byte-identical files.
void save_json_atomic(const std::filesystem::path& path, const json& value);

// history.json: {commits:[{id,timestamp}], release_markers:[id]}
json history_to_json(const CommitHistory& history);
CommitHistory history_from_json(const json& j);

// programs.json: [{id, source_ref, fail_level, ground_truth_bug?}]
json programs_to_json(const std::vector<TestProgram>& programs);
std::vector<TestProgram> programs_from_json(const json& j);

// passes.json: {passes:[name], level_sets:{O1:[name],...}}
json universe_to_json(const PassUniverse& universe);
PassUniverse universe_from_json(const json& j);

// outcomes.json: array of BisectionOutcome records
json outcome_to_json(const BisectionOutcome& outcome);
BisectionOutcome outcome_from_json(const json& j);
json outcomes_to_json(const std::vector<BisectionOutcome>& outcomes);
std::vector<BisectionOutcome> outcomes_from_json(const json& j);

// fingerprints.json: array of {program_id, commit, vector:{level, on:[pass names]}}
json fingerprint_to_json(const Fingerprint& fp, const PassUniverse& universe);
Fingerprint fingerprint_from_json(const json& j, const PassUniverse& universe);
json fingerprints_to_json(const std::vector<Fingerprint>& fps, const PassUniverse& universe);
std::vector<Fingerprint> fingerprints_from_json(const json& j, const PassUniverse& universe);

// ranking.json: {mode, seed, order:[program ids]}
json ranking_to_json(const RankedList& list, const std::string& mode);
RankedList ranking_from_json(const json& j, std::string* mode_out = nullptr);

json report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(const json& j);

}  // namespace buglens
