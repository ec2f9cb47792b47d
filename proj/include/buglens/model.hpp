#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace buglens {

/// The five recognized optimization level symbols.
enum class OptLevel : std::uint8_t { O0, O1, O2, O3, Os };

inline constexpr std::array<OptLevel, 5> kAllLevels = {OptLevel::O0, OptLevel::O1, OptLevel::O2,
                                                       OptLevel::O3, OptLevel::Os};

std::string to_string(OptLevel level);
std::optional<OptLevel> parse_opt_level(std::string_view symbol);

/// One commit in a linearized version history. Timestamps are integer seconds
/// since epoch; sub-second resolution is truncated on ingestion.
struct Commit {
    std::string id;
    std::int64_t timestamp = 0;
    std::size_t ordinal = 0;  // index in the linearized history

    friend bool operator==(const Commit&, const Commit&) = default;
};

/// Linearized commit history plus the ordered list of pre-built main releases.
/// Construction never rejects ill-formed data; validate_dataset reports it.
class CommitHistory {
  public:
    CommitHistory() = default;
    CommitHistory(std::vector<Commit> commits, std::vector<std::string> release_markers);

    const std::vector<Commit>& commits() const { return commits_; }
    const std::vector<std::string>& release_markers() const { return release_markers_; }

    std::size_t size() const { return commits_.size(); }
    bool empty() const { return commits_.empty(); }

    const Commit& at(std::size_t ordinal) const;
    /// nullptr when the id is unknown.
    const Commit* find(std::string_view id) const;

    /// Release markers resolved to commits, sorted by ordinal.
    std::vector<Commit> marker_commits() const;

    friend bool operator==(const CommitHistory& a, const CommitHistory& b) {
        return a.commits_ == b.commits_ && a.release_markers_ == b.release_markers_;
    }

  private:
    std::vector<Commit> commits_;
    std::vector<std::string> release_markers_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// One bug-triggering test input plus the configuration under which it fails.
/// fail_level is kept as a raw symbol so that invalid datasets are
/// representable; validate_dataset flags symbols that do not parse.
struct TestProgram {
    std::string id;
    std::string source_ref;
    std::string fail_level;
    std::optional<std::string> ground_truth_bug;  // evaluation mode only

    std::optional<OptLevel> level() const { return parse_opt_level(fail_level); }

    friend bool operator==(const TestProgram&, const TestProgram&) = default;
};

/// The ordered pass list (length n) and the subset each level explicitly
/// enables. level_sets is keyed by level symbol.
struct PassUniverse {
    std::vector<std::string> passes;
    std::map<std::string, std::vector<std::string>> level_sets;

    std::size_t size() const { return passes.size(); }

    /// Passes the level explicitly enables, in universe (ordinal) order.
    /// Empty for levels without an entry (e.g. O0).
    std::vector<std::string> level_set(OptLevel level) const;

    /// pass name -> position in passes. Duplicates keep the first position.
    std::unordered_map<std::string, std::size_t> pass_index() const;

    friend bool operator==(const PassUniverse&, const PassUniverse&) = default;
};

/// A compiler invocation's optimization state: the level stays active and the
/// listed passes are disabled on top of it (reverse-disable encoding).
struct OptConfig {
    OptLevel level = OptLevel::O2;
    std::set<std::string> disabled;

    friend bool operator==(const OptConfig&, const OptConfig&) = default;
};

/// Vector encoding of a minimal bug-triggering set: index 0 is the level
/// symbol, bits[i] = 1 iff pass i belongs to the minimal set.
struct OptVector {
    OptLevel level = OptLevel::O2;
    std::vector<std::uint8_t> bits;

    std::size_t on_count() const;

    friend bool operator==(const OptVector&, const OptVector&) = default;
};

enum class Outcome : std::uint8_t { Pass, Fail, Indeterminate };

std::string to_string(Outcome outcome);
std::optional<Outcome> parse_outcome(std::string_view text);

/// Three-valued test outcome. INDETERMINATE is reserved for cases where bug
/// presence cannot be decided, e.g. the compiler crashed on an unrelated
/// earlier stage.
struct OracleVerdict {
    Outcome outcome = Outcome::Indeterminate;
    std::string detail;

    friend bool operator==(const OracleVerdict&, const OracleVerdict&) = default;
};

/// Result of locating the earliest failure-inducing commit for one program.
struct BisectionOutcome {
    std::string program_id;
    Commit inducing_commit;
    std::string good_bound;
    std::string bad_bound;
    std::size_t queries = 0;
    bool verified = false;
    std::vector<std::string> skipped;  // commit ids with INDETERMINATE verdicts

    friend bool operator==(const BisectionOutcome&, const BisectionOutcome&) = default;
};

/// The deduplication signature of one program: its failure-inducing commit
/// paired with its minimal-optimization vector.
struct Fingerprint {
    std::string program_id;
    Commit commit;
    OptVector vector;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

struct RankedList {
    std::vector<std::string> order;  // permutation of program ids
    std::uint64_t seed = 0;          // seed used for the initial pick

    friend bool operator==(const RankedList&, const RankedList&) = default;
};

struct BuildStats {
    std::size_t distinct_versions_built = 0;
    double versions_per_case = 0.0;

    friend bool operator==(const BuildStats&, const BuildStats&) = default;
};

struct CurvePoint {
    std::size_t examined = 0;
    double mean_bugs = 0.0;
    double std_bugs = 0.0;

    friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

/// Metrics computed over a set of ranked lists against ground truth.
struct EvaluationReport {
    std::vector<CurvePoint> discovery_curve;
    std::map<std::size_t, double> wasted_effort;  // k -> mean examinations
    std::size_t repetitions = 0;
    std::vector<std::vector<std::size_t>> per_rep_effort;  // [rep][k-1]
    BuildStats build_stats;

    friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks every structural invariant of the dataset trio and returns the list
/// of violations; an empty report means well-formed. Diagnostics are data,
/// never exceptions.
ValidationReport validate_dataset(const CommitHistory& history,
                                  const std::vector<TestProgram>& programs,
                                  const PassUniverse& universe);

}  // namespace buglens
