#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "buglens/model.hpp"
#include "buglens/oracle.hpp"

namespace buglens {

/// Ground truth for one injected bug. Multiple BugSpecs may share
/// inducing_ordinal (single commits introducing multiple different bugs).
struct BugSpec {
    std::string label;
    std::size_t inducing_ordinal = 0;
    OptLevel level = OptLevel::O2;
    std::vector<std::string> trigger_passes;  // minimal conjunction; empty = implicit bug
    std::optional<std::size_t> fixed_ordinal; // bug gone at and after this ordinal

    friend bool operator==(const BugSpec&, const BugSpec&) = default;
};

/// Inclusive ordinal interval where a program's queries come back
/// INDETERMINATE (intermediate versions crash on unrelated stages).
struct CrashWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;

    bool contains(std::size_t ordinal) const { return lo <= ordinal && ordinal <= hi; }

    friend bool operator==(const CrashWindow&, const CrashWindow&) = default;
};

struct NoiseSpec {
    std::map<std::string, CrashWindow> crash_windows;
    std::map<std::string, std::size_t> manifestation_shift;  // first-failing ordinal override

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

/// The full synthetic compiler world. Immutable after generation.
struct World {
    CommitHistory history;
    PassUniverse universe;
    std::vector<TestProgram> programs;
    std::vector<BugSpec> bugs;
    NoiseSpec noise;

    const BugSpec& bug_of(const std::string& program_id) const;
    const TestProgram& program(const std::string& program_id) const;

    /// First ordinal at which the program fails (manifestation shift applied).
    std::size_t effective_inducing(const std::string& program_id) const;
};

struct WorldParams {
    std::size_t commits = 128;
    std::size_t bugs = 4;
    std::size_t programs = 16;
    std::string program_distribution = "zipf";  // "zipf" or "uniform"
    double zipf_s = 1.1;
    double multi_bug_commit_rate = 0.0;
    double implicit_bug_rate = 0.0;  // bugs with an empty trigger set
    std::size_t trigger_passes_max = 3;
    std::size_t total_passes = 40;
    double crash_window_rate = 0.0;
    std::size_t crash_window_max_len = 3;
    bool crash_window_avoid_boundary = true;
    double manifestation_shift_rate = 0.0;
    std::size_t manifestation_shift_max = 4;
};

WorldParams world_params_from_json(const nlohmann::json& j);
nlohmann::json world_params_to_json(const WorldParams& params);

/// Named dataset shapes. The gcc*/llvm* presets mirror the program and bug
/// counts of the four study datasets; "mini" is a smoke-test world.
WorldParams preset_params(const std::string& name);
std::vector<std::string> preset_names();

/// Deterministic in seed: identical (params, seed) yield identical worlds.
/// Timestamps increase strictly by 60..86400 s steps; release markers sit
/// every ceil(commits/10) ordinals plus both endpoints.
World generate_world(const WorldParams& params, std::uint64_t seed);

/// Pure verdict function realizing the oracle contract on a world.
OracleVerdict sim_verdict(const World& world, const OracleQuery& query);

/// Oracle backend over a world. Builds are no-ops but still flow through the
/// single-flight cache, so build_stats counts simulated builds.
class SimOracle final : public Oracle {
  public:
    /// The world must outlive the oracle.
    explicit SimOracle(const World& world);

  protected:
    void build_version(const std::string& commit_id) override;
    OracleVerdict test_program(const OracleQuery& query) override;

  private:
    struct ProgramContext {
        const BugSpec* bug = nullptr;
        std::size_t effective_inducing = 0;
        const CrashWindow* window = nullptr;
    };

    const World& world_;
    std::unordered_map<std::string, ProgramContext> contexts_;
};

// truth.json: {bugs:[...], noise:{crash_windows:{...}, manifestation_shift:{...}}}
nlohmann::json truth_to_json(const std::vector<BugSpec>& bugs, const NoiseSpec& noise);
void truth_from_json(const nlohmann::json& j, std::vector<BugSpec>& bugs, NoiseSpec& noise);

}  // namespace buglens
