#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <set>
#include <string>
#include <vector>

#include "buglens/model.hpp"
#include "buglens/oracle.hpp"

namespace buglens {

/// User-supplied command templates realizing the oracle contract on a real
/// repository. Placeholders: {commit} in checkout_build_cmd; {commit},
/// {program}, {flags} in test_cmd. Exit codes: 0 PASS, 1 FAIL, 125 skip
/// (INDETERMINATE), anything else from the test command is a BuildFailure.
struct AdapterConfig {
    std::string checkout_build_cmd;
    std::string test_cmd;
    std::string flag_style = "gcc";
    double timeout_secs = 600.0;
    std::size_t parallelism = 2;
    std::string cache_dir;
};

AdapterConfig adapter_config_from_file(const std::filesystem::path& path);

/// Renders an OptConfig as a compiler flag string: "-{level}" followed by one
/// "-fno-{pass}" per disabled pass, in universe order.
std::string render_flags(const OptConfig& config, const PassUniverse& universe,
                         const std::string& flag_style = "gcc");

std::string substitute_placeholders(std::string templ,
                                    const std::map<std::string, std::string>& values);

class ExternalOracle final : public Oracle {
  public:
    ExternalOracle(AdapterConfig config, PassUniverse universe,
                   std::vector<TestProgram> programs);

  protected:
    void build_version(const std::string& commit_id) override;
    OracleVerdict test_program(const OracleQuery& query) override;

  private:
    std::filesystem::path sentinel_path(const std::string& commit_id) const;

    AdapterConfig config_;
    PassUniverse universe_;
    std::map<std::string, std::string> source_refs_;  // program id -> {program} value
    std::unique_ptr<std::counting_semaphore<256>> build_slots_;
    std::mutex timeouts_mu_;
    std::set<std::string> timed_out_commits_;
};

}  // namespace buglens
