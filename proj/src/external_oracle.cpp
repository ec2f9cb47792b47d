#include "buglens/external_oracle.hpp"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "buglens/dataset_io.hpp"
#include "buglens/errors.hpp"
#include "buglens/subprocess.hpp"

namespace buglens {

AdapterConfig adapter_config_from_file(const std::filesystem::path& path) {
    json j = load_json_file(path);
    AdapterConfig config;
    config.checkout_build_cmd = j.at("checkout_build_cmd").get<std::string>();
    config.test_cmd = j.at("test_cmd").get<std::string>();
    config.flag_style = j.value("flag_style", std::string("gcc"));
    config.timeout_secs = j.value("timeout_secs", 600.0);
    config.parallelism = j.value("parallelism", std::size_t{2});
    config.cache_dir = j.value("cache_dir", std::string("buglens-cache"));
    if (const char* env = std::getenv("BUGLENS_CACHE_DIR")) {
        config.cache_dir = env;
    }
    return config;
}

std::string render_flags(const OptConfig& config, const PassUniverse& universe,
                         const std::string& flag_style) {
    (void)flag_style;  // "gcc" is the only style; LLVM happens to share it
    std::string flags = "-" + to_string(config.level);
    for (const std::string& pass : universe.passes) {
        if (config.disabled.count(pass)) {
            flags += " -fno-" + pass;
        }
    }
    // Disabled passes outside the universe (permitted by the model) go last.
    for (const std::string& pass : config.disabled) {
        bool known = false;
        for (const std::string& u : universe.passes) {
            if (u == pass) {
                known = true;
                break;
            }
        }
        if (!known) {
            flags += " -fno-" + pass;
        }
    }
    return flags;
}

std::string substitute_placeholders(std::string templ,
                                    const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) {
        const std::string token = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = templ.find(token, pos)) != std::string::npos) {
            templ.replace(pos, token.size(), value);
            pos += value.size();
        }
    }
    return templ;
}

ExternalOracle::ExternalOracle(AdapterConfig config, PassUniverse universe,
                               std::vector<TestProgram> programs)
    : config_(std::move(config)), universe_(std::move(universe)) {
    for (const TestProgram& p : programs) {
        source_refs_[p.id] = p.source_ref;
    }
    std::size_t slots = config_.parallelism == 0 ? 1 : std::min<std::size_t>(config_.parallelism, 256);
    build_slots_ = std::make_unique<std::counting_semaphore<256>>(
        static_cast<std::ptrdiff_t>(slots));
}

std::filesystem::path ExternalOracle::sentinel_path(const std::string& commit_id) const {
    return std::filesystem::path(config_.cache_dir) / commit_id / "DONE";
}

void ExternalOracle::build_version(const std::string& commit_id) {
    {
        std::lock_guard lock(timeouts_mu_);
        if (timed_out_commits_.count(commit_id)) {
            throw CommandTimeout(commit_id);  // don't retry a hanging build per query
        }
    }
    const auto sentinel = sentinel_path(commit_id);
    if (std::filesystem::exists(sentinel)) {
        return;  // built by an earlier run
    }
    build_slots_->acquire();
    CommandResult result;
    try {
        result = run_command(substitute_placeholders(config_.checkout_build_cmd,
                                                     {{"commit", commit_id}}),
                             config_.timeout_secs);
    } catch (...) {
        build_slots_->release();
        throw;
    }
    build_slots_->release();
    if (result.timed_out) {
        std::lock_guard lock(timeouts_mu_);
        timed_out_commits_.insert(commit_id);
        throw CommandTimeout(commit_id);
    }
    if (result.exit_code != 0) {
        throw BuildFailure(commit_id, "exit code " + std::to_string(result.exit_code) + "\n" +
                                          result.output);
    }
    std::filesystem::create_directories(sentinel.parent_path());
    std::ofstream(sentinel) << "";
}

OracleVerdict ExternalOracle::test_program(const OracleQuery& query) {
    auto ref = source_refs_.find(query.program_id);
    if (ref == source_refs_.end()) {
        throw UnknownEntity("unknown program '" + query.program_id + "'");
    }
    const std::string cmd = substitute_placeholders(
        config_.test_cmd, {{"commit", query.commit_id},
                           {"program", ref->second},
                           {"flags", render_flags(query.config, universe_, config_.flag_style)}});
    CommandResult result = run_command(cmd, config_.timeout_secs);
    if (result.timed_out) {
        return {Outcome::Indeterminate, "timeout"};
    }
    switch (result.exit_code) {
    case 0: return {Outcome::Pass, result.output};
    case 1: return {Outcome::Fail, result.output};
    case 125: return {Outcome::Indeterminate, result.output};
    default:
        throw BuildFailure(query.commit_id,
                           "test command exit code " + std::to_string(result.exit_code) + "\n" +
                               result.output);
    }
}

}  // namespace buglens
