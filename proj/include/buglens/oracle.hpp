#pragma once

#include <condition_variable>
#include <functional>
#include <mutex>
#include <set>
#include <string>

#include "buglens/model.hpp"

namespace buglens {

/// One oracle evaluation request: does `program_id` exhibit the bug at
/// `commit_id` under `config`?
struct OracleQuery {
    std::string program_id;
    std::string commit_id;
    OptConfig config;
};

/// Single-flight build cache. Every version is built at most once even under
/// concurrent requests: duplicate callers block until the winning build
/// finishes, distinct commits build in parallel.
class BuildCache {
  public:
    /// Runs `build` unless the commit is already built or another caller is
    /// building it right now. Returns true when this call performed the build.
    /// If `build` throws, the commit is left unbuilt and waiters retry.
    bool ensure_built(const std::string& commit_id, const std::function<void()>& build);

    bool is_built(const std::string& commit_id) const;
    std::size_t distinct_built() const;
    std::size_t builds_performed() const;

  private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::set<std::string> built_;
    std::set<std::string> in_flight_;
    std::size_t builds_performed_ = 0;
};

/// Three-valued oracle over (program, commit, config). The base class owns the
/// build cache and the per-program accounting behind build_stats(); backends
/// supply the build and test steps.
class Oracle {
  public:
    virtual ~Oracle() = default;

    /// Builds the commit (cache-inserted, single-flight) and tests the program.
    /// Throws BuildFailure when the version cannot be produced at all.
    OracleVerdict evaluate(const OracleQuery& query);

    /// (distinct_versions_built, versions_per_case). Requires at least one
    /// prior evaluation.
    BuildStats build_stats() const;

    std::size_t builds_performed() const { return cache_.builds_performed(); }

  protected:
    virtual void build_version(const std::string& commit_id) = 0;
    virtual OracleVerdict test_program(const OracleQuery& query) = 0;

  private:
    BuildCache cache_;
    mutable std::mutex programs_mu_;
    std::set<std::string> programs_seen_;
};

}  // namespace buglens
