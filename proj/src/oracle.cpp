#include "buglens/oracle.hpp"

#include "buglens/errors.hpp"

namespace buglens {

bool BuildCache::ensure_built(const std::string& commit_id, const std::function<void()>& build) {
    std::unique_lock lock(mu_);
    for (;;) {
        if (built_.count(commit_id)) {
            return false;
        }
        if (!in_flight_.count(commit_id)) {
            break;
        }
        cv_.wait(lock);  // someone else is building this commit; retry after
    }
    in_flight_.insert(commit_id);
    lock.unlock();
    try {
        build();
    } catch (...) {
        lock.lock();
        in_flight_.erase(commit_id);
        cv_.notify_all();
        throw;
    }
    lock.lock();
    in_flight_.erase(commit_id);
    built_.insert(commit_id);
    ++builds_performed_;
    cv_.notify_all();
    return true;
}

bool BuildCache::is_built(const std::string& commit_id) const {
    std::lock_guard lock(mu_);
    return built_.count(commit_id) > 0;
}

std::size_t BuildCache::distinct_built() const {
    std::lock_guard lock(mu_);
    return built_.size();
}

std::size_t BuildCache::builds_performed() const {
    std::lock_guard lock(mu_);
    return builds_performed_;
}

OracleVerdict Oracle::evaluate(const OracleQuery& query) {
    {
        std::lock_guard lock(programs_mu_);
        programs_seen_.insert(query.program_id);
    }
    try {
        cache_.ensure_built(query.commit_id, [&] { build_version(query.commit_id); });
        return test_program(query);
    } catch (const CommandTimeout&) {
        return {Outcome::Indeterminate, "timeout"};
    }
}

BuildStats Oracle::build_stats() const {
    std::size_t programs;
    {
        std::lock_guard lock(programs_mu_);
        programs = programs_seen_.size();
    }
    if (programs == 0) {
        throw Error("build_stats requires at least one evaluation");
    }
    BuildStats stats;
    stats.distinct_versions_built = cache_.distinct_built();
    stats.versions_per_case =
        static_cast<double>(stats.distinct_versions_built) / static_cast<double>(programs);
    return stats;
}

}  // namespace buglens
