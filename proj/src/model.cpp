#include "buglens/model.hpp"

#include <algorithm>
#include <set>

#include "buglens/errors.hpp"

namespace buglens {

std::string to_string(OptLevel level) {
    switch (level) {
    case OptLevel::O0: return "O0";
    case OptLevel::O1: return "O1";
    case OptLevel::O2: return "O2";
    case OptLevel::O3: return "O3";
    case OptLevel::Os: return "Os";
    }
    return "O?";
}

std::optional<OptLevel> parse_opt_level(std::string_view symbol) {
    for (OptLevel level : kAllLevels) {
        if (symbol == to_string(level)) {
            return level;
        }
    }
    return std::nullopt;
}

std::string to_string(Outcome outcome) {
    switch (outcome) {
    case Outcome::Pass: return "PASS";
    case Outcome::Fail: return "FAIL";
    case Outcome::Indeterminate: return "INDETERMINATE";
    }
    return "?";
}

std::optional<Outcome> parse_outcome(std::string_view text) {
    if (text == "PASS") return Outcome::Pass;
    if (text == "FAIL") return Outcome::Fail;
    if (text == "INDETERMINATE") return Outcome::Indeterminate;
    return std::nullopt;
}

CommitHistory::CommitHistory(std::vector<Commit> commits, std::vector<std::string> release_markers)
    : commits_(std::move(commits)), release_markers_(std::move(release_markers)) {
    for (std::size_t i = 0; i < commits_.size(); ++i) {
        commits_[i].ordinal = i;
        index_.emplace(commits_[i].id, i);  // duplicates keep the first slot
    }
}

const Commit& CommitHistory::at(std::size_t ordinal) const {
    if (ordinal >= commits_.size()) {
        throw UnknownEntity("commit ordinal out of range: " + std::to_string(ordinal));
    }
    return commits_[ordinal];
}

const Commit* CommitHistory::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? nullptr : &commits_[it->second];
}

std::vector<Commit> CommitHistory::marker_commits() const {
    std::vector<Commit> markers;
    for (const auto& id : release_markers_) {
        if (const Commit* c = find(id)) {
            markers.push_back(*c);
        }
    }
    std::sort(markers.begin(), markers.end(),
              [](const Commit& a, const Commit& b) { return a.ordinal < b.ordinal; });
    return markers;
}

std::vector<std::string> PassUniverse::level_set(OptLevel level) const {
    auto it = level_sets.find(to_string(level));
    if (it == level_sets.end()) {
        return {};
    }
    // Canonicalize to universe order.
    auto index = pass_index();
    std::vector<std::string> result = it->second;
    std::sort(result.begin(), result.end(), [&](const std::string& a, const std::string& b) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        std::size_t ra = ia == index.end() ? index.size() : ia->second;
        std::size_t rb = ib == index.end() ? index.size() : ib->second;
        return ra != rb ? ra < rb : a < b;
    });
    return result;
}

std::unordered_map<std::string, std::size_t> PassUniverse::pass_index() const {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(passes.size());
    for (std::size_t i = 0; i < passes.size(); ++i) {
        index.emplace(passes[i], i);
    }
    return index;
}

std::size_t OptVector::on_count() const {
    std::size_t count = 0;
    for (std::uint8_t b : bits) {
        count += b != 0;
    }
    return count;
}

ValidationReport validate_dataset(const CommitHistory& history,
                                  const std::vector<TestProgram>& programs,
                                  const PassUniverse& universe) {
    ValidationReport report;
    auto violation = [&report](std::string message) { report.violations.push_back(std::move(message)); };

    std::set<std::string> commit_ids;
    for (const Commit& c : history.commits()) {
        if (!commit_ids.insert(c.id).second) {
            violation("history: duplicate commit id '" + c.id + "'");
        }
    }
    for (std::size_t i = 1; i < history.size(); ++i) {
        if (history.commits()[i].timestamp < history.commits()[i - 1].timestamp) {
            violation("history: timestamp decreases at commit '" + history.commits()[i].id +
                      "' (ordinal " + std::to_string(i) + ")");
        }
    }
    for (const std::string& marker : history.release_markers()) {
        if (commit_ids.find(marker) == commit_ids.end()) {
            violation("history: release marker '" + marker + "' not in commits");
        }
    }

    std::set<std::string> program_ids;
    for (const TestProgram& p : programs) {
        if (!program_ids.insert(p.id).second) {
            violation("programs: duplicate program id '" + p.id + "'");
        }
        if (!p.level().has_value()) {
            violation("programs: program '" + p.id + "' has unrecognized fail_level '" +
                      p.fail_level + "'");
        }
    }

    std::set<std::string> pass_names;
    for (const std::string& pass : universe.passes) {
        if (!pass_names.insert(pass).second) {
            violation("passes: duplicate pass name '" + pass + "'");
        }
    }
    for (const auto& [symbol, names] : universe.level_sets) {
        if (!parse_opt_level(symbol).has_value()) {
            violation("passes: unrecognized level symbol '" + symbol + "' in level_sets");
        }
        for (const std::string& name : names) {
            if (pass_names.find(name) == pass_names.end()) {
                violation("passes: level " + symbol + " enables unknown pass '" + name + "'");
            }
        }
    }

    return report;
}

}  // namespace buglens
