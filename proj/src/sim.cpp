#include "buglens/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "buglens/errors.hpp"
#include "buglens/rng.hpp"

namespace buglens {

namespace {

std::string format_id(const char* prefix, std::size_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%06zu", prefix, n);
    return buf;
}

std::vector<std::string> prefix_of(const std::vector<std::string>& passes, double fraction) {
    std::size_t count = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(passes.size())));
    count = std::min(count, passes.size());
    return {passes.begin(), passes.begin() + static_cast<std::ptrdiff_t>(count)};
}

}  // namespace

const BugSpec& World::bug_of(const std::string& program_id) const {
    const TestProgram& p = program(program_id);
    if (!p.ground_truth_bug) {
        throw UnknownEntity("program '" + program_id + "' carries no ground-truth bug label");
    }
    for (const BugSpec& bug : bugs) {
        if (bug.label == *p.ground_truth_bug) {
            return bug;
        }
    }
    throw UnknownEntity("no bug spec named '" + *p.ground_truth_bug + "'");
}

const TestProgram& World::program(const std::string& program_id) const {
    for (const TestProgram& p : programs) {
        if (p.id == program_id) {
            return p;
        }
    }
    throw UnknownEntity("unknown program '" + program_id + "'");
}

std::size_t World::effective_inducing(const std::string& program_id) const {
    auto shift = noise.manifestation_shift.find(program_id);
    if (shift != noise.manifestation_shift.end()) {
        return shift->second;
    }
    return bug_of(program_id).inducing_ordinal;
}

WorldParams world_params_from_json(const nlohmann::json& j) {
    WorldParams p;
    p.commits = j.value("commits", p.commits);
    p.bugs = j.value("bugs", p.bugs);
    p.programs = j.value("programs", p.programs);
    p.program_distribution = j.value("program_distribution", p.program_distribution);
    p.zipf_s = j.value("zipf_s", p.zipf_s);
    p.multi_bug_commit_rate = j.value("multi_bug_commit_rate", p.multi_bug_commit_rate);
    p.implicit_bug_rate = j.value("implicit_bug_rate", p.implicit_bug_rate);
    p.trigger_passes_max = j.value("trigger_passes_max", p.trigger_passes_max);
    p.total_passes = j.value("total_passes", p.total_passes);
    p.crash_window_rate = j.value("crash_window_rate", p.crash_window_rate);
    p.crash_window_max_len = j.value("crash_window_max_len", p.crash_window_max_len);
    p.crash_window_avoid_boundary = j.value("crash_window_avoid_boundary", p.crash_window_avoid_boundary);
    p.manifestation_shift_rate = j.value("manifestation_shift_rate", p.manifestation_shift_rate);
    p.manifestation_shift_max = j.value("manifestation_shift_max", p.manifestation_shift_max);
    return p;
}

nlohmann::json world_params_to_json(const WorldParams& p) {
    return nlohmann::json{{"commits", p.commits},
                          {"bugs", p.bugs},
                          {"programs", p.programs},
                          {"program_distribution", p.program_distribution},
                          {"zipf_s", p.zipf_s},
                          {"multi_bug_commit_rate", p.multi_bug_commit_rate},
                          {"implicit_bug_rate", p.implicit_bug_rate},
                          {"trigger_passes_max", p.trigger_passes_max},
                          {"total_passes", p.total_passes},
                          {"crash_window_rate", p.crash_window_rate},
                          {"crash_window_max_len", p.crash_window_max_len},
                          {"crash_window_avoid_boundary", p.crash_window_avoid_boundary},
                          {"manifestation_shift_rate", p.manifestation_shift_rate},
                          {"manifestation_shift_max", p.manifestation_shift_max}};
}

WorldParams preset_params(const std::string& name) {
    WorldParams p;
    if (name == "gcc430-shape") {
        p.commits = 2048;
        p.bugs = 29;
        p.programs = 1235;
        p.zipf_s = 1.1;
        p.multi_bug_commit_rate = 0.30;
        p.implicit_bug_rate = 0.05;
        p.total_passes = 48;
    } else if (name == "gcc440-shape") {
        p.commits = 1024;
        p.bugs = 11;
        p.programs = 647;
        p.zipf_s = 1.1;
        p.multi_bug_commit_rate = 0.25;
        p.implicit_bug_rate = 0.05;
        p.total_passes = 48;
    } else if (name == "gcc450-shape") {
        p.commits = 512;
        p.bugs = 7;
        p.programs = 26;
        p.zipf_s = 1.0;
        p.multi_bug_commit_rate = 0.20;
        p.total_passes = 40;
    } else if (name == "llvm280-shape") {
        p.commits = 768;
        p.bugs = 5;
        p.programs = 80;
        p.zipf_s = 1.0;
        p.multi_bug_commit_rate = 0.20;
        p.total_passes = 40;
    } else if (name == "gcc430-unminimized-shape") {
        // RQ3 flavor: same shape plus bisection noise from unminimized inputs.
        p = preset_params("gcc430-shape");
        p.crash_window_rate = 0.10;
        p.manifestation_shift_rate = 0.05;
    } else if (name == "mini") {
        p.commits = 64;
        p.bugs = 3;
        p.programs = 12;
        p.multi_bug_commit_rate = 0.50;
        p.total_passes = 12;
    } else {
        throw UnknownEntity("unknown preset '" + name + "'");
    }
    return p;
}

std::vector<std::string> preset_names() {
    return {"gcc430-shape", "gcc440-shape", "gcc450-shape", "llvm280-shape",
            "gcc430-unminimized-shape", "mini"};
}

World generate_world(const WorldParams& params, std::uint64_t seed) {
    if (params.commits < 2) {
        throw InfeasibleParams("commits must be >= 2");
    }
    if (params.bugs < 1) {
        throw InfeasibleParams("bugs must be >= 1");
    }
    if (params.programs < params.bugs) {
        throw InfeasibleParams("programs must be >= bugs so every bug is covered");
    }
    if (params.total_passes < 1) {
        throw InfeasibleParams("total_passes must be >= 1");
    }
    if (params.trigger_passes_max > params.total_passes) {
        throw InfeasibleParams("trigger_passes_max exceeds the pass universe");
    }

    World world;
    std::mt19937_64 rng(mix64(seed));

    // Pass universe: nested explicit sets; O0 enables nothing explicitly.
    PassUniverse universe;
    for (std::size_t i = 0; i < params.total_passes; ++i) {
        universe.passes.push_back(format_id("pass-", i));
    }
    universe.level_sets["O0"] = {};
    universe.level_sets["O1"] = prefix_of(universe.passes, 0.30);
    universe.level_sets["Os"] = prefix_of(universe.passes, 0.45);
    universe.level_sets["O2"] = prefix_of(universe.passes, 0.60);
    universe.level_sets["O3"] = universe.passes;
    world.universe = universe;

    // History: strictly increasing timestamps, markers every ceil(c/10) plus endpoints.
    std::vector<Commit> commits;
    std::int64_t t = 1'500'000'000;
    for (std::size_t i = 0; i < params.commits; ++i) {
        t += static_cast<std::int64_t>(uniform_range(rng, 60, 86400));
        commits.push_back(Commit{format_id("c", i), t, i});
    }
    std::vector<std::string> markers;
    const std::size_t step = (params.commits + 9) / 10;
    for (std::size_t i = 0; i < params.commits - 1; i += step) {
        markers.push_back(commits[i].id);
    }
    markers.push_back(commits[params.commits - 1].id);
    world.history = CommitHistory(std::move(commits), std::move(markers));

    // Bugs. Shared-commit bugs are forced to carry distinct (level, trigger)
    // pairs so the optimization vector can separate them.
    const std::array<OptLevel, 4> leveled = {OptLevel::O1, OptLevel::O2, OptLevel::O3, OptLevel::Os};
    auto sample_signature = [&](bool implicit) -> std::pair<OptLevel, std::vector<std::string>> {
        if (implicit) {
            OptLevel level = kAllLevels[uniform_below(rng, kAllLevels.size())];
            return {level, {}};
        }
        OptLevel level = leveled[uniform_below(rng, leveled.size())];
        std::vector<std::string> pool = universe.level_set(level);
        std::size_t want = static_cast<std::size_t>(
            uniform_range(rng, 1, std::min(params.trigger_passes_max, pool.size())));
        shuffle_deterministic(pool, rng);
        std::vector<std::string> trigger(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(want));
        auto index = universe.pass_index();
        std::sort(trigger.begin(), trigger.end(), [&](const std::string& a, const std::string& b) {
            return index.at(a) < index.at(b);
        });
        return {level, trigger};
    };

    for (std::size_t b = 0; b < params.bugs; ++b) {
        BugSpec bug;
        bug.label = format_id("bug-", b);
        bool share = b > 0 && uniform01(rng) < params.multi_bug_commit_rate;
        bug.inducing_ordinal = share
                                   ? world.bugs[b - 1].inducing_ordinal
                                   : static_cast<std::size_t>(uniform_range(rng, 1, params.commits - 1));
        bool implicit = uniform01(rng) < params.implicit_bug_rate;
        for (int attempt = 0; attempt < 64; ++attempt) {
            auto [level, trigger] = sample_signature(implicit);
            bug.level = level;
            bug.trigger_passes = trigger;
            bool clashes = false;
            for (const BugSpec& other : world.bugs) {
                if (other.inducing_ordinal == bug.inducing_ordinal && other.level == bug.level &&
                    other.trigger_passes == bug.trigger_passes) {
                    clashes = true;
                    break;
                }
            }
            if (!clashes) {
                break;
            }
            if (attempt == 20) {
                implicit = false;  // implicit signatures only differ by level; widen the pool
            }
            if (attempt == 62) {
                bug.inducing_ordinal =
                    static_cast<std::size_t>(uniform_range(rng, 1, params.commits - 1));
            }
        }
        world.bugs.push_back(std::move(bug));
    }

    // Programs per bug: everyone gets one, the rest follow the distribution.
    std::vector<std::size_t> per_bug(params.bugs, 1);
    std::vector<double> weights(params.bugs, 1.0);
    if (params.program_distribution == "zipf") {
        for (std::size_t b = 0; b < params.bugs; ++b) {
            weights[b] = std::pow(static_cast<double>(b + 1), -params.zipf_s);
        }
    } else if (params.program_distribution != "uniform") {
        throw InfeasibleParams("unknown program_distribution '" + params.program_distribution + "'");
    }
    double total_weight = 0.0;
    for (double w : weights) {
        total_weight += w;
    }
    for (std::size_t extra = params.bugs; extra < params.programs; ++extra) {
        double pick = uniform01(rng) * total_weight;
        std::size_t chosen = params.bugs - 1;
        for (std::size_t b = 0; b < params.bugs; ++b) {
            pick -= weights[b];
            if (pick < 0) {
                chosen = b;
                break;
            }
        }
        ++per_bug[chosen];
    }

    std::size_t next_program = 0;
    for (std::size_t b = 0; b < params.bugs; ++b) {
        for (std::size_t i = 0; i < per_bug[b]; ++i) {
            TestProgram p;
            p.id = format_id("p", next_program++);
            p.source_ref = "sim://" + p.id;
            p.fail_level = to_string(world.bugs[b].level);
            p.ground_truth_bug = world.bugs[b].label;
            world.programs.push_back(std::move(p));
        }
    }

    // Noise: manifestation shifts first, then crash windows relative to the
    // (possibly shifted) first-failing ordinal.
    const std::size_t last = params.commits - 1;
    for (const TestProgram& p : world.programs) {
        if (params.manifestation_shift_rate <= 0.0 ||
            uniform01(rng) >= params.manifestation_shift_rate) {
            continue;
        }
        std::size_t base = world.bug_of(p.id).inducing_ordinal;
        if (base >= last) {
            continue;
        }
        std::size_t shifted = base + static_cast<std::size_t>(
                                         uniform_range(rng, 1, params.manifestation_shift_max));
        shifted = std::min(shifted, last);
        if (shifted > base) {
            world.noise.manifestation_shift[p.id] = shifted;
        }
    }
    for (const TestProgram& p : world.programs) {
        if (params.crash_window_rate <= 0.0 || uniform01(rng) >= params.crash_window_rate) {
            continue;
        }
        if (params.commits < 4) {
            continue;  // no interior room for a window
        }
        std::size_t e = world.effective_inducing(p.id);
        for (int attempt = 0; attempt < 50; ++attempt) {
            std::size_t len = static_cast<std::size_t>(
                uniform_range(rng, 1, std::max<std::size_t>(params.crash_window_max_len, 1)));
            len = std::min(len, params.commits - 3);
            // Windows stay inside (0, last): ordinal 0 keeps a passing marker
            // alive and the tail marker must stay decidable.
            std::size_t start = static_cast<std::size_t>(uniform_range(rng, 1, last - len));
            CrashWindow window{start, start + len - 1};
            bool covers_boundary = window.contains(e) || (e > 0 && window.contains(e - 1));
            if (params.crash_window_avoid_boundary && covers_boundary) {
                continue;
            }
            world.noise.crash_windows[p.id] = window;
            break;
        }
    }

    return world;
}

namespace {

OracleVerdict verdict_core(const Commit& commit, const BugSpec& bug, std::size_t effective,
                           const CrashWindow* window, const OptConfig& config) {
    if (window && window->contains(commit.ordinal)) {
        return {Outcome::Indeterminate, "compiler crash at " + commit.id};
    }
    bool present = commit.ordinal >= effective;
    if (bug.fixed_ordinal && commit.ordinal >= *bug.fixed_ordinal) {
        present = false;
    }
    if (config.level != bug.level) {
        present = false;
    }
    if (present) {
        for (const std::string& pass : bug.trigger_passes) {
            if (config.disabled.count(pass)) {
                present = false;
                break;
            }
        }
    }
    return present ? OracleVerdict{Outcome::Fail, "miscompilation observed"}
                   : OracleVerdict{Outcome::Pass, ""};
}

}  // namespace

OracleVerdict sim_verdict(const World& world, const OracleQuery& query) {
    const Commit* commit = world.history.find(query.commit_id);
    if (!commit) {
        throw UnknownEntity("unknown commit '" + query.commit_id + "'");
    }
    const BugSpec& bug = world.bug_of(query.program_id);
    const std::size_t effective = world.effective_inducing(query.program_id);
    auto window = world.noise.crash_windows.find(query.program_id);
    const CrashWindow* window_ptr =
        window == world.noise.crash_windows.end() ? nullptr : &window->second;
    return verdict_core(*commit, bug, effective, window_ptr, query.config);
}

SimOracle::SimOracle(const World& world) : world_(world) {
    // Resolve each program once; verdicts after that are map-free.
    for (const TestProgram& p : world.programs) {
        ProgramContext ctx;
        ctx.bug = &world.bug_of(p.id);
        ctx.effective_inducing = world.effective_inducing(p.id);
        auto window = world.noise.crash_windows.find(p.id);
        ctx.window = window == world.noise.crash_windows.end() ? nullptr : &window->second;
        contexts_.emplace(p.id, ctx);
    }
}

void SimOracle::build_version(const std::string& commit_id) {
    if (!world_.history.find(commit_id)) {
        throw BuildFailure(commit_id, "commit not in history");
    }
}

OracleVerdict SimOracle::test_program(const OracleQuery& query) {
    const Commit* commit = world_.history.find(query.commit_id);
    if (!commit) {
        throw UnknownEntity("unknown commit '" + query.commit_id + "'");
    }
    auto it = contexts_.find(query.program_id);
    if (it == contexts_.end()) {
        throw UnknownEntity("unknown program '" + query.program_id + "'");
    }
    const ProgramContext& ctx = it->second;
    return verdict_core(*commit, *ctx.bug, ctx.effective_inducing, ctx.window, query.config);
}

nlohmann::json truth_to_json(const std::vector<BugSpec>& bugs, const NoiseSpec& noise) {
    nlohmann::json bug_arr = nlohmann::json::array();
    for (const BugSpec& bug : bugs) {
        nlohmann::json bj{{"label", bug.label},
                          {"inducing_ordinal", bug.inducing_ordinal},
                          {"level", to_string(bug.level)},
                          {"trigger_passes", bug.trigger_passes}};
        if (bug.fixed_ordinal) {
            bj["fixed_ordinal"] = *bug.fixed_ordinal;
        }
        bug_arr.push_back(std::move(bj));
    }
    nlohmann::json windows = nlohmann::json::object();
    for (const auto& [pid, window] : noise.crash_windows) {
        windows[pid] = nlohmann::json{{"lo", window.lo}, {"hi", window.hi}};
    }
    nlohmann::json shifts = nlohmann::json::object();
    for (const auto& [pid, ordinal] : noise.manifestation_shift) {
        shifts[pid] = ordinal;
    }
    return nlohmann::json{
        {"bugs", std::move(bug_arr)},
        {"noise", nlohmann::json{{"crash_windows", std::move(windows)},
                                 {"manifestation_shift", std::move(shifts)}}}};
}

void truth_from_json(const nlohmann::json& j, std::vector<BugSpec>& bugs, NoiseSpec& noise) {
    bugs.clear();
    noise = NoiseSpec{};
    for (const nlohmann::json& bj : j.at("bugs")) {
        BugSpec bug;
        bug.label = bj.at("label").get<std::string>();
        bug.inducing_ordinal = bj.at("inducing_ordinal").get<std::size_t>();
        auto level = parse_opt_level(bj.at("level").get<std::string>());
        if (!level) {
            throw DatasetError("truth: unrecognized level for bug '" + bug.label + "'");
        }
        bug.level = *level;
        bug.trigger_passes = bj.at("trigger_passes").get<std::vector<std::string>>();
        if (bj.contains("fixed_ordinal")) {
            bug.fixed_ordinal = bj.at("fixed_ordinal").get<std::size_t>();
        }
        bugs.push_back(std::move(bug));
    }
    const nlohmann::json& nj = j.at("noise");
    for (const auto& [pid, wj] : nj.at("crash_windows").items()) {
        noise.crash_windows[pid] =
            CrashWindow{wj.at("lo").get<std::size_t>(), wj.at("hi").get<std::size_t>()};
    }
    for (const auto& [pid, ordinal] : nj.at("manifestation_shift").items()) {
        noise.manifestation_shift[pid] = ordinal.get<std::size_t>();
    }
}

}  // namespace buglens
