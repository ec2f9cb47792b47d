#pragma once

#include <stdexcept>
#include <string>

namespace buglens {

/// Base class for all buglens errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A dataset file is missing, unreadable, or malformed. Maps to exit code 2.
struct DatasetError : Error {
    using Error::Error;
};

/// A compiler version could not be produced at all. Distinct from an
/// INDETERMINATE verdict, which means "built but undecidable".
struct BuildFailure : Error {
    std::string commit_id;
    BuildFailure(std::string commit, const std::string& detail)
        : Error("build failure at commit " + commit + ": " + detail), commit_id(std::move(commit)) {}
};

/// A checkout/build or test step exceeded the per-step timeout. Surfaces as an
/// INDETERMINATE verdict with detail "timeout".
struct CommandTimeout : Error {
    std::string commit_id;
    explicit CommandTimeout(std::string commit)
        : Error("timeout at commit " + commit), commit_id(std::move(commit)) {}
};

/// Every release marker fails: the bug predates recorded history.
struct NoGoodVersion : Error {
    using Error::Error;
};

/// The range walk ran out of markers with at least one INDETERMINATE verdict;
/// a good boundary cannot be certified.
struct IndeterminateBoundary : Error {
    using Error::Error;
};

/// The remaining candidate interval consists entirely of skipped commits; the
/// inducing commit cannot be isolated.
struct InconclusiveRegion : Error {
    using Error::Error;
};

/// A verification re-query contradicted the bisection result.
struct FlakyOracle : Error {
    using Error::Error;
};

/// The failure could not be established at the probe commit.
struct NotReproducibleAtCommit : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct MissingLabel : Error {
    std::string program_id;
    explicit MissingLabel(std::string id)
        : Error("no ground-truth label for program " + id), program_id(std::move(id)) {}
};

/// All paired differences are zero (or no sample remains after dropping them).
struct DegenerateSample : Error {
    using Error::Error;
};

struct UnknownEntity : Error {
    using Error::Error;
};

struct InfeasibleParams : Error {
    using Error::Error;
};

}  // namespace buglens
