// Exception types thrown across the library. Each maps to a distinct
// contract violation so callers and tests can discriminate.
#pragma once

#include <stdexcept>
#include <string>

namespace regret {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid value passed to a constructor or operation (bad probabilities,
/// tied payoffs, empty grids, malformed player partitions, ...).
struct InvalidArgument : Error {
    using Error::Error;
};

/// Objects from different state spaces / choice sets were mixed.
struct DomainMismatch : Error {
    using Error::Error;
};

/// A lottery or player index that does not exist in the target object.
struct UnknownLottery : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

/// Enumeration request beyond the supported instance size.
struct TooLarge : Error {
    using Error::Error;
};

/// Environment pair is not ordered by informativeness.
struct NotComparable : Error {
    using Error::Error;
};

/// Interior mixed equilibrium requested outside the coordination regime.
struct NoInteriorSolution : Error {
    using Error::Error;
};

/// Operation requires a common regret coefficient across players.
struct HeterogeneousKappas : Error {
    using Error::Error;
};

/// Configuration rejected during validation; carries the offending field path.
struct ConfigError : Error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : Error(field + ": " + what), field(field) {}
    std::string field;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace regret
