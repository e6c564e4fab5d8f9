#pragma once

#include <stdexcept>
#include <string>

namespace offsim {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration (bad scenario file, invalid
/// hardware/model fields, unknown preset). CLI exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// Structurally valid scenario that cannot run on the given hardware
/// (working set exceeds GPU memory, checkpoints exceed CPU memory under a
/// CPU-only placement). CLI exit code 3.
struct InfeasibleError : Error {
    using Error::Error;
};

/// A simulation or trace invariant was violated (deadlock, memory
/// overflow, corrupted trace). CLI exit code 4.
struct InvariantError : Error {
    using Error::Error;
};

} // namespace offsim
