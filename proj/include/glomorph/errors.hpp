#pragma once

#include <stdexcept>
#include <string>

namespace glomorph {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input/validation failures while assembling a case.
struct MissingFileError : Error {
    using Error::Error;
};
struct DimensionMismatchError : Error {
    using Error::Error;
};
struct IllegalLabelError : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

// The structure of interest is absent (or vanished after pruning).
struct EmptyStructureError : Error {
    using Error::Error;
};

// Aggregations over empty inputs.
struct NoMeasurementsError : Error {
    using Error::Error;
};
struct NoPatchesError : Error {
    using Error::Error;
};

// Statistics preconditions.
struct EmptySampleError : Error {
    using Error::Error;
};
struct DegenerateVarianceError : Error {
    using Error::Error;
};
struct SingleClassError : Error {
    using Error::Error;
};

// Phantom generation cannot satisfy the requested geometry.
struct SpecInfeasibleError : Error {
    using Error::Error;
};

}  // namespace glomorph
