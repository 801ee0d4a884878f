#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pit {

struct PitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : PitError {
    using PitError::PitError;
};

struct SingularMatrix : PitError {
    using PitError::PitError;
};

struct NotAUnit : PitError {
    std::size_t coord;
    explicit NotAUnit(std::size_t coord_)
        : PitError("not a unit: zero at coordinate " + std::to_string(coord_)), coord(coord_) {}
};

struct EmptyPolynomial : PitError {
    using PitError::PitError;
};

struct IndexOutsidePartition : PitError {
    using PitError::PitError;
};

struct SchemaError : PitError {
    std::string path;
    SchemaError(const std::string& path_, const std::string& what_)
        : PitError("schema error at " + path_ + ": " + what_), path(path_) {}
};

struct PartitionViolation : PitError {
    using PitError::PitError;
};

struct NotNormalized : PitError {
    using PitError::PitError;
};

struct SearchExhausted : PitError {
    using PitError::PitError;
};

struct PreconditionViolated : PitError {
    using PitError::PitError;
};

struct NoCoordinateWitness : PitError {
    std::size_t coord;
    explicit NoCoordinateWitness(std::size_t coord_)
        : PitError("coordinate " + std::to_string(coord_) + " is identically zero"), coord(coord_) {}
};

struct BasisMismatch : PitError {
    using PitError::PitError;
};

struct FieldTooSmall : PitError {
    using PitError::PitError;
};

struct TooLarge : PitError {
    using PitError::PitError;
};

struct NoAlphaFound : PitError {
    using PitError::PitError;
};

struct NotADualForm : PitError {
    using PitError::PitError;
};

}  // namespace pit
