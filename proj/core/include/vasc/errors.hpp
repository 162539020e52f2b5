#ifndef VASC_ERRORS_HPP
#define VASC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vasc {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct BoundsError : Error {
    explicit BoundsError(const std::string& msg) : Error(msg) {}
};

struct EmptyFeatureSet : Error {
    explicit EmptyFeatureSet(const std::string& msg = "feature set is empty") : Error(msg) {}
};

struct EmptyMask : Error {
    explicit EmptyMask(const std::string& msg = "mask is empty") : Error(msg) {}
};

struct SeedOutsideRange : Error {
    explicit SeedOutsideRange(const std::string& msg) : Error(msg) {}
};

struct NoRootCandidate : Error {
    explicit NoRootCandidate(const std::string& msg = "graph has no endpoint nodes") : Error(msg) {}
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error(msg) {}
};

struct InvalidParameter : Error {
    explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error(msg) {}
};

struct SelfIntersection : Error {
    explicit SelfIntersection(const std::string& msg) : Error(msg) {}
};

struct InvalidSpec : Error {
    explicit InvalidSpec(const std::string& msg) : Error(msg) {}
};

struct TreeOutOfBounds : Error {
    explicit TreeOutOfBounds(const std::string& msg) : Error(msg) {}
};

struct CorruptData : Error {
    explicit CorruptData(const std::string& msg) : Error(msg) {}
};

struct UnsupportedFormat : Error {
    explicit UnsupportedFormat(const std::string& msg) : Error(msg) {}
};

} // namespace vasc

#endif
