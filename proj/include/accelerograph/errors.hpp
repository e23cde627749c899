#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace accelerograph {

/// Base of every error raised by the pipeline. Each subclass names one
/// failure class so callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input / configuration
class ConfigError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };
class TooShort : public Error { using Error::Error; };
class UnknownLetter : public Error { using Error::Error; };

// Training-set persistence
class VersionError : public Error { using Error::Error; };
class CorruptSet : public Error { using Error::Error; };

// Segmentation
class DegenerateInput : public Error { using Error::Error; };
class DegenerateFit : public Error { using Error::Error; };
class NoJerksDetected : public Error { using Error::Error; };

// Curve construction
class TooFewPoints : public Error { using Error::Error; };
class DegenerateSegment : public Error { using Error::Error; };

// Classification
class ShapeError : public Error { using Error::Error; };
class NoTemplatesForAxis : public Error { using Error::Error; };

// Evaluation
class EmptyExperiment : public Error { using Error::Error; };

class SegmentationMismatch : public Error {
public:
    SegmentationMismatch(std::size_t expected, std::size_t found)
        : Error("segmentation mismatch: expected " + std::to_string(expected) +
                " letters, found " + std::to_string(found)),
          expected_(expected), found_(found) {}

    std::size_t expected() const noexcept { return expected_; }
    std::size_t found() const noexcept { return found_; }

private:
    std::size_t expected_;
    std::size_t found_;
};

}  // namespace accelerograph
