#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accelerograph {

/// One accelerometer reading. Time in milliseconds, acceleration in m/s^2.
struct AccelSample {
    double t = 0.0;
    double ax = 0.0;
    double ay = 0.0;
    double az = 0.0;

    bool operator==(const AccelSample&) const = default;
};

/// A single recording: samples with strictly increasing timestamps.
struct Trace {
    std::vector<AccelSample> samples;
    double sample_period = 0.0;  ///< nominal gap between samples, ms

    std::size_t size() const noexcept { return samples.size(); }
    bool operator==(const Trace&) const = default;
};

enum class GesturePrimitive : std::uint8_t { L, U, R, D };

char to_char(GesturePrimitive p) noexcept;
std::optional<GesturePrimitive> primitive_from_char(char c) noexcept;

/// True for L and R, the primitives that move along the x axis.
constexpr bool moves_along_x(GesturePrimitive p) noexcept {
    return p == GesturePrimitive::L || p == GesturePrimitive::R;
}

enum class AxisClass : std::uint8_t { XAxis, YAxis, BothAxes };

inline constexpr std::array<AxisClass, 3> kAxisClasses = {AxisClass::XAxis, AxisClass::YAxis,
                                                          AxisClass::BothAxes};

std::string_view to_string(AxisClass a) noexcept;
/// Accepts "x", "y", "both" (case-insensitive); throws FormatError otherwise.
AxisClass axis_class_from_string(std::string_view s);

struct AlphabetEntry {
    char letter;
    std::string_view gesture;  ///< sequence over {L, U, R, D}
    double rel_freq;           ///< probability, not percent
};

/// The 26-letter gesture alphabet with English relative letter frequencies.
std::span<const AlphabetEntry> alphabet_table() noexcept;

/// Throws UnknownLetter for anything outside A-Z (lower case is accepted).
const AlphabetEntry& lookup(char letter);

std::size_t gesture_length(char letter);

std::vector<GesturePrimitive> gesture_primitives(char letter);

/// Sum over the alphabet of gesture length weighted by relative frequency.
double mean_gesture_length() noexcept;

/// Axis family implied by a gesture string: single-axis iff every primitive
/// moves along the same axis.
AxisClass expected_axis_class(char letter);

/// Normalizes to upper case; throws UnknownLetter if not a letter.
char normalize_letter(char letter);

}  // namespace accelerograph
