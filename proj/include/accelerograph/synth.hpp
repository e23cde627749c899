#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "accelerograph/model.hpp"

namespace accelerograph {

inline constexpr double kGravity = 9.81;
inline constexpr std::size_t kPrimitiveGap = 5;  ///< quiet samples between primitives

/// Parameters of the synthetic accelerometer generator.
struct SynthConfig {
    double sample_period_ms = 10.0;
    std::size_t pulse_duration = 40;   ///< samples per primitive lobe
    double pulse_amplitude = 3.0;      ///< m/s^2
    double noise_sd = 0.15;            ///< m/s^2, every axis, every sample
    std::size_t jerk_duration = 20;    ///< samples
    double jerk_amplitude_sd = 6.0;    ///< m/s^2
    double amplitude_jitter = 0.15;    ///< fractional, uniform
    double duration_jitter = 0.15;     ///< fractional, uniform
    std::uint64_t seed = 1;
};

/// Throws ConfigError for non-positive durations/period or negative spreads.
void validate(const SynthConfig& config);

/// Seeded random source shared by the generator functions. Every sample draws
/// standard normals even at zero noise, so two configs that differ only in
/// noise level produce the same jitter sequence.
class SynthRng {
public:
    explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// Per-axis sample sequence (no timestamps).
struct AxisSamples {
    std::vector<double> x, y, z;

    std::size_t size() const noexcept { return x.size(); }
    void append(const AxisSamples& other);
};

/// One half-sine lobe A sin(pi s / T), s = 0..T-1, on the moving axis.
/// R -> +x, L -> -x, D -> +y, U -> -y; z carries gravity.
AxisSamples gen_primitive(GesturePrimitive p, const SynthConfig& config, SynthRng& rng);

/// The letter's primitives separated by kPrimitiveGap quiet samples.
AxisSamples gen_letter(char letter, const SynthConfig& config, SynthRng& rng);

/// Isotropic white-noise burst of jerk_duration samples: independent uniform
/// draws with standard deviation jerk_amplitude_sd on every axis, gravity on z.
AxisSamples gen_jerk(const SynthConfig& config, SynthRng& rng);

struct SynthStream {
    Trace trace;
    std::string truth;
    std::vector<std::pair<std::size_t, std::size_t>> letter_spans;  ///< inclusive sample ranges
};

/// jerk, letter, jerk, ..., letter, jerk. Seeded from config.seed.
SynthStream gen_stream(std::string_view letters, const SynthConfig& config);

/// Letters drawn i.i.d. from the alphabet's relative frequencies.
std::string random_letters(std::size_t count, std::mt19937_64& engine);

}  // namespace accelerograph
