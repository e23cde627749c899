#include "accelerograph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "accelerograph/errors.hpp"

namespace accelerograph {

void validate(const SynthConfig& config) {
    if (!(config.sample_period_ms > 0.0)) throw ConfigError("sample period must be positive");
    if (config.pulse_duration < 2) throw ConfigError("pulse duration must be at least 2 samples");
    if (config.jerk_duration < 2) throw ConfigError("jerk duration must be at least 2 samples");
    if (config.noise_sd < 0.0 || config.jerk_amplitude_sd < 0.0 || config.pulse_amplitude < 0.0)
        throw ConfigError("amplitudes and noise levels must be non-negative");
    if (config.amplitude_jitter < 0.0 || config.amplitude_jitter >= 1.0 || config.duration_jitter < 0.0 ||
        config.duration_jitter >= 1.0)
        throw ConfigError("jitter fractions must lie in [0, 1)");
}

void AxisSamples::append(const AxisSamples& other) {
    x.insert(x.end(), other.x.begin(), other.x.end());
    y.insert(y.end(), other.y.begin(), other.y.end());
    z.insert(z.end(), other.z.begin(), other.z.end());
}

namespace {

void push_noisy(AxisSamples& out, double x, double y, double sd, SynthRng& rng) {
    out.x.push_back(x + sd * rng.normal());
    out.y.push_back(y + sd * rng.normal());
    out.z.push_back(kGravity + sd * rng.normal());
}

AxisSamples quiet(std::size_t count, const SynthConfig& config, SynthRng& rng) {
    AxisSamples out;
    for (std::size_t i = 0; i < count; ++i) push_noisy(out, 0.0, 0.0, config.noise_sd, rng);
    return out;
}

}  // namespace

AxisSamples gen_primitive(GesturePrimitive p, const SynthConfig& config, SynthRng& rng) {
    const double amplitude =
        config.pulse_amplitude * rng.uniform(1.0 - config.amplitude_jitter, 1.0 + config.amplitude_jitter);
    const double stretch = rng.uniform(1.0 - config.duration_jitter, 1.0 + config.duration_jitter);
    const auto duration = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::lround(static_cast<double>(config.pulse_duration) * stretch)));

    double dx = 0.0, dy = 0.0;
    switch (p) {
        case GesturePrimitive::R: dx = 1.0; break;
        case GesturePrimitive::L: dx = -1.0; break;
        case GesturePrimitive::D: dy = 1.0; break;
        case GesturePrimitive::U: dy = -1.0; break;
    }

    AxisSamples out;
    out.x.reserve(duration);
    out.y.reserve(duration);
    out.z.reserve(duration);
    for (std::size_t s = 0; s < duration; ++s) {
        const double lobe =
            amplitude * std::sin(std::numbers::pi * static_cast<double>(s) / static_cast<double>(duration));
        push_noisy(out, dx * lobe, dy * lobe, config.noise_sd, rng);
    }
    return out;
}

AxisSamples gen_letter(char letter, const SynthConfig& config, SynthRng& rng) {
    const auto prims = gesture_primitives(letter);
    AxisSamples out;
    for (std::size_t i = 0; i < prims.size(); ++i) {
        if (i > 0) out.append(quiet(kPrimitiveGap, config, rng));
        out.append(gen_primitive(prims[i], config, rng));
    }
    return out;
}

AxisSamples gen_jerk(const SynthConfig& config, SynthRng& rng) {
    AxisSamples out;
    // uniform on [-h, h] has standard deviation h / sqrt(3)
    const double h = std::sqrt(3.0) * config.jerk_amplitude_sd;
    for (std::size_t i = 0; i < config.jerk_duration; ++i) {
        out.x.push_back(rng.uniform(-h, h));
        out.y.push_back(rng.uniform(-h, h));
        out.z.push_back(kGravity + rng.uniform(-h, h));
    }
    return out;
}

SynthStream gen_stream(std::string_view letters, const SynthConfig& config) {
    validate(config);
    if (letters.empty()) throw ConfigError("synthetic stream needs at least one letter");
    SynthRng rng(config.seed);
    SynthStream stream;
    AxisSamples all = gen_jerk(config, rng);
    for (char raw : letters) {
        const char letter = normalize_letter(raw);
        const AxisSamples body = gen_letter(letter, config, rng);
        stream.letter_spans.emplace_back(all.size(), all.size() + body.size() - 1);
        stream.truth += letter;
        all.append(body);
        all.append(gen_jerk(config, rng));
    }
    stream.trace.sample_period = config.sample_period_ms;
    stream.trace.samples.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        stream.trace.samples.push_back(
            {config.sample_period_ms * static_cast<double>(i), all.x[i], all.y[i], all.z[i]});
    return stream;
}

std::string random_letters(std::size_t count, std::mt19937_64& engine) {
    std::vector<double> weights;
    for (const auto& e : alphabet_table()) weights.push_back(e.rel_freq);
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    std::string out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out += static_cast<char>('A' + pick(engine));
    return out;
}

}  // namespace accelerograph
