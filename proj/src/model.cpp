#include "accelerograph/model.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "accelerograph/errors.hpp"

namespace accelerograph {

namespace {

constexpr std::array<AlphabetEntry, 26> kAlphabet = {{
    {'A', "U", 0.08167},     {'B', "RR", 0.01492},   {'C', "L", 0.02782},
    {'D', "R", 0.04253},     {'E', "LL", 0.12702},   {'F', "LU", 0.02228},
    {'G', "UL", 0.02015},    {'H', "RL", 0.06094},   {'I', "UD", 0.06966},
    {'J', "RD", 0.00153},    {'K', "LUD", 0.00772},  {'L', "LD", 0.04025},
    {'M', "UU", 0.02406},    {'N', "RUL", 0.06749},  {'O', "ULDR", 0.07507},
    {'P', "DR", 0.01929},    {'Q', "DRULD", 0.00095}, {'R', "LRR", 0.05987},
    {'S', "ULD", 0.06327},   {'T', "DLR", 0.09056},  {'U', "LDR", 0.02758},
    {'V', "D", 0.00978},     {'W', "DD", 0.02360},   {'X', "UDLR", 0.00150},
    {'Y', "LRD", 0.01974},   {'Z', "URLD", 0.00074},
}};

}  // namespace

char to_char(GesturePrimitive p) noexcept {
    switch (p) {
        case GesturePrimitive::L: return 'L';
        case GesturePrimitive::U: return 'U';
        case GesturePrimitive::R: return 'R';
        case GesturePrimitive::D: return 'D';
    }
    return '?';
}

std::optional<GesturePrimitive> primitive_from_char(char c) noexcept {
    switch (c) {
        case 'L': return GesturePrimitive::L;
        case 'U': return GesturePrimitive::U;
        case 'R': return GesturePrimitive::R;
        case 'D': return GesturePrimitive::D;
        default: return std::nullopt;
    }
}

std::string_view to_string(AxisClass a) noexcept {
    switch (a) {
        case AxisClass::XAxis: return "x";
        case AxisClass::YAxis: return "y";
        case AxisClass::BothAxes: return "both";
    }
    return "?";
}

AxisClass axis_class_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "x") return AxisClass::XAxis;
    if (lower == "y") return AxisClass::YAxis;
    if (lower == "both") return AxisClass::BothAxes;
    throw FormatError("unknown axis class '" + std::string(s) + "'");
}

std::span<const AlphabetEntry> alphabet_table() noexcept { return kAlphabet; }

char normalize_letter(char letter) {
    const auto c = static_cast<unsigned char>(letter);
    if (!std::isalpha(c)) throw UnknownLetter(std::string("unknown letter '") + letter + "'");
    return static_cast<char>(std::toupper(c));
}

const AlphabetEntry& lookup(char letter) {
    const char upper = normalize_letter(letter);
    return kAlphabet[static_cast<std::size_t>(upper - 'A')];
}

std::size_t gesture_length(char letter) { return lookup(letter).gesture.size(); }

std::vector<GesturePrimitive> gesture_primitives(char letter) {
    std::vector<GesturePrimitive> out;
    for (char c : lookup(letter).gesture) out.push_back(*primitive_from_char(c));
    return out;
}

double mean_gesture_length() noexcept {
    double total = 0.0;
    for (const auto& e : kAlphabet) total += static_cast<double>(e.gesture.size()) * e.rel_freq;
    return total;
}

AxisClass expected_axis_class(char letter) {
    const auto prims = gesture_primitives(letter);
    const bool all_x = std::all_of(prims.begin(), prims.end(), moves_along_x);
    const bool all_y = std::none_of(prims.begin(), prims.end(), moves_along_x);
    if (all_x) return AxisClass::XAxis;
    if (all_y) return AxisClass::YAxis;
    return AxisClass::BothAxes;
}

}  // namespace accelerograph
