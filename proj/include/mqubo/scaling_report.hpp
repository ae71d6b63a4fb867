#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mqubo {

enum class ScalingMethod { original, roof_dual, standardize };

inline std::string_view to_string(ScalingMethod m) {
    switch (m) {
        case ScalingMethod::original: return "original";
        case ScalingMethod::roof_dual: return "roof_dual";
        case ScalingMethod::standardize: return "standardize";
    }
    return "unknown";
}

inline std::optional<ScalingMethod> parse_scaling_method(std::string_view s) {
    if (s == "original") return ScalingMethod::original;
    if (s == "roof_dual") return ScalingMethod::roof_dual;
    if (s == "standardize") return ScalingMethod::standardize;
    return std::nullopt;
}

// How one objective of a set was rescaled. `scale` is the factor the matrix
// was multiplied by; the remaining fields are filled by the method that
// computed them and left empty otherwise.
struct ScalingReport {
    std::size_t index = 0;
    ScalingMethod method = ScalingMethod::original;
    double scale = 1.0;
    std::optional<double> mean;
    std::optional<double> variance;
    std::optional<double> sigma;
    std::optional<double> lower;
    std::optional<double> upper;
};

}  // namespace mqubo
