#pragma once

#include <cmath>
#include <stdexcept>

namespace fbmh {

enum class HurstBranch { lowH, brownian, highH };

// Validated Hurst exponent with the derived kernel exponents used by the
// two proof branches: beta_low = 2H-1 (H < 1/2) and beta_high = 2H-2
// (H > 1/2), both in (-1, 0) on their branch.
class HurstParam {
public:
    static constexpr double kBrownianWindow = 1e-12;
    static constexpr double kSpecialWindow = 1e-6;  // H near 1/4 or 3/4

    explicit HurstParam(double h) : h_(h) {
        if (!(h > 0.0 && h < 1.0)) throw std::domain_error("HurstParam: H must lie in (0, 1)");
    }

    double value() const { return h_; }
    double beta_low() const { return 2.0 * h_ - 1.0; }
    double beta_high() const { return 2.0 * h_ - 2.0; }

    HurstBranch branch() const {
        if (std::abs(h_ - 0.5) <= kBrownianWindow) return HurstBranch::brownian;
        return h_ < 0.5 ? HurstBranch::lowH : HurstBranch::highH;
    }
    bool is_brownian() const { return branch() == HurstBranch::brownian; }
    bool near_quarter(double eps = kSpecialWindow) const { return std::abs(h_ - 0.25) < eps; }
    bool near_three_quarters(double eps = kSpecialWindow) const { return std::abs(h_ - 0.75) < eps; }

private:
    double h_;
};

inline const char* branch_name(HurstBranch b) {
    switch (b) {
        case HurstBranch::lowH: return "lowH";
        case HurstBranch::brownian: return "brownian";
        case HurstBranch::highH: return "highH";
    }
    return "?";
}

}  // namespace fbmh
