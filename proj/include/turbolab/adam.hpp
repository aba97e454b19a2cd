#pragma once

#include <cmath>
#include <stdexcept>

#include "turbolab/turbonet.hpp"

namespace turbolab {

/// Bias-corrected ADAM. Moment accumulators share the WeightSet shape.
struct AdamState {
    WeightSet m;
    WeightSet v;
    long long t = 0;
};

inline AdamState make_adam_state(int units, int block_len) {
    return {WeightSet::zeros(units, block_len), WeightSet::zeros(units, block_len), 0};
}

inline void adam_step(WeightSet& w, const WeightSet& g, AdamState& st, double lr,
                      double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8) {
    if (g.values.size() != w.values.size() || st.m.values.size() != w.values.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    st.t += 1;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.t));
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        const double gi = g.values[i];
        double& m = st.m.values[i];
        double& v = st.v.values[i];
        m = beta1 * m + (1.0 - beta1) * gi;
        v = beta2 * v + (1.0 - beta2) * gi * gi;
        w.values[i] -= lr * (m / bc1) / (std::sqrt(v / bc2) + eps);
    }
}

}  // namespace turbolab
