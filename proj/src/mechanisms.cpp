#include "blocknem/mechanisms.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace blocknem {

MechanismStats raw_stats(const BinaryNetwork& net, int focal) {
    const int n = net.size();
    if (focal < 0 || focal >= n) throw std::invalid_argument("raw_stats: focal unit out of range");

    MechanismStats s;
    s.focal = focal;
    s.candidates.reserve(n > 0 ? n - 1 : 0);
    for (int j = 0; j < n; ++j)
        if (j != focal) s.candidates.push_back(j);

    const Degrees deg = net.degrees();
    const std::uint8_t* focal_row = net.row(focal);
    for (auto& row : s.raw) row.reserve(s.candidates.size());

    for (const int j : s.candidates) {
        // an incoming tie still awaiting reciprocation
        s.raw[kMutuality].push_back(net.has_link(j, focal) && !net.has_link(focal, j) ? 1.0 : 0.0);
        s.raw[kPopularity].push_back(static_cast<double>(deg.in[j]));
        s.raw[kAssortativity].push_back(-static_cast<double>(std::abs(deg.in[focal] - deg.in[j])));

        int two_paths = 0;   // focal -> k -> j
        int shared_out = 0;  // focal -> k and j -> k
        const std::uint8_t* j_row = net.row(j);
        for (int k = 0; k < n; ++k) {
            if (k == focal || k == j) continue;
            if (focal_row[k]) {
                if (net.has_link(k, j)) ++two_paths;
                if (j_row[k]) ++shared_out;
            }
        }
        s.raw[kTransitivity].push_back(static_cast<double>(two_paths));
        s.raw[kOsp].push_back(static_cast<double>(shared_out));
    }
    return s;
}

std::vector<double> normalize_row(const std::vector<double>& raw) {
    if (raw.size() < 2)
        throw std::invalid_argument("normalize_row: need at least two candidates");
    const auto [min_it, max_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *min_it, hi = *max_it;
    std::vector<double> out(raw.size(), 0.0);
    if (hi > lo) {
        const double span = hi - lo;
        for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - lo) / span;
    }
    return out;
}

MechanismStats mechanism_stats(const BinaryNetwork& net, int focal) {
    MechanismStats s = raw_stats(net, focal);
    for (int m = 0; m < kMechanismCount; ++m) s.normalized[m] = normalize_row(s.raw[m]);
    return s;
}

std::vector<double> phi(const BinaryNetwork& net, int focal, const MechanismWeights& theta) {
    const MechanismStats s = mechanism_stats(net, focal);
    const std::array<double, kMechanismCount> w = theta.as_array();
    std::vector<double> out(s.candidates.size(), 0.0);
    for (int m = 0; m < kMechanismCount; ++m)
        for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] += w[m] * s.normalized[m][idx];
    return out;
}

}  // namespace blocknem
