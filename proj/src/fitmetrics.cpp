#include "blocknem/fitmetrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace blocknem {

const char* ideal_kind_name(IdealKind kind) {
    switch (kind) {
        case IdealKind::CoreCohesive: return "core-cohesive";
        case IdealKind::Cohesive: return "cohesive";
        case IdealKind::CorePeriphery: return "core-periphery";
    }
    throw std::invalid_argument("unknown ideal kind");
}

IdealKind ideal_kind_from_name(const std::string& name) {
    if (name == "core-cohesive") return IdealKind::CoreCohesive;
    if (name == "cohesive") return IdealKind::Cohesive;
    if (name == "core-periphery") return IdealKind::CorePeriphery;
    throw std::invalid_argument("unknown ideal type: " + name);
}

BlockImage ideal_image(IdealKind kind, int k) {
    switch (kind) {
        case IdealKind::CoreCohesive: {
            if (k < 3) throw std::invalid_argument("core-cohesive image needs k >= 3");
            BlockImage image(k, BlockType::Null);
            for (int g = 0; g < k; ++g) {
                image.set(g, g, BlockType::Complete);
                image.set(0, g, BlockType::Complete);
                image.set(g, 0, BlockType::Complete);
            }
            return image;
        }
        case IdealKind::Cohesive: {
            if (k < 2) throw std::invalid_argument("cohesive image needs k >= 2");
            BlockImage image(k, BlockType::Null);
            for (int g = 0; g < k; ++g) image.set(g, g, BlockType::Complete);
            return image;
        }
        case IdealKind::CorePeriphery: {
            if (k != 2) throw std::invalid_argument("core-periphery image needs k == 2");
            BlockImage image(2, BlockType::Complete);
            image.set(1, 1, BlockType::Null);
            return image;
        }
    }
    throw std::invalid_argument("unknown ideal kind");
}

int inconsistent_blocks(const BlockImage& observed, const BlockImage& ideal) {
    if (observed.k != ideal.k)
        throw std::invalid_argument("inconsistent_blocks: image dimensions differ");
    const int k = observed.k;
    if (k > 8) throw std::invalid_argument("inconsistent_blocks: exhaustive matching limited to k <= 8");

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    int best = k * k + 1;
    do {
        int differing = 0;
        for (int g = 0; g < k; ++g)
            for (int h = 0; h < k; ++h)
                if (observed.at(perm[g], perm[h]) != ideal.at(g, h)) ++differing;
        best = std::min(best, differing);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

BinaryNetwork randomize(const BinaryNetwork& net, Rng& rng) {
    const int n = net.size();
    std::vector<std::pair<int, int>> positions;
    if (net.directed()) {
        positions.reserve(static_cast<std::size_t>(n) * (n - 1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) positions.emplace_back(i, j);
    } else {
        positions.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) positions.emplace_back(i, j);
    }

    const long long links = net.link_count();
    BinaryNetwork out(n, net.directed());
    // partial Fisher-Yates: the first `links` slots are a uniform sample
    for (long long t = 0; t < links; ++t) {
        const int span = static_cast<int>(positions.size() - t);
        const long long pick = t + rng.uniform_int(span);
        std::swap(positions[t], positions[pick]);
        out.set_link(positions[t].first, positions[t].second, true);
    }
    return out;
}

RfReport relative_fit(const BinaryNetwork& net, IdealKind kind, int k, int k_rand, int restarts,
                      Rng& rng) {
    if (k_rand < 1) throw std::invalid_argument("relative_fit: need at least one randomization");
    const BlockImage image = ideal_image(kind, k);

    RfReport report;
    report.kind = kind;
    report.k = k;
    report.restarts = restarts;
    report.p_empirical = fit_blockmodel(net, k, restarts, image, rng).criterion;
    report.p_baseline.reserve(k_rand);
    long long baseline_sum = 0;
    for (int i = 0; i < k_rand; ++i) {
        const BinaryNetwork shuffled = randomize(net, rng);
        const long long p = fit_blockmodel(shuffled, k, restarts, image, rng).criterion;
        report.p_baseline.push_back(p);
        baseline_sum += p;
    }
    if (baseline_sum > 0) {
        const double mean = static_cast<double>(baseline_sum) / static_cast<double>(k_rand);
        report.rf = 1.0 - static_cast<double>(report.p_empirical) / mean;
    } else if (report.p_empirical == 0) {
        report.rf = 1.0;
    }  // else: degenerate baseline, rf stays unset
    return report;
}

RfReport relative_fit_directed(const BinaryNetwork& directed_net, IdealKind kind, int k,
                               int k_rand, int restarts, Rng& rng) {
    if (!directed_net.directed())
        throw std::invalid_argument("relative_fit_directed: network must be directed");
    if (k_rand < 1) throw std::invalid_argument("relative_fit_directed: need at least one randomization");
    const BlockImage image = ideal_image(kind, k);

    RfReport report;
    report.kind = kind;
    report.k = k;
    report.restarts = restarts;
    const BinaryNetwork analyzed = symmetrize_union(directed_net);
    report.p_empirical = fit_blockmodel(analyzed, k, restarts, image, rng).criterion;
    report.p_baseline.reserve(k_rand);
    long long baseline_sum = 0;
    for (int i = 0; i < k_rand; ++i) {
        const BinaryNetwork shuffled = symmetrize_union(randomize(directed_net, rng));
        const long long p = fit_blockmodel(shuffled, k, restarts, image, rng).criterion;
        report.p_baseline.push_back(p);
        baseline_sum += p;
    }
    if (baseline_sum > 0) {
        const double mean = static_cast<double>(baseline_sum) / static_cast<double>(k_rand);
        report.rf = 1.0 - static_cast<double>(report.p_empirical) / mean;
    } else if (report.p_empirical == 0) {
        report.rf = 1.0;
    }
    return report;
}

std::string rf_report_json(const RfReport& report) {
    nlohmann::json j;
    j["ideal_type"] = ideal_kind_name(report.kind);
    j["k"] = report.k;
    j["restarts"] = report.restarts;
    j["k_rand"] = report.p_baseline.size();
    j["p_empirical"] = report.p_empirical;
    j["p_baseline"] = report.p_baseline;
    if (report.rf)
        j["rf"] = *report.rf;
    else
        j["rf"] = nullptr;
    return j.dump(2);
}

}  // namespace blocknem
