// Block errors, the criterion function, classification, and the
// multi-restart local search, checked against exhaustive enumeration.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <limits>
#include <vector>

#include "blocknem/blockmodel.hpp"
#include "blocknem/network.hpp"
#include "blocknem/rng.hpp"

using namespace blocknem;

namespace {

// Test-side scorer, independent of the library's block counting: walks the
// ordered non-diagonal cells directly.
long long simple_score(const BinaryNetwork& net, const std::vector<int>& labels, int k,
                       const BlockImage* image) {
    const int n = net.size();
    long long total = 0;
    for (int g = 0; g < k; ++g) {
        for (int h = 0; h < k; ++h) {
            long long ones = 0, zeros = 0;
            for (int i = 0; i < n; ++i) {
                if (labels[i] != g) continue;
                for (int j = 0; j < n; ++j) {
                    if (i == j || labels[j] != h) continue;
                    if (net.has_link(i, j))
                        ++ones;
                    else
                        ++zeros;
                }
            }
            if (image)
                total += image->at(g, h) == BlockType::Null ? ones : zeros;
            else
                total += std::min(ones, zeros);
        }
    }
    return total;
}

// Exhaustive minimum over all partitions into exactly k non-empty clusters.
// Without an image, cluster labels are interchangeable and restricted growth
// strings suffice; a prescribed image pins label meaning, so every labeling
// is enumerated.
long long brute_force_minimum(const BinaryNetwork& net, int k, const BlockImage* image = nullptr) {
    const int n = net.size();
    std::vector<int> labels(n, 0);
    long long best = std::numeric_limits<long long>::max();
    const auto recurse = [&](auto&& self, int unit, int used) -> void {
        if (unit == n) {
            if (used != k) return;
            best = std::min(best, simple_score(net, labels, k, image));
            return;
        }
        if (n - unit < k - used) return;  // cannot reach k clusters any more
        const int label_limit = image ? k - 1 : std::min(used, k - 1);
        for (int label = 0; label <= label_limit; ++label) {
            labels[unit] = label;
            self(self, unit + 1, std::max(used, label + 1));
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

BinaryNetwork random_net(int n, bool directed, double p, Rng& rng) {
    BinaryNetwork net(n, directed);
    for (int i = 0; i < n; ++i)
        for (int j = directed ? 0 : i + 1; j < n; ++j)
            if (i != j && rng.uniform01() < p) net.set_link(i, j, true);
    return net;
}

// Undirected two-cluster cohesive network: complete inside, empty between.
BinaryNetwork two_group_cohesive(int a, int b) {
    BinaryNetwork net(a + b, false);
    for (int i = 0; i < a; ++i)
        for (int j = i + 1; j < a; ++j) net.set_link(i, j, true);
    for (int i = a; i < a + b; ++i)
        for (int j = i + 1; j < a + b; ++j) net.set_link(i, j, true);
    return net;
}

BinaryNetwork planted_core_cohesive(const std::vector<int>& sizes, std::vector<int>* labels_out) {
    int n = 0;
    for (const int s : sizes) n += s;
    std::vector<int> labels(n);
    int unit = 0;
    for (int g = 0; g < static_cast<int>(sizes.size()); ++g)
        for (int s = 0; s < sizes[g]; ++s) labels[unit++] = g;
    BinaryNetwork net(n, false);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (labels[i] == labels[j] || labels[i] == 0 || labels[j] == 0) net.set_link(i, j, true);
    if (labels_out) *labels_out = labels;
    return net;
}

}  // namespace

TEST_CASE("block errors: complete diagonal, null off-diagonal, mixed") {
    std::vector<int> labels;
    const BinaryNetwork cohesive = two_group_cohesive(4, 3);
    const Partition p{{0, 0, 0, 0, 1, 1, 1}, 2};
    const BlockErrors diag = block_errors(cohesive, p, 0, 0);
    CHECK(diag.null_error == 12);  // 4*3 ordered cells, all present
    CHECK(diag.complete_error == 0);

    const BlockErrors off = block_errors(cohesive, p, 0, 1);
    CHECK(off.null_error == 0);
    CHECK(off.complete_error == 12);

    BinaryNetwork mixed(4, true);
    mixed.set_link(0, 2, true);
    const Partition q{{0, 0, 1, 1}, 2};
    const BlockErrors one = block_errors(mixed, q, 0, 1);
    CHECK(one.null_error == 1);
    CHECK(one.complete_error == 3);
}

TEST_CASE("block errors reject invalid partitions") {
    const BinaryNetwork net(4, true);
    CHECK_THROWS_AS(block_errors(net, Partition{{0, 0, 0, 0}, 2}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(block_errors(net, Partition{{0, 0, 1, 1}, 2}, 0, 2), std::invalid_argument);
}

TEST_CASE("criterion: ideal cohesive network fits perfectly, all-null image counts the links") {
    const BinaryNetwork net = two_group_cohesive(3, 3);
    const Partition p{{0, 0, 0, 1, 1, 1}, 2};

    const CriterionResult free_fit = evaluate_criterion(net, p);
    CHECK(free_fit.criterion == 0);
    CHECK(free_fit.image.at(0, 0) == BlockType::Complete);
    CHECK(free_fit.image.at(1, 1) == BlockType::Complete);
    CHECK(free_fit.image.at(0, 1) == BlockType::Null);
    CHECK(free_fit.image.at(1, 0) == BlockType::Null);

    const CriterionResult all_null = evaluate_criterion(net, p, BlockImage(2, BlockType::Null));
    CHECK(all_null.criterion == 12);  // two complete diagonal blocks misread as null
}

TEST_CASE("criterion with one cluster reduces to min(links, cells - links)") {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 4 + rng.uniform_int(4);
        const BinaryNetwork net = random_net(n, true, 0.5, rng);
        const Partition p{std::vector<int>(n, 0), 1};
        const long long cells = static_cast<long long>(n) * (n - 1);
        const long long ones = net.ordered_link_cells();
        CHECK(evaluate_criterion(net, p).criterion == std::min(ones, cells - ones));
    }
}

TEST_CASE("criterion rejects an image of the wrong dimension") {
    const BinaryNetwork net = two_group_cohesive(3, 3);
    const Partition p{{0, 0, 0, 1, 1, 1}, 2};
    CHECK_THROWS_AS(evaluate_criterion(net, p, BlockImage(3, BlockType::Null)), std::invalid_argument);
}

TEST_CASE("classify_blocks: density extremes and the tie rule") {
    BinaryNetwork net(4, true);
    // block (0,1): exactly 2 of 4 ordered cells -> tie -> null
    net.set_link(0, 2, true);
    net.set_link(1, 3, true);
    // block (1,0): all 4 cells -> complete
    net.set_link(2, 0, true);
    net.set_link(2, 1, true);
    net.set_link(3, 0, true);
    net.set_link(3, 1, true);
    const Partition p{{0, 0, 1, 1}, 2};
    const BlockImage image = classify_blocks(net, p);
    CHECK(image.at(0, 1) == BlockType::Null);
    CHECK(image.at(1, 0) == BlockType::Complete);
    CHECK(image.at(0, 0) == BlockType::Null);
}

TEST_CASE("non-specified criterion never exceeds any specified image") {
    Rng rng(14);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5 + rng.uniform_int(3);
        const int k = 2 + rng.uniform_int(2);
        const BinaryNetwork net = random_net(n, trial % 2 == 0, 0.4, rng);
        Partition p = Partition::random(n, k, rng);
        const long long free_value = evaluate_criterion(net, p).criterion;
        BlockImage image(k, BlockType::Null);
        for (int g = 0; g < k; ++g)
            for (int h = 0; h < k; ++h)
                image.set(g, h, rng.uniform01() < 0.5 ? BlockType::Null : BlockType::Complete);
        CHECK(free_value <= evaluate_criterion(net, p, image).criterion);
    }
}

TEST_CASE("criterion is invariant under cluster-label permutation") {
    Rng rng(15);
    const BinaryNetwork net = random_net(7, true, 0.5, rng);
    const Partition p{{0, 1, 2, 0, 1, 2, 0}, 3};
    const Partition swapped{{2, 0, 1, 2, 0, 1, 2}, 3};
    CHECK(evaluate_criterion(net, p).criterion == evaluate_criterion(net, swapped).criterion);
}

TEST_CASE("block errors mirror for undirected networks") {
    Rng rng(16);
    const BinaryNetwork net = random_net(8, false, 0.5, rng);
    const Partition p = Partition::random(8, 3, rng);
    for (int g = 0; g < 3; ++g)
        for (int h = 0; h < 3; ++h) {
            const BlockErrors a = block_errors(net, p, g, h);
            const BlockErrors b = block_errors(net, p, h, g);
            CHECK(a.null_error == b.null_error);
            CHECK(a.complete_error == b.complete_error);
        }
}

TEST_CASE("fit recovers a planted core-cohesive structure exactly") {
    std::vector<int> labels;
    const BinaryNetwork net = planted_core_cohesive({4, 4, 4}, &labels);
    Rng rng(99);
    const BlockmodelFit fit = fit_blockmodel(net, 3, 120, std::nullopt, rng);
    CHECK(fit.criterion == 0);
    CHECK(fit.partition.same_up_to_relabeling(Partition{labels, 3}));
}

TEST_CASE("fit on the empty network is perfect with an all-null image") {
    Rng rng(98);
    const BlockmodelFit fit = fit_blockmodel(BinaryNetwork(9, false), 3, 20, std::nullopt, rng);
    CHECK(fit.criterion == 0);
    for (const BlockType t : fit.image.cells) CHECK(t == BlockType::Null);
}

TEST_CASE("fit matches brute force on small networks") {
    Rng rng(1234);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 5 + rng.uniform_int(4);  // 5..8
        const int k = 2 + rng.uniform_int(2);  // 2..3
        const bool directed = trial % 2 == 0;
        const double p = 0.2 + 0.6 * rng.uniform01();
        const BinaryNetwork net = random_net(n, directed, p, rng);
        const long long expected = brute_force_minimum(net, k);
        const BlockmodelFit fit = fit_blockmodel(net, k, 150, std::nullopt, rng);
        CHECK(fit.criterion == expected);
    }
}

TEST_CASE("specified fit matches brute force too") {
    Rng rng(4321);
    BlockImage image(2, BlockType::Complete);
    image.set(1, 1, BlockType::Null);
    for (int trial = 0; trial < 15; ++trial) {
        const BinaryNetwork net = random_net(6 + rng.uniform_int(3), false, 0.5, rng);
        const long long expected = brute_force_minimum(net, 2, &image);
        const BlockmodelFit fit = fit_blockmodel(net, 2, 150, image, rng);
        CHECK(fit.criterion == expected);
    }
}

TEST_CASE("local search result never exceeds the criterion of its random starts") {
    Rng rng(77);
    const BinaryNetwork net = random_net(10, false, 0.5, rng);
    Rng fit_rng(78);
    const BlockmodelFit fit = fit_blockmodel(net, 3, 30, std::nullopt, fit_rng);
    Rng probe(79);
    for (int i = 0; i < 30; ++i) {
        const Partition start = Partition::random(10, 3, probe);
        CHECK(fit.criterion <= evaluate_criterion(net, start).criterion);
    }
}

TEST_CASE("fit validates its arguments") {
    Rng rng(1);
    const BinaryNetwork net(4, true);
    CHECK_THROWS_AS(fit_blockmodel(net, 5, 10, std::nullopt, rng), std::invalid_argument);
    CHECK_THROWS_AS(fit_blockmodel(net, 0, 10, std::nullopt, rng), std::invalid_argument);
    CHECK_THROWS_AS(fit_blockmodel(net, 2, 0, std::nullopt, rng), std::invalid_argument);
    CHECK_THROWS_AS(fit_blockmodel(net, 2, 10, BlockImage(3, BlockType::Null), rng),
                    std::invalid_argument);
}

TEST_CASE("partition helpers") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Partition p = Partition::random(10, 4, rng);
        p.validate();
        CHECK(p.labels.size() == 10);
    }
    const Partition a{{0, 0, 1, 2}, 3};
    const Partition b{{2, 2, 0, 1}, 3};
    const Partition c{{0, 1, 1, 2}, 3};
    CHECK(a.same_up_to_relabeling(b));
    CHECK_FALSE(a.same_up_to_relabeling(c));
    CHECK_THROWS_AS(Partition({{0, 0, 2}, 3}).validate(), std::invalid_argument);
}

TEST_CASE("fit report JSON carries the expected fields") {
    std::vector<int> labels;
    const BinaryNetwork net = planted_core_cohesive({2, 3, 3}, &labels);
    Rng rng(3);
    const BlockmodelFit fit = fit_blockmodel(net, 3, 60, std::nullopt, rng);
    const std::string json = fit_report_json(fit);
    CHECK(json.find("\"criterion\": 0") != std::string::npos);
    CHECK(json.find("\"image\"") != std::string::npos);
    CHECK(json.find("\"com\"") != std::string::npos);
    CHECK(json.find("\"null\"") != std::string::npos);
    CHECK(json.find("\"partition\"") != std::string::npos);
    CHECK(json.find("\"block_errors\"") != std::string::npos);
}
