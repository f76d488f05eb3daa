#include "blocknem/network.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace blocknem {

BinaryNetwork::BinaryNetwork(int n, bool directed)
    : n_(n), directed_(directed), adj_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) throw std::invalid_argument("BinaryNetwork: negative size");
}

BinaryNetwork BinaryNetwork::from_cells(int n, bool directed, std::vector<std::uint8_t> cells) {
    if (n < 0 || cells.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("BinaryNetwork: cell buffer does not match size");
    BinaryNetwork net(n, directed);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::uint8_t v = cells[static_cast<std::size_t>(i) * n + j];
            if (v > 1) throw std::invalid_argument("BinaryNetwork: entries must be 0 or 1");
            if (i == j && v != 0) throw std::invalid_argument("BinaryNetwork: loops are not allowed");
        }
    }
    if (!directed) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (cells[static_cast<std::size_t>(i) * n + j] != cells[static_cast<std::size_t>(j) * n + i])
                    throw std::invalid_argument("BinaryNetwork: undirected matrix must be symmetric");
    }
    net.adj_ = std::move(cells);
    return net;
}

void BinaryNetwork::check_pair(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::invalid_argument("BinaryNetwork: unit index out of range");
    if (i == j) throw std::invalid_argument("BinaryNetwork: loops are not allowed");
}

void BinaryNetwork::set_link(int i, int j, bool present) {
    check_pair(i, j);
    adj_[static_cast<std::size_t>(i) * n_ + j] = present ? 1 : 0;
    if (!directed_) adj_[static_cast<std::size_t>(j) * n_ + i] = present ? 1 : 0;
}

long long BinaryNetwork::ordered_link_cells() const {
    long long ones = 0;
    for (const std::uint8_t v : adj_) ones += v;
    return ones;
}

long long BinaryNetwork::link_count() const {
    const long long ones = ordered_link_cells();
    return directed_ ? ones : ones / 2;
}

double BinaryNetwork::density() const {
    if (n_ < 2) throw std::invalid_argument("density: network must have at least two units");
    const long long cells = static_cast<long long>(n_) * (n_ - 1);
    return static_cast<double>(ordered_link_cells()) / static_cast<double>(cells);
}

Degrees BinaryNetwork::degrees() const {
    Degrees d;
    d.in.assign(n_, 0);
    d.out.assign(n_, 0);
    for (int i = 0; i < n_; ++i) {
        const std::uint8_t* r = row(i);
        for (int j = 0; j < n_; ++j) {
            if (r[j]) {
                ++d.out[i];
                ++d.in[j];
            }
        }
    }
    return d;
}

CountNetwork::CountNetwork(int n) : n_(n), c_(static_cast<std::size_t>(n) * n, 0) {
    if (n < 0) throw std::invalid_argument("CountNetwork: negative size");
}

CountNetwork CountNetwork::from_cells(int n, std::vector<long long> cells) {
    if (n < 0 || cells.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("CountNetwork: cell buffer does not match size");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const long long v = cells[static_cast<std::size_t>(i) * n + j];
            if (v < 0) throw std::invalid_argument("CountNetwork: counts must be non-negative");
            if (i == j && v != 0) throw std::invalid_argument("CountNetwork: diagonal must be zero");
        }
    }
    CountNetwork counts(n);
    counts.c_ = std::move(cells);
    return counts;
}

void CountNetwork::set_count(int i, int j, long long value) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::invalid_argument("CountNetwork: unit index out of range");
    if (i == j) throw std::invalid_argument("CountNetwork: diagonal must stay zero");
    if (value < 0) throw std::invalid_argument("CountNetwork: counts must be non-negative");
    c_[static_cast<std::size_t>(i) * n_ + j] = value;
}

BinaryNetwork binarize(const CountNetwork& counts) {
    const int n = counts.size();
    if (n < 2) throw std::invalid_argument("binarize: need at least two units");

    // Pairwise totals over unordered pairs; the threshold is median/2 and
    // the comparison is strict, done in exact integer arithmetic:
    //   odd count:  c > med/2      <=>  2c > med
    //   even count: c > (a+b)/4    <=>  4c > a+b
    std::vector<long long> pair_totals;
    pair_totals.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            pair_totals.push_back(counts.count(i, j) + counts.count(j, i));

    std::vector<long long> sorted = pair_totals;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    long long threshold_num;  // threshold = threshold_num / threshold_den
    long long threshold_den;
    if (m % 2 == 1) {
        threshold_num = sorted[m / 2];
        threshold_den = 2;
    } else {
        threshold_num = sorted[m / 2 - 1] + sorted[m / 2];
        threshold_den = 4;
    }

    BinaryNetwork net(n, false);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++idx) {
            if (pair_totals[idx] * threshold_den > threshold_num) net.set_link(i, j, true);
        }
    }
    return net;
}

BinaryNetwork symmetrize_union(const BinaryNetwork& net) {
    const int n = net.size();
    BinaryNetwork out(n, false);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (net.has_link(i, j) || net.has_link(j, i)) out.set_link(i, j, true);
    return out;
}

}  // namespace blocknem
