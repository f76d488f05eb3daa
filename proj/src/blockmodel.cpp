#include "blocknem/blockmodel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace blocknem {

const char* block_type_name(BlockType t) { return t == BlockType::Null ? "null" : "com"; }

BlockType block_type_from_name(const std::string& name) {
    if (name == "null") return BlockType::Null;
    if (name == "com" || name == "complete") return BlockType::Complete;
    throw std::invalid_argument("unknown block type: " + name);
}

BlockImage::BlockImage(int k_, BlockType fill) : k(k_), cells(static_cast<std::size_t>(k_) * k_, fill) {
    if (k_ < 1) throw std::invalid_argument("BlockImage: need at least one cluster");
}

void Partition::validate() const {
    if (k < 1) throw std::invalid_argument("Partition: need at least one cluster");
    if (labels.empty()) throw std::invalid_argument("Partition: empty label vector");
    std::vector<int> counts(k, 0);
    for (const int label : labels) {
        if (label < 0 || label >= k) throw std::invalid_argument("Partition: label out of range");
        ++counts[label];
    }
    for (const int c : counts)
        if (c == 0) throw std::invalid_argument("Partition: empty cluster");
}

std::vector<int> Partition::cluster_sizes() const {
    std::vector<int> counts(k, 0);
    for (const int label : labels) ++counts[label];
    return counts;
}

Partition Partition::random(int n, int k, Rng& rng) {
    if (k < 1 || k > n) throw std::invalid_argument("Partition::random: need 1 <= k <= n");
    Partition p;
    p.k = k;
    p.labels.resize(n);
    for (int i = 0; i < k; ++i) p.labels[i] = i;  // guarantees non-empty clusters
    for (int i = k; i < n; ++i) p.labels[i] = rng.uniform_int(k);
    return p;
}

Partition Partition::random_composition(int n, int k, Rng& rng) {
    if (k < 1 || k > n) throw std::invalid_argument("Partition::random_composition: need 1 <= k <= n");
    // k-1 distinct cut points in 1..n-1 give the cluster sizes
    std::vector<int> cuts(n - 1);
    for (int i = 0; i < n - 1; ++i) cuts[i] = i + 1;
    for (int i = 0; i < k - 1; ++i) std::swap(cuts[i], cuts[i + rng.uniform_int(n - 1 - i)]);
    std::vector<int> bounds(cuts.begin(), cuts.begin() + (k - 1));
    std::sort(bounds.begin(), bounds.end());
    bounds.push_back(n);

    std::vector<int> units(n);
    for (int i = 0; i < n; ++i) units[i] = i;
    for (int i = 0; i < n - 1; ++i) std::swap(units[i], units[i + rng.uniform_int(n - i)]);

    Partition p;
    p.k = k;
    p.labels.resize(n);
    int unit = 0;
    for (int g = 0; g < k; ++g)
        for (; unit < bounds[g]; ++unit) p.labels[units[unit]] = g;
    return p;
}

bool Partition::same_up_to_relabeling(const Partition& other) const {
    if (k != other.k || labels.size() != other.labels.size()) return false;
    std::vector<int> map_fwd(k, -1), map_bwd(k, -1);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int a = labels[i], b = other.labels[i];
        if (map_fwd[a] == -1 && map_bwd[b] == -1) {
            map_fwd[a] = b;
            map_bwd[b] = a;
        } else if (map_fwd[a] != b || map_bwd[b] != a) {
            return false;
        }
    }
    return true;
}

BlockErrors block_errors(const BinaryNetwork& net, const Partition& p, int g, int h) {
    p.validate();
    if (p.labels.size() != static_cast<std::size_t>(net.size()))
        throw std::invalid_argument("block_errors: partition size does not match network");
    if (g < 0 || g >= p.k || h < 0 || h >= p.k)
        throw std::invalid_argument("block_errors: cluster index out of range");
    BlockErrors e;
    const int n = net.size();
    for (int i = 0; i < n; ++i) {
        if (p.labels[i] != g) continue;
        const std::uint8_t* row = net.row(i);
        for (int j = 0; j < n; ++j) {
            if (i == j || p.labels[j] != h) continue;
            if (row[j])
                ++e.null_error;
            else
                ++e.complete_error;
        }
    }
    return e;
}

CriterionResult evaluate_criterion(const BinaryNetwork& net, const Partition& p,
                                   const std::optional<BlockImage>& image) {
    p.validate();
    if (p.labels.size() != static_cast<std::size_t>(net.size()))
        throw std::invalid_argument("evaluate_criterion: partition size does not match network");
    if (image && image->k != p.k)
        throw std::invalid_argument("evaluate_criterion: image dimension does not match cluster count");

    const int k = p.k;
    CriterionResult result;
    result.image = BlockImage(k, BlockType::Null);
    result.block_errors.assign(static_cast<std::size_t>(k) * k, 0);
    for (int g = 0; g < k; ++g) {
        for (int h = 0; h < k; ++h) {
            const BlockErrors e = block_errors(net, p, g, h);
            BlockType type;
            long long err;
            if (image) {
                type = image->at(g, h);
                err = type == BlockType::Null ? e.null_error : e.complete_error;
            } else if (e.null_error <= e.complete_error) {  // tie classifies as null
                type = BlockType::Null;
                err = e.null_error;
            } else {
                type = BlockType::Complete;
                err = e.complete_error;
            }
            result.image.set(g, h, type);
            result.block_errors[static_cast<std::size_t>(g) * k + h] = err;
            result.criterion += err;
        }
    }
    return result;
}

BlockImage classify_blocks(const BinaryNetwork& net, const Partition& p) {
    return evaluate_criterion(net, p, std::nullopt).image;
}

namespace {

// Incremental state for local search: per-block 1-cell counts plus each
// unit's link tallies toward every cluster, so candidate moves cost O(k).
class SearchState {
public:
    SearchState(const BinaryNetwork& net, int k, const BlockImage* prescribed)
        : net_(net), n_(net.size()), k_(k), prescribed_(prescribed) {}

    void reset(const std::vector<int>& labels) {
        labels_ = labels;
        sizes_.assign(k_, 0);
        for (const int label : labels_) ++sizes_[label];
        ones_.assign(static_cast<std::size_t>(k_) * k_, 0);
        out_to_.assign(static_cast<std::size_t>(n_) * k_, 0);
        in_from_.assign(static_cast<std::size_t>(n_) * k_, 0);
        for (int i = 0; i < n_; ++i) {
            const std::uint8_t* row = net_.row(i);
            for (int j = 0; j < n_; ++j) {
                if (i == j || !row[j]) continue;
                ++ones_[static_cast<std::size_t>(labels_[i]) * k_ + labels_[j]];
                ++out_to_[static_cast<std::size_t>(i) * k_ + labels_[j]];
                ++in_from_[static_cast<std::size_t>(j) * k_ + labels_[i]];
            }
        }
        criterion_ = total(ones_, sizes_);
    }

    long long criterion() const { return criterion_; }
    const std::vector<int>& labels() const { return labels_; }

    // Steepest descent: apply the best strictly improving relocation or
    // exchange until none exists. Ties pick the first move enumerated.
    void descend() {
        for (;;) {
            long long best = criterion_;
            int best_kind = -1;  // 0 relocate, 1 exchange
            int best_u = -1, best_v = -1, best_target = -1;

            for (int u = 0; u < n_; ++u) {
                const int a = labels_[u];
                if (sizes_[a] <= 1) continue;  // source must stay non-empty
                for (int b = 0; b < k_; ++b) {
                    if (b == a) continue;
                    const long long value = eval_relocate(u, b);
                    if (value < best) {
                        best = value;
                        best_kind = 0;
                        best_u = u;
                        best_target = b;
                    }
                }
            }
            for (int u = 0; u < n_; ++u) {
                for (int v = u + 1; v < n_; ++v) {
                    if (labels_[u] == labels_[v]) continue;
                    const long long value = eval_exchange(u, v);
                    if (value < best) {
                        best = value;
                        best_kind = 1;
                        best_u = u;
                        best_v = v;
                    }
                }
            }

            if (best_kind == -1) return;
            if (best_kind == 0) {
                apply_relocate(best_u, best_target);
            } else {
                const int a = labels_[best_u], b = labels_[best_v];
                apply_relocate(best_u, b);
                apply_relocate(best_v, a);
            }
            criterion_ = best;
        }
    }

private:
    long long cells_in_block(int g, int h, const std::vector<int>& sizes) const {
        long long c = static_cast<long long>(sizes[g]) * sizes[h];
        if (g == h) c -= sizes[g];  // no loops
        return c;
    }

    long long block_cost(long long one_count, long long cell_count, int g, int h) const {
        if (prescribed_)
            return prescribed_->at(g, h) == BlockType::Null ? one_count : cell_count - one_count;
        return std::min(one_count, cell_count - one_count);
    }

    long long total(const std::vector<long long>& ones, const std::vector<int>& sizes) const {
        long long t = 0;
        for (int g = 0; g < k_; ++g)
            for (int h = 0; h < k_; ++h)
                t += block_cost(ones[static_cast<std::size_t>(g) * k_ + h], cells_in_block(g, h, sizes), g, h);
        return t;
    }

    void shift_unit(std::vector<long long>& ones, int from, int to, const int* out_row,
                    const int* in_row) const {
        for (int g = 0; g < k_; ++g) {
            ones[static_cast<std::size_t>(from) * k_ + g] -= out_row[g];
            ones[static_cast<std::size_t>(g) * k_ + from] -= in_row[g];
        }
        for (int g = 0; g < k_; ++g) {
            ones[static_cast<std::size_t>(to) * k_ + g] += out_row[g];
            ones[static_cast<std::size_t>(g) * k_ + to] += in_row[g];
        }
    }

    long long eval_relocate(int u, int b) {
        const int a = labels_[u];
        tmp_ones_ = ones_;
        tmp_sizes_ = sizes_;
        shift_unit(tmp_ones_, a, b, &out_to_[static_cast<std::size_t>(u) * k_],
                   &in_from_[static_cast<std::size_t>(u) * k_]);
        --tmp_sizes_[a];
        ++tmp_sizes_[b];
        return total(tmp_ones_, tmp_sizes_);
    }

    long long eval_exchange(int u, int v) {
        const int a = labels_[u], b = labels_[v];
        tmp_ones_ = ones_;
        shift_unit(tmp_ones_, a, b, &out_to_[static_cast<std::size_t>(u) * k_],
                   &in_from_[static_cast<std::size_t>(u) * k_]);
        // v's tallies, adjusted for u now sitting in cluster b
        tmp_out_.assign(out_to_.begin() + static_cast<std::size_t>(v) * k_,
                        out_to_.begin() + static_cast<std::size_t>(v + 1) * k_);
        tmp_in_.assign(in_from_.begin() + static_cast<std::size_t>(v) * k_,
                       in_from_.begin() + static_cast<std::size_t>(v + 1) * k_);
        const int v_to_u = net_.has_link(v, u) ? 1 : 0;
        const int u_to_v = net_.has_link(u, v) ? 1 : 0;
        tmp_out_[a] -= v_to_u;
        tmp_out_[b] += v_to_u;
        tmp_in_[a] -= u_to_v;
        tmp_in_[b] += u_to_v;
        shift_unit(tmp_ones_, b, a, tmp_out_.data(), tmp_in_.data());
        return total(tmp_ones_, sizes_);
    }

    void apply_relocate(int u, int b) {
        const int a = labels_[u];
        shift_unit(ones_, a, b, &out_to_[static_cast<std::size_t>(u) * k_],
                   &in_from_[static_cast<std::size_t>(u) * k_]);
        --sizes_[a];
        ++sizes_[b];
        for (int v = 0; v < n_; ++v) {
            if (v == u) continue;
            if (net_.has_link(v, u)) {
                --out_to_[static_cast<std::size_t>(v) * k_ + a];
                ++out_to_[static_cast<std::size_t>(v) * k_ + b];
            }
            if (net_.has_link(u, v)) {
                --in_from_[static_cast<std::size_t>(v) * k_ + a];
                ++in_from_[static_cast<std::size_t>(v) * k_ + b];
            }
        }
        labels_[u] = b;
    }

    const BinaryNetwork& net_;
    int n_;
    int k_;
    const BlockImage* prescribed_;
    std::vector<int> labels_;
    std::vector<int> sizes_;
    std::vector<long long> ones_;
    std::vector<int> out_to_;   // n*k: unit -> members of cluster
    std::vector<int> in_from_;  // n*k: members of cluster -> unit
    long long criterion_ = 0;
    std::vector<long long> tmp_ones_;
    std::vector<int> tmp_sizes_, tmp_out_, tmp_in_;
};

}  // namespace

BlockmodelFit fit_blockmodel(const BinaryNetwork& net, int k, int restarts,
                             const std::optional<BlockImage>& image, Rng& rng) {
    const int n = net.size();
    if (k < 1 || k > n) throw std::invalid_argument("fit_blockmodel: need 1 <= k <= n");
    if (restarts < 1) throw std::invalid_argument("fit_blockmodel: need at least one restart");
    if (image && image->k != k)
        throw std::invalid_argument("fit_blockmodel: image dimension does not match k");

    SearchState state(net, k, image ? &*image : nullptr);
    long long best_criterion = std::numeric_limits<long long>::max();
    std::vector<int> best_labels;
    for (int r = 0; r < restarts; ++r) {
        // alternating start styles: per-unit sampling explores balanced
        // shapes, composition sampling reaches very unbalanced ones
        const Partition start =
            r % 2 == 0 ? Partition::random(n, k, rng) : Partition::random_composition(n, k, rng);
        state.reset(start.labels);
        state.descend();
        if (state.criterion() < best_criterion) {
            best_criterion = state.criterion();
            best_labels = state.labels();
        }
    }

    Partition best{best_labels, k};
    const CriterionResult scored = evaluate_criterion(net, best, image);
    BlockmodelFit fit{std::move(best), scored.image, scored.criterion, scored.block_errors};
    if (fit.criterion != best_criterion)
        throw std::logic_error("fit_blockmodel: incremental and direct criteria disagree");
    return fit;
}

std::string fit_report_json(const BlockmodelFit& fit) {
    nlohmann::json j;
    j["criterion"] = fit.criterion;
    j["k"] = fit.image.k;
    j["partition"] = fit.partition.labels;
    nlohmann::json image = nlohmann::json::array();
    nlohmann::json errors = nlohmann::json::array();
    for (int g = 0; g < fit.image.k; ++g) {
        nlohmann::json image_row = nlohmann::json::array();
        nlohmann::json error_row = nlohmann::json::array();
        for (int h = 0; h < fit.image.k; ++h) {
            image_row.push_back(block_type_name(fit.image.at(g, h)));
            error_row.push_back(fit.block_errors[static_cast<std::size_t>(g) * fit.image.k + h]);
        }
        image.push_back(image_row);
        errors.push_back(error_row);
    }
    j["image"] = image;
    j["block_errors"] = errors;
    return j.dump(2);
}

}  // namespace blocknem
