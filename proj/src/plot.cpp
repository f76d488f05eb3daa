#include "blocknem/plot.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace blocknem {

std::vector<int> cluster_order(const Partition& p) {
    p.validate();
    std::vector<int> order(p.labels.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return p.labels[a] < p.labels[b]; });
    return order;
}

namespace {

struct Layout {
    std::vector<int> order;       // unit drawn at each slot
    std::vector<int> boundaries;  // slots after which a divider is drawn
};

Layout make_layout(const BinaryNetwork& net, const std::optional<Partition>& p) {
    Layout layout;
    const int n = net.size();
    if (p) {
        if (p->labels.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("plot: partition size does not match network");
        layout.order = cluster_order(*p);
        const std::vector<int> sizes = p->cluster_sizes();
        int cum = 0;
        for (int g = 0; g + 1 < p->k; ++g) {
            cum += sizes[g];
            layout.boundaries.push_back(cum);
        }
    } else {
        layout.order.resize(n);
        std::iota(layout.order.begin(), layout.order.end(), 0);
    }
    return layout;
}

}  // namespace

void write_matrix_pbm(const BinaryNetwork& net, const std::optional<Partition>& p,
                      const std::string& path, int cell_px) {
    if (cell_px < 1) throw std::invalid_argument("plot: cell size must be positive");
    const Layout layout = make_layout(net, p);
    const int n = net.size();
    const int dividers = static_cast<int>(layout.boundaries.size());
    const int side = n * cell_px + dividers + 2;  // 1px frame on each side

    // pixel rows of 0/1, 1 = black
    std::vector<std::vector<char>> pix(side, std::vector<char>(side, 0));
    for (int x = 0; x < side; ++x) {
        pix[0][x] = pix[side - 1][x] = 1;
        pix[x][0] = pix[x][side - 1] = 1;
    }

    auto slot_offset = [&](int slot) {
        int off = 1 + slot * cell_px;
        for (const int b : layout.boundaries)
            if (slot >= b) ++off;
        return off;
    };

    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int i = layout.order[r], j = layout.order[c];
            if (i == j || !net.has_link(i, j)) continue;
            const int y0 = slot_offset(r), x0 = slot_offset(c);
            for (int dy = 0; dy < cell_px; ++dy)
                for (int dx = 0; dx < cell_px; ++dx) pix[y0 + dy][x0 + dx] = 1;
        }
    }
    for (const int b : layout.boundaries) {
        const int line = slot_offset(b) - 1;
        for (int x = 0; x < side; ++x) {
            pix[line][x] = 1;
            pix[x][line] = 1;
        }
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "P1\n" << side << ' ' << side << '\n';
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            if (x) out << ' ';
            out << (pix[y][x] ? '1' : '0');
        }
        out << '\n';
    }
}

void write_matrix_svg(const BinaryNetwork& net, const std::optional<Partition>& p,
                      const std::string& path, int cell_px) {
    if (cell_px < 1) throw std::invalid_argument("plot: cell size must be positive");
    const Layout layout = make_layout(net, p);
    const int n = net.size();
    const int side = n * cell_px;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side
        << "\" viewBox=\"0 0 " << side << ' ' << side << "\">\n";
    out << "<rect width=\"" << side << "\" height=\"" << side
        << "\" fill=\"white\" stroke=\"black\"/>\n";
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int i = layout.order[r], j = layout.order[c];
            if (i == j || !net.has_link(i, j)) continue;
            out << "<rect x=\"" << c * cell_px << "\" y=\"" << r * cell_px << "\" width=\"" << cell_px
                << "\" height=\"" << cell_px << "\" fill=\"black\"/>\n";
        }
    }
    for (const int b : layout.boundaries) {
        const int pos = b * cell_px;
        out << "<line x1=\"0\" y1=\"" << pos << "\" x2=\"" << side << "\" y2=\"" << pos
            << "\" stroke=\"black\"/>\n";
        out << "<line x1=\"" << pos << "\" y1=\"0\" x2=\"" << pos << "\" y2=\"" << side
            << "\" stroke=\"black\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace blocknem
