#include "blocknem/network_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace blocknem {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_int(const std::string& s, long long& value) {
    if (s.empty()) return false;
    std::size_t pos = 0;
    try {
        value = std::stoll(s, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == s.size();
}

// Rows of integer cells; a non-numeric first row is skipped as a header.
std::vector<std::vector<long long>> read_int_matrix(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::vector<long long>> rows;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        std::vector<long long> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (const std::string& f : fields) {
            long long v = 0;
            if (!parse_int(f, v)) {
                numeric = false;
                break;
            }
            row.push_back(v);
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue;  // header of unit labels
            }
            throw std::runtime_error("malformed CSV cell in " + path);
        }
        first = false;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("empty matrix in " + path);
    const std::size_t n = rows.size();
    for (const auto& row : rows)
        if (row.size() != n) throw std::runtime_error("matrix in " + path + " is not square");
    return rows;
}

}  // namespace

CountNetwork read_counts_csv(const std::string& path) {
    const auto rows = read_int_matrix(path);
    const int n = static_cast<int>(rows.size());
    std::vector<long long> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : rows) cells.insert(cells.end(), row.begin(), row.end());
    try {
        return CountNetwork::from_cells(n, std::move(cells));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_counts_csv(const CountNetwork& counts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    const int n = counts.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ',';
            out << counts.count(i, j);
        }
        out << '\n';
    }
}

BinaryNetwork read_network_csv(const std::string& path, std::optional<bool> directed) {
    const auto rows = read_int_matrix(path);
    const int n = static_cast<int>(rows.size());
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(n) * n, 0);
    bool symmetric = true;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const long long v = rows[i][j];
            if (v != 0 && v != 1) throw std::runtime_error(path + ": entries must be 0 or 1");
            cells[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(v);
        }
    }
    for (int i = 0; i < n && symmetric; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rows[i][j] != rows[j][i]) {
                symmetric = false;
                break;
            }
    const bool dir = directed.value_or(!symmetric);
    try {
        return BinaryNetwork::from_cells(n, dir, std::move(cells));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_network_csv(const BinaryNetwork& net, const std::string& path,
                       const std::vector<std::string>& labels) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    const int n = net.size();
    if (!labels.empty()) {
        if (labels.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("write_network_csv: label count does not match size");
        for (int j = 0; j < n; ++j) {
            if (j) out << ',';
            out << labels[j];
        }
        out << '\n';
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out << ',';
            out << (net.has_link(i, j) && i != j ? 1 : 0);
        }
        out << '\n';
    }
}

BinaryNetwork read_network_pajek(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    int n = -1;
    enum class Section { None, Vertices, Arcs, Edges } section = Section::None;
    bool saw_arcs = false;
    std::vector<std::pair<int, int>> arcs;
    std::vector<std::pair<int, int>> edges;

    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        if (t[0] == '*') {
            std::istringstream header(t);
            std::string tag;
            header >> tag;
            for (char& c : tag) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (tag == "*vertices") {
                if (!(header >> n) || n < 0) throw std::runtime_error(path + ": bad *Vertices count");
                section = Section::Vertices;
            } else if (tag == "*arcs") {
                section = Section::Arcs;
                saw_arcs = true;
            } else if (tag == "*edges") {
                section = Section::Edges;
            } else {
                throw std::runtime_error(path + ": unsupported Pajek section " + tag);
            }
            continue;
        }
        if (section == Section::Vertices || section == Section::None) continue;
        std::istringstream pair_in(t);
        int a = 0, b = 0;
        if (!(pair_in >> a >> b)) throw std::runtime_error(path + ": malformed endpoint line: " + t);
        if (n < 0) throw std::runtime_error(path + ": endpoints before *Vertices");
        if (a < 1 || a > n || b < 1 || b > n)
            throw std::runtime_error(path + ": endpoint out of range: " + t);
        if (section == Section::Arcs)
            arcs.emplace_back(a - 1, b - 1);
        else
            edges.emplace_back(a - 1, b - 1);
    }
    if (n < 0) throw std::runtime_error(path + ": missing *Vertices");

    BinaryNetwork net(n, saw_arcs ? true : false);
    for (const auto& [a, b] : arcs)
        if (a != b) net.set_link(a, b, true);
    for (const auto& [a, b] : edges) {
        if (a == b) continue;
        if (saw_arcs) {
            net.set_link(a, b, true);
            net.set_link(b, a, true);
        } else {
            net.set_link(a, b, true);
        }
    }
    return net;
}

void write_network_pajek(const BinaryNetwork& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    const int n = net.size();
    out << "*Vertices " << n << '\n';
    for (int i = 0; i < n; ++i) out << (i + 1) << " \"" << (i + 1) << "\"\n";
    if (net.directed()) {
        out << "*Arcs\n";
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && net.has_link(i, j)) out << (i + 1) << ' ' << (j + 1) << '\n';
    } else {
        out << "*Edges\n";
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (net.has_link(i, j)) out << (i + 1) << ' ' << (j + 1) << '\n';
    }
}

BinaryNetwork read_network_auto(const std::string& path, std::optional<bool> directed) {
    const std::string text = read_file(path);
    for (const char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '*') return read_network_pajek(path);
        break;
    }
    return read_network_csv(path, directed);
}

}  // namespace blocknem
