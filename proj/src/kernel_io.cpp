#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "glelab/errors.hpp"
#include "glelab/kernel.hpp"

namespace glelab {

namespace {

const char* const kSections[] = {"mass", "gamma11", "gamma12", "gamma21", "gamma22", "q"};

struct Section {
    std::size_t line = 0;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_lines;
};

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<double> parse_row(const std::string& text, std::size_t line) {
    std::vector<double> row;
    std::istringstream in(text);
    std::string token;
    while (in >> token) {
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') {
            throw ParseError(line, "kernel file: invalid number '" + token + "'");
        }
        row.push_back(value);
    }
    return row;
}

Matrix to_matrix(const Section& sec, const std::string& name, Eigen::Index rows,
                 Eigen::Index cols) {
    if (static_cast<Eigen::Index>(sec.rows.size()) != rows) {
        throw ValidationError("kernel file: section [" + name + "] has " +
                              std::to_string(sec.rows.size()) + " rows, expected " +
                              std::to_string(rows));
    }
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = sec.rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw ValidationError("kernel file: section [" + name + "] row at line " +
                                  std::to_string(sec.row_lines[static_cast<std::size_t>(i)]) +
                                  " has " + std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(cols));
        }
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = row[static_cast<std::size_t>(j)];
    }
    return out;
}

void write_section(std::ostream& out, const char* name, const Matrix& a) {
    out << '[' << name << "]\n";
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (j) out << ' ';
            out << a(i, j);
        }
        out << '\n';
    }
}

}  // namespace

GleParams parse_kernel(std::istream& in) {
    std::map<std::string, Section> sections;
    Section* current = nullptr;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ParseError(line, "kernel file: malformed section header");
            const std::string name = trim(text.substr(1, text.size() - 2));
            bool known = name == "meta";
            for (const char* s : kSections) known = known || name == s;
            if (!known) throw ParseError(line, "kernel file: unknown section [" + name + "]");
            if (sections.count(name)) {
                throw ParseError(line, "kernel file: duplicate section [" + name + "]");
            }
            current = &sections[name];
            current->line = line;
            continue;
        }
        if (!current) throw ParseError(line, "kernel file: data before the first section");
        current->rows.push_back(parse_row(text, line));
        current->row_lines.push_back(line);
    }

    auto meta_it = sections.find("meta");
    if (meta_it == sections.end()) throw ParseError(line, "kernel file: missing [meta] section");
    const Section& meta = meta_it->second;
    if (meta.rows.size() != 1 || meta.rows[0].size() != 3) {
        throw ParseError(meta.line, "kernel file: [meta] must hold exactly 'n m beta'");
    }
    const double nd = meta.rows[0][0];
    const double md = meta.rows[0][1];
    if (nd < 1 || md < 1 || nd != static_cast<double>(static_cast<long>(nd)) ||
        md != static_cast<double>(static_cast<long>(md))) {
        throw ParseError(meta.row_lines[0], "kernel file: n and m must be positive integers");
    }
    const auto n = static_cast<Eigen::Index>(nd);
    const auto m = static_cast<Eigen::Index>(md);
    const Eigen::Index shapes[6][2] = {{n, n}, {n, n}, {n, m}, {m, n}, {m, m}, {m, m}};
    std::vector<Matrix> blocks;
    for (int k = 0; k < 6; ++k) {
        auto it = sections.find(kSections[k]);
        if (it == sections.end()) {
            throw ParseError(line, std::string("kernel file: missing [") + kSections[k] +
                                       "] section");
        }
        blocks.push_back(to_matrix(it->second, kSections[k], shapes[k][0], shapes[k][1]));
    }
    return GleParams(blocks[0], blocks[1], blocks[2], blocks[3], blocks[4], blocks[5],
                     meta.rows[0][2]);
}

void write_kernel(std::ostream& out, const GleParams& params) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    out << "[meta]\n" << params.n() << ' ' << params.m() << ' ' << params.beta() << '\n';
    write_section(out, "mass", params.mass());
    write_section(out, "gamma11", params.gamma11());
    write_section(out, "gamma12", params.gamma12());
    write_section(out, "gamma21", params.gamma21());
    write_section(out, "gamma22", params.gamma22());
    write_section(out, "q", params.q_aux());
    out.flags(flags);
    out.precision(precision);
}

GleParams load_kernel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "kernel file: cannot open '" + path + "'");
    return parse_kernel(in);
}

void save_kernel_file(const GleParams& params, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("kernel file: cannot write '" + path + "'");
    write_kernel(out, params);
}

}  // namespace glelab
