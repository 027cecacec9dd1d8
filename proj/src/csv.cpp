#include "hdlasso/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace hdlasso {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_cell(const std::string& raw, long line_no) {
    const std::string cell = trim(raw);
    if (cell.empty()) throw ParseError("empty cell", line_no);
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size()) throw ParseError("non-numeric cell '" + cell + "'", line_no);
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvMatrix load_csv_matrix(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0);

    CsvMatrix out;
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_line(line);
        if (has_header && out.header.empty() && rows.empty()) {
            for (const auto& c : cells) out.header.push_back(trim(c));
            width = cells.size();
            continue;
        }
        if (width == 0) width = cells.size();
        if (cells.size() != width) throw ParseError("ragged row", line_no);
        std::vector<double> row(width);
        for (size_t j = 0; j < width; ++j) row[j] = parse_cell(cells[j], line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("no data rows in '" + path + "'", line_no);

    out.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < width; ++j) out.values(i, j) = rows[i][j];
    return out;
}

DesignData load_csv(const std::string& path, const CsvOptions& opts) {
    const CsvMatrix m = load_csv_matrix(path, opts.has_header);
    const int cols = static_cast<int>(m.values.cols());
    if (cols < 2) throw ParseError("need at least two columns (design + response)", 0);

    int response = cols - 1;
    if (!opts.response_column.empty()) {
        response = -1;
        for (int j = 0; j < static_cast<int>(m.header.size()); ++j)
            if (m.header[j] == opts.response_column) response = j;
        if (response < 0)
            throw ParseError("response column '" + opts.response_column + "' not found", 0);
    }

    Eigen::MatrixXd X(m.values.rows(), cols - 1);
    for (int j = 0, k = 0; j < cols; ++j)
        if (j != response) X.col(k++) = m.values.col(j);
    return DesignData(X, m.values.col(response));
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing", 0);
    if (!header.empty()) {
        for (size_t j = 0; j < header.size(); ++j)
            out << (j ? "," : "") << header[j];
        out << '\n';
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            out << (j ? "," : "") << format_double(values(i, j));
        out << '\n';
    }
}

}  // namespace hdlasso
