#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hdlasso/core.hpp"

namespace hdlasso {

struct CsvMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> header;  // empty when the file had none
};

// Comma-separated reals, decimal point, optional single header row.
// Ragged rows and non-numeric cells raise ParseError with the line number.
CsvMatrix load_csv_matrix(const std::string& path, bool has_header);

struct CsvOptions {
    bool has_header = false;
    std::string response_column;  // named column; empty = last column
};

// Splits the matrix into the response column and the design.
DesignData load_csv(const std::string& path, const CsvOptions& opts = {});

// 17-significant-digit serialization: load(write(x)) reproduces x exactly.
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& values,
                      const std::vector<std::string>& header = {});

std::string format_double(double v);  // %.17g

}  // namespace hdlasso
