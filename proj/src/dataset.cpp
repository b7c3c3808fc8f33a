#include "iavs/dataset.hpp"

#include "iavs/errors.hpp"
#include "iavs/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace iavs {

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"')
        out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_row(const std::string &line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string &cell, std::size_t row, std::size_t col) {
    double v = 0.0;
    const char *first = cell.data();
    if (!cell.empty() && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
        throw DataError("non-numeric or missing value at row " + std::to_string(row) + ", column " +
                        std::to_string(col + 1) + ": '" + cell + "'");
    return v;
}

} // namespace

Dataset make_dataset(Eigen::VectorXd y, Eigen::MatrixXd X, std::vector<std::string> names, bool standardize) {
    if (X.rows() != y.size())
        throw DataError("response length does not match the number of rows");
    if (y.size() < 3)
        throw DataError("need at least 3 observations");
    if (X.cols() < 1)
        throw DataError("need at least one candidate variable");
    if (!y.allFinite() || !X.allFinite())
        throw DataError("data contain non-finite values");
    if (names.empty()) {
        for (Eigen::Index j = 0; j < X.cols(); ++j)
            names.push_back("x" + std::to_string(j + 1));
    }
    if (static_cast<Eigen::Index>(names.size()) != X.cols())
        throw DataError("column name count does not match the number of columns");

    Dataset d;
    d.y = std::move(y);
    d.X = std::move(X);
    d.column_names = std::move(names);
    d.y.array() -= d.y.mean();
    kernels::center_columns(d.X);
    d.centered = true;
    if (standardize) {
        const double denom = static_cast<double>(d.X.rows() - 1);
        for (Eigen::Index j = 0; j < d.X.cols(); ++j) {
            const double sd = std::sqrt(d.X.col(j).squaredNorm() / denom);
            if (sd > 0.0)
                d.X.col(j) /= sd;
        }
        d.standardized = true;
    }
    d.xty = kernels::cross_product(d.X, d.y);
    d.yty = d.y.squaredNorm();
    if (!(d.yty > 0.0))
        throw DataError("response has zero variance");
    return d;
}

RawTable read_csv_table(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open data file " + path.string());
    RawTable table;
    std::string line;
    if (!std::getline(in, line))
        throw DataError("data file is empty: " + path.string());
    table.header = split_row(line);
    table.columns.resize(table.header.size());
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        auto cells = split_row(line);
        if (cells.size() != table.header.size())
            throw DataError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                            " cells, expected " + std::to_string(table.header.size()));
        for (std::size_t c = 0; c < cells.size(); ++c)
            table.columns[c].push_back(parse_cell(cells[c], row, c));
    }
    return table;
}

Dataset load_csv(const std::filesystem::path &path, const std::string &response, bool standardize) {
    RawTable table = read_csv_table(path);
    std::size_t resp = table.header.size();
    auto it = std::find(table.header.begin(), table.header.end(), response);
    if (it != table.header.end()) {
        resp = static_cast<std::size_t>(it - table.header.begin());
    } else {
        std::size_t idx = 0;
        auto [ptr, ec] = std::from_chars(response.data(), response.data() + response.size(), idx);
        if (ec != std::errc() || ptr != response.data() + response.size() || idx >= table.header.size())
            throw DataError("response column '" + response + "' not found");
        resp = idx;
    }
    const std::size_t n = table.columns.empty() ? 0 : table.columns[0].size();
    const std::size_t p = table.header.size() - 1;
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(table.columns[resp].data(), static_cast<Eigen::Index>(n));
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    std::vector<std::string> names;
    Eigen::Index out = 0;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c == resp)
            continue;
        X.col(out++) = Eigen::Map<const Eigen::VectorXd>(table.columns[c].data(), static_cast<Eigen::Index>(n));
        names.push_back(table.header[c]);
    }
    return make_dataset(std::move(y), std::move(X), std::move(names), standardize);
}

} // namespace iavs
