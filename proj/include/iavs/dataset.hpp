#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <vector>

namespace iavs {

/// Response and candidate covariates. Columns of X and y are mean-centred on
/// construction, which integrates the intercept out under its flat prior.
struct Dataset {
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    std::vector<std::string> column_names;
    bool centered = false;
    bool standardized = false;

    // Derived from the centred data.
    Eigen::VectorXd xty;
    double yty = 0.0;

    std::size_t n() const { return static_cast<std::size_t>(X.rows()); }
    std::size_t p() const { return static_cast<std::size_t>(X.cols()); }
};

/// Validates, centres (and optionally scales columns to unit sample variance)
/// and precomputes X'y, y'y. Throws DataError on invalid input.
Dataset make_dataset(Eigen::VectorXd y, Eigen::MatrixXd X, std::vector<std::string> names,
                     bool standardize = false);

struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

RawTable read_csv_table(const std::filesystem::path &path);

/// `response` is a column name, or a zero-based column index when no column has
/// that name. Every other column becomes a candidate covariate.
Dataset load_csv(const std::filesystem::path &path, const std::string &response, bool standardize = false);

} // namespace iavs
