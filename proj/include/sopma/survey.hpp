#pragma once

#include <string>
#include <vector>

namespace sopma::survey {

struct ItemDesc {
    std::string id;
    std::string question;
    std::string tag;  // Human | Society | Ecology | Economy | Response | Other
};

struct SurveyMatrix {
    std::vector<ItemDesc> items;
    std::vector<std::vector<double>> rows;  // respondent-major, one value per item
    std::vector<double> raw_max;            // per-item maximum used for normalization (1 before)
    bool normalized = false;

    size_t n_respondents() const { return rows.size(); }
    size_t item_index(const std::string& id) const;  // throws DomainError if absent
    std::vector<double> column(size_t idx) const;
};

struct LoadResult {
    SurveyMatrix matrix;
    size_t dropped_rows;
};

// Reads a survey CSV (header of item ids, empty cell = missing) and
// applies complete-case deletion over the schema-listed items.
LoadResult load_survey(const std::string& path, const std::vector<ItemDesc>& schema);

// Loads an item schema JSON array of {id, question, tag}.
std::vector<ItemDesc> load_item_schema(const std::string& path);

// Divides every value by its item maximum over retained rows.
SurveyMatrix normalize_items(const SurveyMatrix& raw);

struct CorrelationEntry {
    std::string id;
    double r = 0;
    double t_stat = 0;
    double p_value = 1;
    bool selected = false;
    bool scorable = true;  // false for zero-variance items
};

struct CorrelationReport {
    std::vector<CorrelationEntry> entries;  // sorted by descending r, then id
    std::string response_item;
    double r_min;
    double p_max;

    std::vector<std::string> selected_ids() const;
};

CorrelationReport extract_explanatory(const SurveyMatrix& matrix,
                                      const std::string& response_item,
                                      double r_min = 0.1, double p_max = 0.05);

struct RegressionModel {
    double intercept = 0;
    std::vector<std::string> variable_ids;  // fixed order
    std::vector<double> coefficients;
    std::vector<double> standard_errors;    // [0] = intercept, then per variable
    std::vector<double> t_stats;
    std::vector<double> p_values;
    double r_squared = 0;
    std::vector<double> residuals;
    size_t n = 0;
};

// Ordinary least squares with intercept, solved through a column-pivoted
// Householder QR of the design matrix.
RegressionModel fit_ols(const SurveyMatrix& matrix, const std::string& response_item,
                        const std::vector<std::string>& explanatory_ids);

double predict(const RegressionModel& model, const std::vector<double>& x);

std::string model_to_json(const RegressionModel& model);
RegressionModel model_from_json(const std::string& text);

std::string correlation_report_to_json(const CorrelationReport& report);

}  // namespace sopma::survey
