#include "sopma/survey.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sopma/csv.hpp"
#include "sopma/errors.hpp"
#include "sopma/stats.hpp"

namespace sopma::survey {

using json = nlohmann::ordered_json;

size_t SurveyMatrix::item_index(const std::string& id) const {
    for (size_t i = 0; i < items.size(); ++i)
        if (items[i].id == id) return i;
    throw DomainError("unknown survey item: " + id);
}

std::vector<double> SurveyMatrix::column(size_t idx) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[idx]);
    return out;
}

std::vector<ItemDesc> load_item_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open item schema: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError(path + ": expected a JSON array");
    static const std::vector<std::string> kTags = {"Human",   "Society",  "Ecology",
                                                   "Economy", "Response", "Other"};
    std::vector<ItemDesc> schema;
    for (const auto& e : doc) {
        ItemDesc d{e.at("id").get<std::string>(), e.value("question", ""),
                   e.value("tag", "Other")};
        if (std::find(kTags.begin(), kTags.end(), d.tag) == kTags.end())
            throw ParseError(path + ": unknown classification tag '" + d.tag + "' for item " +
                             d.id);
        schema.push_back(std::move(d));
    }
    return schema;
}

LoadResult load_survey(const std::string& path, const std::vector<ItemDesc>& schema) {
    auto table = csv::read_table(path);
    std::vector<size_t> col_of_item;
    for (const auto& item : schema) {
        auto it = std::find(table.header.begin(), table.header.end(), item.id);
        if (it == table.header.end())
            throw ParseError(path + ": header is missing schema item '" + item.id + "'");
        col_of_item.push_back(static_cast<size_t>(it - table.header.begin()));
    }

    SurveyMatrix m;
    m.items = schema;
    m.raw_max.assign(schema.size(), 1.0);
    size_t dropped = 0;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        std::vector<double> row(schema.size());
        bool complete = true;
        for (size_t j = 0; j < schema.size(); ++j) {
            const auto& cell = table.rows[r][col_of_item[j]];
            if (cell.empty()) {
                complete = false;
                break;
            }
            auto v = csv::parse_double(cell);
            if (!v)
                throw ParseError(path + ": cell '" + cell + "' is not numeric",
                                 table.line_numbers[r]);
            row[j] = *v;
        }
        if (complete)
            m.rows.push_back(std::move(row));
        else
            ++dropped;
    }
    if (m.rows.empty()) throw DataError(path + ": no complete rows survive screening");
    return {std::move(m), dropped};
}

SurveyMatrix normalize_items(const SurveyMatrix& raw) {
    SurveyMatrix out = raw;
    const size_t n_items = raw.items.size();
    for (size_t j = 0; j < n_items; ++j) {
        double mx = 0;
        for (const auto& row : raw.rows) mx = std::max(mx, row[j]);
        if (mx <= 0)
            throw DataError("degenerate item '" + raw.items[j].id +
                            "': maximum over retained rows is not positive");
        out.raw_max[j] = mx;
        for (auto& row : out.rows) row[j] /= mx;
    }
    out.normalized = true;
    return out;
}

std::vector<std::string> CorrelationReport::selected_ids() const {
    std::vector<std::string> ids;
    for (const auto& e : entries)
        if (e.selected) ids.push_back(e.id);
    return ids;
}

CorrelationReport extract_explanatory(const SurveyMatrix& matrix,
                                      const std::string& response_item, double r_min,
                                      double p_max) {
    if (r_min < -1 || r_min > 1) throw DomainError("r_min outside [-1,1]");
    if (p_max <= 0 || p_max > 1) throw DomainError("p_max outside (0,1]");
    const size_t resp = matrix.item_index(response_item);
    const auto y = matrix.column(resp);
    const int n = static_cast<int>(matrix.n_respondents());

    CorrelationReport report;
    report.response_item = response_item;
    report.r_min = r_min;
    report.p_max = p_max;
    for (size_t j = 0; j < matrix.items.size(); ++j) {
        if (j == resp) continue;
        CorrelationEntry e;
        e.id = matrix.items[j].id;
        try {
            e.r = stats::pearson_r(matrix.column(j), y);
            auto pv = stats::correlation_p_value(e.r, n);
            e.p_value = pv.p;
            e.t_stat = pv.exact ? std::numeric_limits<double>::infinity()
                                : e.r * std::sqrt((n - 2) / (1 - e.r * e.r));
            e.selected = e.r >= r_min && e.p_value <= p_max;
        } catch (const DomainError&) {
            e.scorable = false;  // zero-variance item: reported, never selected
        }
        report.entries.push_back(std::move(e));
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const CorrelationEntry& a, const CorrelationEntry& b) {
                  if (a.r != b.r) return a.r > b.r;
                  return a.id < b.id;
              });
    return report;
}

RegressionModel fit_ols(const SurveyMatrix& matrix, const std::string& response_item,
                        const std::vector<std::string>& explanatory_ids) {
    const size_t n = matrix.n_respondents();
    const size_t k = explanatory_ids.size();
    if (n < k + 2)
        throw DomainError("fit_ols: need at least " + std::to_string(k + 2) + " rows, have " +
                          std::to_string(n));

    const size_t resp = matrix.item_index(response_item);
    std::vector<size_t> cols;
    for (const auto& id : explanatory_ids) cols.push_back(matrix.item_index(id));

    Eigen::MatrixXd X(n, k + 1);
    Eigen::VectorXd y(n);
    for (size_t i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (size_t j = 0; j < k; ++j) X(i, j + 1) = matrix.rows[i][cols[j]];
        y(i) = matrix.rows[i][resp];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(k + 1)) {
        // name the columns past the numerical rank in pivot order
        std::string names;
        const auto& perm = qr.colsPermutation().indices();
        for (Eigen::Index i = qr.rank(); i < perm.size(); ++i) {
            const Eigen::Index c = perm(i);
            if (!names.empty()) names += ", ";
            names += c == 0 ? "intercept" : explanatory_ids[c - 1];
        }
        throw DataError("fit_ols: design matrix is rank-deficient; dependent columns: " + names);
    }

    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd resid = y - X * beta;

    const double dof = static_cast<double>(n) - static_cast<double>(k) - 1.0;
    const double sse = resid.squaredNorm();
    const double mean_y = y.mean();
    const double sst = (y.array() - mean_y).square().sum();
    const double sigma2 = sse / dof;

    // covariance from the triangular factor: (X'X)^-1 = P R^-1 R^-T P'
    Eigen::MatrixXd R = qr.matrixR()
                            .topLeftCorner(k + 1, k + 1)
                            .triangularView<Eigen::Upper>();
    Eigen::MatrixXd Rinv = R.inverse();
    Eigen::MatrixXd cov = qr.colsPermutation() * (Rinv * Rinv.transpose()) *
                          qr.colsPermutation().transpose() * sigma2;

    RegressionModel m;
    m.n = n;
    m.variable_ids = explanatory_ids;
    m.intercept = beta(0);
    m.coefficients.assign(beta.data() + 1, beta.data() + k + 1);
    m.r_squared = sst > 0 ? 1.0 - sse / sst : 1.0;
    m.residuals.assign(resid.data(), resid.data() + n);
    for (size_t j = 0; j <= k; ++j) {
        const double se = std::sqrt(cov(j, j));
        const double t = beta(j) / se;
        m.standard_errors.push_back(se);
        m.t_stats.push_back(t);
        m.p_values.push_back(stats::student_t_two_sided_p(t, dof));
    }
    return m;
}

double predict(const RegressionModel& model, const std::vector<double>& x) {
    if (x.size() != model.coefficients.size())
        throw DomainError("predict: expected " + std::to_string(model.coefficients.size()) +
                          " values, got " + std::to_string(x.size()));
    double y = model.intercept;
    for (size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw DomainError("predict: non-finite input");
        y += model.coefficients[i] * x[i];
    }
    return y;
}

std::string model_to_json(const RegressionModel& model) {
    json doc;
    doc["intercept"] = model.intercept;
    doc["intercept_se"] = model.standard_errors.at(0);
    doc["r_squared"] = model.r_squared;
    doc["n"] = model.n;
    json coeffs = json::array();
    for (size_t j = 0; j < model.coefficients.size(); ++j) {
        coeffs.push_back({{"id", model.variable_ids[j]},
                          {"beta", model.coefficients[j]},
                          {"se", model.standard_errors[j + 1]},
                          {"t", model.t_stats[j + 1]},
                          {"p", model.p_values[j + 1]}});
    }
    doc["coefficients"] = std::move(coeffs);
    return doc.dump(2) + "\n";
}

RegressionModel model_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("model JSON: ") + e.what());
    }
    RegressionModel m;
    m.intercept = doc.at("intercept").get<double>();
    m.r_squared = doc.at("r_squared").get<double>();
    m.n = doc.at("n").get<size_t>();
    m.standard_errors.push_back(doc.value("intercept_se", 0.0));
    m.t_stats.push_back(0.0);
    m.p_values.push_back(1.0);
    for (const auto& c : doc.at("coefficients")) {
        m.variable_ids.push_back(c.at("id").get<std::string>());
        m.coefficients.push_back(c.at("beta").get<double>());
        m.standard_errors.push_back(c.value("se", 0.0));
        m.t_stats.push_back(c.value("t", 0.0));
        m.p_values.push_back(c.value("p", 1.0));
    }
    return m;
}

std::string correlation_report_to_json(const CorrelationReport& report) {
    json doc;
    doc["response_item"] = report.response_item;
    doc["r_min"] = report.r_min;
    doc["p_max"] = report.p_max;
    json items = json::array();
    for (const auto& e : report.entries) {
        json it{{"id", e.id}, {"scorable", e.scorable}, {"selected", e.selected}};
        if (e.scorable) {
            it["r"] = e.r;
            it["t"] = e.t_stat;
            it["p"] = e.p_value;
        }
        items.push_back(std::move(it));
    }
    doc["items"] = std::move(items);
    return doc.dump(2) + "\n";
}

}  // namespace sopma::survey
