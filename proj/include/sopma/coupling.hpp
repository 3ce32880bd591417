#pragma once

#include <map>
#include <string>
#include <vector>

#include "sopma/survey.hpp"
#include "sopma/sweep.hpp"

namespace sopma::coupling {

struct Baseline {
    double p0;  // yen/yr, zero-renewables cost
    double u0 = 0;
    double d0 = 0;
};

struct MeanVector {
    std::vector<std::string> ids;  // same order as the regression model
    std::vector<double> values;    // each in [0,1]
    std::vector<bool> anchored;    // false for defaulted, uncalibrated means
    std::string source;

    double at(const std::string& id) const;
};

enum class Modifier { Cost, Renewable, Circulation };

Modifier modifier_from_name(const std::string& name);
std::string modifier_name(Modifier m);

struct ValueTypeSpec {
    std::string name;
    // per-variable modifier multiset; variables absent from the map carry none
    std::map<std::string, std::vector<Modifier>> modifiers;
    double s_elec = 0.037;  // household expense share of electricity
};

// The three built-in resident value types, expressed over the model's
// ordered variable ids (requires at least eight variables).
std::vector<ValueTypeSpec> builtin_presets(const std::vector<std::string>& variable_ids,
                                           double s_elec = 0.037);

// 1 / (s_other + s_elec * p/p0): unity at p = p0, decreasing in p.
double cost_modifier(double p, double p0, double s_elec);
// (1 + u) / (1 + u0): unity at u = u0, increasing in u.
double renewable_modifier(double u, double u0);
// (1 + d) / (1 + d0)
double circulation_modifier(double d, double d0);

// chi_ik: the mean value of one explanatory variable times the product of
// its modifier factors for a candidate's KPI triple.
double chi(double x_i, const ValueTypeSpec& spec, const mabs::PolicyIndices& indices,
           const Baseline& baseline, const std::string& variable_id);

// psi_k = beta0 + sum_i beta_i * chi_ik
double evaluate_psi(const survey::RegressionModel& model, const MeanVector& means,
                    const ValueTypeSpec& spec, const mabs::PolicyIndices& indices,
                    const Baseline& baseline);

struct CouplingResult {
    std::string type_name;
    std::vector<double> psi;  // one per candidate, in k order
    long k_opt = 0;
    mabs::PolicyParams params_opt;
    mabs::PolicyIndices indices_opt;
    double psi_opt = 0;
    std::map<std::string, double> chi_opt;  // per-variable audit at the optimum
};

CouplingResult select_optimal(const sweep::CandidateSet& set,
                              const survey::RegressionModel& model, const MeanVector& means,
                              const ValueTypeSpec& spec, const Baseline& baseline);

// Builds a mean vector from normalized survey columns.
MeanVector means_from_survey(const survey::SurveyMatrix& matrix,
                             const std::vector<std::string>& variable_ids);

// Calibration anchors: solves known psi deltas for the two means
// the deltas pin down (the Economy 2 variable from a cost-only type, then
// the Ecology 2 variable from a renewable+circulation+cost type).
struct DeltaAnchor {
    double psi_delta;  // psi_k - psi at baseline
    mabs::PolicyIndices indices;
};

double solve_cost_anchor(const survey::RegressionModel& model, const std::string& variable_id,
                         const DeltaAnchor& anchor, const Baseline& baseline, double s_elec);
double solve_renewable_anchor(const survey::RegressionModel& model,
                              const std::string& renewable_id, const std::string& cost_id,
                              double cost_mean, const DeltaAnchor& anchor,
                              const Baseline& baseline, double s_elec);

std::string result_to_json(const CouplingResult& result, const Baseline& baseline);

}  // namespace sopma::coupling
