#include "sopma/coupling.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "sopma/errors.hpp"

namespace sopma::coupling {

using json = nlohmann::ordered_json;

double MeanVector::at(const std::string& id) const {
    for (size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return values[i];
    throw DomainError("mean vector has no variable '" + id + "'");
}

Modifier modifier_from_name(const std::string& name) {
    if (name == "cost") return Modifier::Cost;
    if (name == "renewable") return Modifier::Renewable;
    if (name == "circulation") return Modifier::Circulation;
    throw ConfigError("unknown modifier name '" + name + "'");
}

std::string modifier_name(Modifier m) {
    switch (m) {
        case Modifier::Cost: return "cost";
        case Modifier::Renewable: return "renewable";
        case Modifier::Circulation: return "circulation";
    }
    return "?";
}

std::vector<ValueTypeSpec> builtin_presets(const std::vector<std::string>& variable_ids,
                                           double s_elec) {
    if (variable_ids.size() < 8)
        throw DomainError("built-in presets need the eight-variable model, got " +
                          std::to_string(variable_ids.size()) + " variables");
    const auto& x3 = variable_ids[2];
    const auto& x4 = variable_ids[3];
    const auto& x6 = variable_ids[5];
    const auto& x8 = variable_ids[7];

    ValueTypeSpec a{"A", {{x8, {Modifier::Cost}}}, s_elec};
    ValueTypeSpec b{"B",
                    {{x6, {Modifier::Renewable}},
                     {x8, {Modifier::Circulation, Modifier::Cost}}},
                    s_elec};
    ValueTypeSpec c{"C",
                    {{x3, {Modifier::Circulation, Modifier::Renewable}},
                     {x4, {Modifier::Renewable}},
                     {x6, {Modifier::Renewable}},
                     {x8, {Modifier::Circulation, Modifier::Cost}}},
                    s_elec};
    return {a, b, c};
}

double cost_modifier(double p, double p0, double s_elec) {
    if (p0 <= 0) throw DomainError("cost_modifier: p0 must be positive");
    if (p < 0) throw DomainError("cost_modifier: p must be nonnegative");
    if (s_elec <= 0 || s_elec >= 1) throw DomainError("cost_modifier: s_elec outside (0,1)");
    return 1.0 / ((1.0 - s_elec) + s_elec * p / p0);
}

double renewable_modifier(double u, double u0) {
    if (u < 0 || u > 1 || u0 < 0 || u0 > 1)
        throw DomainError("renewable_modifier: rates must lie in [0,1]");
    return (1.0 + u) / (1.0 + u0);
}

double circulation_modifier(double d, double d0) {
    if (d < 0 || d > 1 || d0 < 0 || d0 > 1)
        throw DomainError("circulation_modifier: rates must lie in [0,1]");
    return (1.0 + d) / (1.0 + d0);
}

namespace {

double modifier_product(const ValueTypeSpec& spec, const mabs::PolicyIndices& indices,
                        const Baseline& baseline, const std::string& variable_id) {
    auto it = spec.modifiers.find(variable_id);
    if (it == spec.modifiers.end()) return 1.0;
    double factor = 1.0;
    for (Modifier m : it->second) {
        switch (m) {
            case Modifier::Cost:
                factor *= cost_modifier(indices.cost_p, baseline.p0, spec.s_elec);
                break;
            case Modifier::Renewable:
                factor *= renewable_modifier(indices.utilization_u, baseline.u0);
                break;
            case Modifier::Circulation:
                factor *= circulation_modifier(indices.circulation_d, baseline.d0);
                break;
        }
    }
    return factor;
}

}  // namespace

double chi(double x_i, const ValueTypeSpec& spec, const mabs::PolicyIndices& indices,
           const Baseline& baseline, const std::string& variable_id) {
    return x_i * modifier_product(spec, indices, baseline, variable_id);
}

double evaluate_psi(const survey::RegressionModel& model, const MeanVector& means,
                    const ValueTypeSpec& spec, const mabs::PolicyIndices& indices,
                    const Baseline& baseline) {
    if (means.ids != model.variable_ids)
        throw DomainError("evaluate_psi: mean vector does not match the model's variables");
    for (const auto& [id, mods] : spec.modifiers) {
        if (std::find(model.variable_ids.begin(), model.variable_ids.end(), id) ==
            model.variable_ids.end())
            throw DomainError("value type '" + spec.name + "' references unknown variable '" +
                              id + "'");
    }
    double psi = model.intercept;
    for (size_t i = 0; i < model.variable_ids.size(); ++i)
        psi += model.coefficients[i] *
               chi(means.values[i], spec, indices, baseline, model.variable_ids[i]);
    return psi;
}

CouplingResult select_optimal(const sweep::CandidateSet& set,
                              const survey::RegressionModel& model, const MeanVector& means,
                              const ValueTypeSpec& spec, const Baseline& baseline) {
    if (set.candidates.empty()) throw DomainError("select_optimal: empty candidate set");
    CouplingResult result;
    result.type_name = spec.name;
    result.psi.reserve(set.candidates.size());
    size_t best = 0;
    for (size_t i = 0; i < set.candidates.size(); ++i) {
        const double psi =
            evaluate_psi(model, means, spec, set.candidates[i].indices, baseline);
        result.psi.push_back(psi);
        // strict > keeps the smallest k on ties (candidates are in k order)
        if (psi > result.psi[best]) best = i;
    }
    const auto& opt = set.candidates[best];
    result.k_opt = opt.params.k;
    result.params_opt = opt.params;
    result.indices_opt = opt.indices;
    result.psi_opt = result.psi[best];
    for (size_t i = 0; i < model.variable_ids.size(); ++i)
        result.chi_opt[model.variable_ids[i]] =
            chi(means.values[i], spec, opt.indices, baseline, model.variable_ids[i]);
    return result;
}

MeanVector means_from_survey(const survey::SurveyMatrix& matrix,
                             const std::vector<std::string>& variable_ids) {
    MeanVector m;
    m.ids = variable_ids;
    m.source = "survey";
    for (const auto& id : variable_ids) {
        const auto col = matrix.column(matrix.item_index(id));
        double mean = 0;
        for (double v : col) mean += v;
        m.values.push_back(mean / static_cast<double>(col.size()));
        m.anchored.push_back(true);
    }
    return m;
}

double solve_cost_anchor(const survey::RegressionModel& model, const std::string& variable_id,
                         const DeltaAnchor& anchor, const Baseline& baseline, double s_elec) {
    size_t idx = model.variable_ids.size();
    for (size_t i = 0; i < model.variable_ids.size(); ++i)
        if (model.variable_ids[i] == variable_id) idx = i;
    if (idx == model.variable_ids.size())
        throw DomainError("solve_cost_anchor: unknown variable " + variable_id);
    const double factor = cost_modifier(anchor.indices.cost_p, baseline.p0, s_elec) - 1.0;
    const double denom = model.coefficients[idx] * factor;
    if (denom == 0) throw DomainError("solve_cost_anchor: anchor is insensitive to the mean");
    return anchor.psi_delta / denom;
}

double solve_renewable_anchor(const survey::RegressionModel& model,
                              const std::string& renewable_id, const std::string& cost_id,
                              double cost_mean, const DeltaAnchor& anchor,
                              const Baseline& baseline, double s_elec) {
    size_t ridx = model.variable_ids.size(), cidx = model.variable_ids.size();
    for (size_t i = 0; i < model.variable_ids.size(); ++i) {
        if (model.variable_ids[i] == renewable_id) ridx = i;
        if (model.variable_ids[i] == cost_id) cidx = i;
    }
    if (ridx == model.variable_ids.size() || cidx == model.variable_ids.size())
        throw DomainError("solve_renewable_anchor: unknown variable");
    const double cost_term =
        model.coefficients[cidx] * cost_mean *
        (circulation_modifier(anchor.indices.circulation_d, baseline.d0) *
             cost_modifier(anchor.indices.cost_p, baseline.p0, s_elec) -
         1.0);
    const double denom =
        model.coefficients[ridx] *
        (renewable_modifier(anchor.indices.utilization_u, baseline.u0) - 1.0);
    if (denom == 0)
        throw DomainError("solve_renewable_anchor: anchor is insensitive to the mean");
    return (anchor.psi_delta - cost_term) / denom;
}

std::string result_to_json(const CouplingResult& result, const Baseline& baseline) {
    json doc;
    doc["type"] = result.type_name;
    doc["k_opt"] = result.k_opt;
    doc["psi_opt"] = result.psi_opt;
    doc["params"] = {{"pv_kw", result.params_opt.pv_kw},
                     {"hydro_m", result.params_opt.hydro_m},
                     {"battery_kwh", result.params_opt.battery_kwh}};
    doc["indices"] = {{"cost", result.indices_opt.cost_p},
                      {"utilization", result.indices_opt.utilization_u},
                      {"circulation", result.indices_opt.circulation_d},
                      {"grid_purchase", result.indices_opt.grid_purchase},
                      {"annual_pv_kwh", result.indices_opt.annual_pv_kwh},
                      {"annual_hydro_kwh", result.indices_opt.annual_hydro_kwh}};
    doc["baseline"] = {{"p0", baseline.p0}, {"u0", baseline.u0}, {"d0", baseline.d0}};
    json chi_audit;
    for (const auto& [id, v] : result.chi_opt) chi_audit[id] = v;
    doc["chi"] = std::move(chi_audit);
    return doc.dump(2) + "\n";
}

}  // namespace sopma::coupling
