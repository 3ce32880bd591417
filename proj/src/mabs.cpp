#include "sopma/mabs.hpp"

#include <algorithm>
#include <cmath>

#include "sopma/errors.hpp"
#include "sopma/sensor.hpp"

namespace sopma::mabs {

HourFlows dispatch_hour(HourlyState& state, double generation, double demand,
                        const AgentConfig& config) {
    if (generation < 0 || demand < 0)
        throw DomainError("dispatch_hour: negative generation or demand");
    HourFlows f;
    f.direct = std::min(generation, demand);
    const double surplus = generation - f.direct;
    double deficit = demand - f.direct;

    if (surplus > 0) {
        f.battery_in = std::min(surplus, state.capacity - state.charge);
        state.charge += f.battery_in;
        f.curtail = surplus - f.battery_in;
    } else if (deficit > 0) {
        const double deliverable = state.charge * config.battery_efficiency;
        f.battery_out = std::min(deliverable, deficit);
        if (f.battery_out > 0) {
            state.charge -= f.battery_out / config.battery_efficiency;
            if (state.charge < 0) state.charge = 0;  // guard against roundoff
            deficit -= f.battery_out;
        }
        f.grid = deficit;
    }

    state.renewable_consumed += f.direct + f.battery_out;
    state.grid_import += f.grid;
    state.curtailed += f.curtail;
    return f;
}

CostBreakdown annual_cost(const PolicyParams& params, double grid_import_kwh,
                          double local_delivered_kwh, const AgentConfig& config) {
    if (config.pv_service_life <= 0 || config.hydro_service_life <= 0 ||
        config.battery_service_life <= 0)
        throw DomainError("annual_cost: service lives must be positive");
    if (config.pv_unit_cost < 0 || config.hydro_unit_cost < 0 || config.battery_unit_cost < 0 ||
        config.grid_tariff < 0 || config.consignment_charge < 0)
        throw DomainError("annual_cost: negative cost parameter");

    CostBreakdown b;
    b.grid = config.grid_tariff * grid_import_kwh;
    auto add = [&](double amount, bool local) {
        (local ? b.amortized_local : b.amortized_external) += amount;
    };
    add(config.pv_unit_cost * params.pv_kw / config.pv_service_life, config.pv_local);
    add(config.hydro_unit_cost * params.hydro_m / config.hydro_service_life, config.hydro_local);
    add(config.battery_unit_cost * params.battery_kwh / config.battery_service_life,
        config.battery_local);
    if (config.consignment_applies_to_local)
        b.consignment = config.consignment_charge * local_delivered_kwh;
    return b;
}

double utilization_rate(double renewable_consumed_kwh, double total_demand_kwh) {
    if (total_demand_kwh <= 0) throw DomainError("utilization_rate: demand must be positive");
    return std::clamp(renewable_consumed_kwh / total_demand_kwh, 0.0, 1.0);
}

double circulation_rate(const CostBreakdown& breakdown, const AgentConfig& config) {
    const double total = breakdown.total();
    if (total <= 0) throw DomainError("circulation_rate: total cost must be positive");
    return std::clamp(breakdown.in_region(config) / total, 0.0, 1.0);
}

PolicyIndices simulate_year(const PolicyParams& params, std::span<const double> pv_per_kw,
                            std::span<const double> hydro_per_m,
                            std::span<const double> demand, const AgentConfig& config) {
    const size_t n = static_cast<size_t>(sensor::kYearHours);
    if (pv_per_kw.size() != n || hydro_per_m.size() != n || demand.size() != n)
        throw DomainError("simulate_year: profiles must have exactly 8760 hours");
    if (params.pv_kw < 0 || params.hydro_m < 0 || params.battery_kwh < 0 ||
        !std::isfinite(params.pv_kw + params.hydro_m + params.battery_kwh))
        throw DomainError("simulate_year: policy parameters must be nonnegative and finite");

    HourlyState state;
    state.capacity = params.battery_kwh;
    PolicyIndices out;
    double total_demand = 0;
    for (size_t h = 0; h < n; ++h) {
        const double pv = params.pv_kw * pv_per_kw[h];
        const double hy = params.hydro_m * hydro_per_m[h];
        out.annual_pv_kwh += pv;
        out.annual_hydro_kwh += hy;
        total_demand += demand[h];
        dispatch_hour(state, pv + hy, demand[h], config);
    }
    out.curtailed_kwh = state.curtailed;
    const auto breakdown =
        annual_cost(params, state.grid_import, state.renewable_consumed, config);
    out.cost_p = breakdown.total();
    out.grid_purchase = breakdown.grid;
    out.utilization_u = utilization_rate(state.renewable_consumed, total_demand);
    out.circulation_d = circulation_rate(breakdown, config);
    return out;
}

}  // namespace sopma::mabs
