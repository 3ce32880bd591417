#pragma once

#include <span>
#include <vector>

namespace sopma::mabs {

struct PolicyParams {
    double pv_kw = 0;        // installed PV capacity
    double hydro_m = 0;      // effective drop in meters
    double battery_kwh = 0;  // storage capacity
    long k = 0;              // candidate index
};

struct AgentConfig {
    double pv_unit_cost = 0;      // yen/kW
    double pv_service_life = 1;   // years
    bool pv_local = true;
    double hydro_unit_cost = 0;   // yen per meter of drop
    double hydro_service_life = 1;
    bool hydro_local = true;
    double battery_unit_cost = 0;  // yen/kWh
    double battery_service_life = 1;
    bool battery_local = true;
    double battery_efficiency = 0.9;  // round trip, applied on discharge
    double grid_tariff = 0;           // yen/kWh
    double consignment_charge = 0;    // yen/kWh on locally delivered energy
    bool consignment_applies_to_local = true;
    bool consignment_local = true;    // consignment revenue retained in-region
};

struct HourlyState {
    double capacity = 0;  // battery kWh
    double charge = 0;    // current battery content, within [0, capacity]
    // cumulative tallies over the simulated hours
    double renewable_consumed = 0;  // served directly + from battery
    double grid_import = 0;
    double curtailed = 0;
};

struct HourFlows {
    double direct = 0;       // renewables to demand
    double battery_in = 0;   // surplus stored
    double battery_out = 0;  // delivered from storage (after efficiency)
    double grid = 0;
    double curtail = 0;
};

// Priority dispatch: renewables serve demand, surplus charges the battery,
// the rest is curtailed; deficits discharge the battery, then import.
HourFlows dispatch_hour(HourlyState& state, double generation, double demand,
                        const AgentConfig& config);

struct CostBreakdown {
    double grid = 0;          // energy purchased from the power company
    double amortized_local = 0;
    double amortized_external = 0;
    double consignment = 0;
    double total() const { return grid + amortized_local + amortized_external + consignment; }
    double in_region(const AgentConfig& config) const {
        return amortized_local + (config.consignment_local ? consignment : 0.0);
    }
};

CostBreakdown annual_cost(const PolicyParams& params, double grid_import_kwh,
                          double local_delivered_kwh, const AgentConfig& config);

double utilization_rate(double renewable_consumed_kwh, double total_demand_kwh);
double circulation_rate(const CostBreakdown& breakdown, const AgentConfig& config);

struct PolicyIndices {
    double cost_p = 0;         // yen/yr borne by residents
    double utilization_u = 0;
    double circulation_d = 0;
    double grid_purchase = 0;  // yen/yr
    double annual_pv_kwh = 0;
    double annual_hydro_kwh = 0;
    double curtailed_kwh = 0;
};

PolicyIndices simulate_year(const PolicyParams& params, std::span<const double> pv_per_kw,
                            std::span<const double> hydro_per_m,
                            std::span<const double> demand, const AgentConfig& config);

}  // namespace sopma::mabs
