#pragma once

#include <string>
#include <vector>

#include "sopma/mabs.hpp"

namespace sopma::sweep {

struct AxisSpec {
    double min = 0;
    double max = 0;
    double step = 1;

    long count() const;  // number of grid values on this axis
};

struct SweepGrid {
    AxisSpec pv;
    AxisSpec hydro;
    AxisSpec battery;
    long max_candidates = 1'000'000;

    long candidate_count() const { return pv.count() * hydro.count() * battery.count(); }
};

// Cartesian product in row-major order: pv outer, hydro middle, battery
// inner; candidate indices k = 1..l.
std::vector<mabs::PolicyParams> generate_grid(const SweepGrid& grid);

struct Candidate {
    mabs::PolicyParams params;
    mabs::PolicyIndices indices;
};

struct CandidateSet {
    std::vector<Candidate> candidates;  // ordered by k
};

// Evaluates every candidate; results are merged by k so the output is
// identical for any worker count.
CandidateSet evaluate_all(const std::vector<mabs::PolicyParams>& grid,
                          std::span<const double> pv_per_kw,
                          std::span<const double> hydro_per_m,
                          std::span<const double> demand, const mabs::AgentConfig& config,
                          int workers = 1);

struct TernaryPoint {
    double social = 0;      // share derived from the circulation rate
    double ecological = 0;  // share derived from the utilization rate
    double economic = 0;    // share derived from relative cheapness p_min/p
    long k = 0;
    bool degenerate = false;  // all-zero score triple mapped to the centroid
};

std::vector<TernaryPoint> ternary_coords(const CandidateSet& set);

void write_candidates_csv(const std::string& path, const CandidateSet& set,
                          const std::vector<TernaryPoint>& ternary);
CandidateSet read_candidates_csv(const std::string& path);

// Deterministic scatter of the ternary balance diagram; `highlight`
// lists candidate indices drawn as emphasized markers.
void write_ternary_svg(const std::string& path, const std::vector<TernaryPoint>& points,
                       const std::vector<long>& highlight = {});

}  // namespace sopma::sweep
