#include "sopma/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "sopma/csv.hpp"
#include "sopma/errors.hpp"

namespace sopma::sweep {

long AxisSpec::count() const {
    if (step <= 0) throw ConfigError("axis step must be positive");
    if (max < min) throw ConfigError("axis max below min");
    return static_cast<long>(std::floor((max - min) / step + 1e-9)) + 1;
}

std::vector<mabs::PolicyParams> generate_grid(const SweepGrid& grid) {
    const long l = grid.candidate_count();
    if (l > grid.max_candidates)
        throw ConfigError("grid too large: " + std::to_string(l) + " candidates exceed limit " +
                          std::to_string(grid.max_candidates));
    std::vector<mabs::PolicyParams> out;
    out.reserve(static_cast<size_t>(l));
    long k = 1;
    for (long i = 0; i < grid.pv.count(); ++i) {
        const double pv = grid.pv.min + grid.pv.step * static_cast<double>(i);
        for (long j = 0; j < grid.hydro.count(); ++j) {
            const double hy = grid.hydro.min + grid.hydro.step * static_cast<double>(j);
            for (long b = 0; b < grid.battery.count(); ++b) {
                const double bt = grid.battery.min + grid.battery.step * static_cast<double>(b);
                out.push_back({pv, hy, bt, k++});
            }
        }
    }
    return out;
}

CandidateSet evaluate_all(const std::vector<mabs::PolicyParams>& grid,
                          std::span<const double> pv_per_kw,
                          std::span<const double> hydro_per_m, std::span<const double> demand,
                          const mabs::AgentConfig& config, int workers) {
    CandidateSet set;
    set.candidates.resize(grid.size());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, std::max<size_t>(grid.size(), 1));

    std::atomic<size_t> next{0};
    std::atomic<long> failed_k{-1};
    std::string error_msg;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            const size_t i = next.fetch_add(64);
            if (i >= grid.size() || failed_k.load() >= 0) break;
            const size_t end = std::min(i + 64, grid.size());
            for (size_t j = i; j < end; ++j) {
                try {
                    set.candidates[j] = {grid[j], mabs::simulate_year(grid[j], pv_per_kw,
                                                                      hydro_per_m, demand,
                                                                      config)};
                } catch (const std::exception& e) {
                    std::lock_guard lock(error_mutex);
                    failed_k.store(grid[j].k);
                    error_msg = e.what();
                    return;
                }
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failed_k.load() >= 0)
        throw Error("candidate k=" + std::to_string(failed_k.load()) +
                    " failed: " + error_msg);
    return set;
}

std::vector<TernaryPoint> ternary_coords(const CandidateSet& set) {
    if (set.candidates.empty()) throw DomainError("ternary_coords: empty candidate set");
    double p_min = std::numeric_limits<double>::infinity();
    for (const auto& c : set.candidates) {
        if (c.indices.cost_p <= 0) throw DomainError("ternary_coords: nonpositive cost");
        p_min = std::min(p_min, c.indices.cost_p);
    }
    std::vector<TernaryPoint> out;
    out.reserve(set.candidates.size());
    for (const auto& c : set.candidates) {
        TernaryPoint pt;
        pt.k = c.params.k;
        const double s = c.indices.circulation_d;
        const double e = c.indices.utilization_u;
        const double p = p_min / c.indices.cost_p;
        const double sum = s + e + p;
        if (sum <= 0) {
            pt.social = pt.ecological = pt.economic = 1.0 / 3.0;
            pt.degenerate = true;
        } else {
            pt.social = s / sum;
            pt.ecological = e / sum;
            pt.economic = p / sum;
        }
        out.push_back(pt);
    }
    return out;
}

void write_candidates_csv(const std::string& path, const CandidateSet& set,
                          const std::vector<TernaryPoint>& ternary) {
    if (ternary.size() != set.candidates.size())
        throw DomainError("write_candidates_csv: ternary point count mismatch");
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "k,pv_kw,hydro_m,battery_kwh,cost,u,d,grid_purchase,annual_pv_kwh,"
           "annual_hydro_kwh,curtailed_kwh,ternary_social,ternary_ecological,"
           "ternary_economic\n";
    auto f = csv::format_double;
    for (size_t i = 0; i < set.candidates.size(); ++i) {
        const auto& c = set.candidates[i];
        const auto& t = ternary[i];
        out << c.params.k << "," << f(c.params.pv_kw) << "," << f(c.params.hydro_m) << ","
            << f(c.params.battery_kwh) << "," << f(c.indices.cost_p) << ","
            << f(c.indices.utilization_u) << "," << f(c.indices.circulation_d) << ","
            << f(c.indices.grid_purchase) << "," << f(c.indices.annual_pv_kwh) << ","
            << f(c.indices.annual_hydro_kwh) << "," << f(c.indices.curtailed_kwh) << ","
            << f(t.social) << "," << f(t.ecological) << "," << f(t.economic) << "\n";
    }
}

CandidateSet read_candidates_csv(const std::string& path) {
    auto table = csv::read_table(path);
    CandidateSet set;
    for (size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        auto num = [&](size_t c) {
            auto v = csv::parse_double(row.at(c));
            if (!v) throw ParseError(path + ": bad numeric cell", table.line_numbers[r]);
            return *v;
        };
        Candidate c;
        c.params.k = static_cast<long>(num(0));
        c.params.pv_kw = num(1);
        c.params.hydro_m = num(2);
        c.params.battery_kwh = num(3);
        c.indices.cost_p = num(4);
        c.indices.utilization_u = num(5);
        c.indices.circulation_d = num(6);
        c.indices.grid_purchase = num(7);
        c.indices.annual_pv_kwh = num(8);
        c.indices.annual_hydro_kwh = num(9);
        c.indices.curtailed_kwh = num(10);
        set.candidates.push_back(std::move(c));
    }
    return set;
}

void write_ternary_svg(const std::string& path, const std::vector<TernaryPoint>& points,
                       const std::vector<long>& highlight) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    // fixed 640x600 viewport; vertices: social (top), ecological (bottom
    // left), economic (bottom right)
    const double x_s = 320, y_s = 60;
    const double x_e = 80, y_e = 500;
    const double x_c = 560, y_c = 500;
    auto fp = [](double v) { return csv::format_fixed(v, 4); };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"600\" "
           "viewBox=\"0 0 640 600\">\n";
    out << "<polygon points=\"" << fp(x_s) << "," << fp(y_s) << " " << fp(x_e) << "," << fp(y_e)
        << " " << fp(x_c) << "," << fp(y_c)
        << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fp(x_s) << "\" y=\"" << fp(y_s - 16)
        << "\" text-anchor=\"middle\" font-size=\"14\">social</text>\n";
    out << "<text x=\"" << fp(x_e - 10) << "\" y=\"" << fp(y_e + 24)
        << "\" text-anchor=\"middle\" font-size=\"14\">ecological</text>\n";
    out << "<text x=\"" << fp(x_c + 10) << "\" y=\"" << fp(y_c + 24)
        << "\" text-anchor=\"middle\" font-size=\"14\">economic</text>\n";
    auto emit = [&](const TernaryPoint& p, bool hl) {
        const double x = p.social * x_s + p.ecological * x_e + p.economic * x_c;
        const double y = p.social * y_s + p.ecological * y_e + p.economic * y_c;
        if (hl) {
            out << "<circle cx=\"" << fp(x) << "\" cy=\"" << fp(y)
                << "\" r=\"6\" fill=\"#d62728\" stroke=\"#000000\"><title>k=" << p.k
                << "</title></circle>\n";
        } else {
            out << "<circle cx=\"" << fp(x) << "\" cy=\"" << fp(y)
                << "\" r=\"1.5\" fill=\"#1f77b4\" fill-opacity=\"0.35\"/>\n";
        }
    };
    for (const auto& p : points)
        if (std::find(highlight.begin(), highlight.end(), p.k) == highlight.end())
            emit(p, false);
    for (long k : highlight)
        for (const auto& p : points)
            if (p.k == k) emit(p, true);
    out << "</svg>\n";
}

}  // namespace sopma::sweep
