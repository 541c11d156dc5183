#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riswpc/analytic.hpp"
#include "riswpc/montecarlo.hpp"
#include "riswpc/params.hpp"

// Parameter-sweep driver: one analytic (and optionally Monte Carlo) link
// evaluation per grid value, plus an analytic-vs-empirical comparison
// report. Per-grid-point seeds are derived by hashing (master seed,
// variable, value), so extending a grid never perturbs existing rows.

namespace riswpc::experiment {

enum class SweepVariable { elements, pb_dbm, alpha, target_rate, zeta, sigma2_dbm };

inline const char* variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::elements: return "m";
        case SweepVariable::pb_dbm: return "pb_dbm";
        case SweepVariable::alpha: return "alpha";
        case SweepVariable::target_rate: return "r";
        case SweepVariable::zeta: return "zeta";
        case SweepVariable::sigma2_dbm: return "sigma2_dbm";
    }
    throw std::logic_error("variable_name: unknown sweep variable");
}

/// Returns base with the swept variable replaced by value; element counts
/// must be positive integers.
inline SystemParams apply_variable(SystemParams base, SweepVariable v, double value) {
    switch (v) {
        case SweepVariable::elements:
            if (!(value >= 1.0) || value != std::floor(value)) {
                throw std::invalid_argument("sweep over m requires integer values >= 1, got " +
                                            std::to_string(value));
            }
            base.m = static_cast<std::size_t>(value);
            break;
        case SweepVariable::pb_dbm: base.p_b_dbm = value; break;
        case SweepVariable::alpha: base.alpha = value; break;
        case SweepVariable::target_rate: base.r = value; break;
        case SweepVariable::zeta: base.zeta = value; break;
        case SweepVariable::sigma2_dbm: base.sigma2_dbm = value; break;
    }
    return base;
}

struct SweepSpec {
    SweepVariable variable = SweepVariable::elements;
    std::vector<double> grid;
    SystemParams base;
    std::optional<mc::McConfig> mc;      // empty = analytic-only sweep
    bool rate_time_fraction = false;     // apply the (1-alpha) prefactor to rates

    void validate() const {
        if (grid.empty()) throw std::invalid_argument("SweepSpec: grid must be non-empty");
        for (std::size_t i = 1; i < grid.size(); ++i) {
            if (!(grid[i] > grid[i - 1])) {
                throw std::invalid_argument("SweepSpec: grid must be strictly increasing");
            }
        }
        for (double v : grid) apply_variable(base, variable, v).validate();
        if (mc) mc->validate();
    }
};

struct SweepRow {
    double value = 0.0;
    double outage_analytic = 0.0;
    double rate_analytic = 0.0;
    std::optional<mc::McEstimate> outage_mc;
    std::optional<mc::McEstimate> rate_mc;
};

/// Sub-stream seed for one grid point, a pure function of
/// (master seed, variable, value).
inline std::uint64_t grid_point_seed(std::uint64_t master, SweepVariable v, double value) {
    std::uint64_t h = mc::detail::mix64(master);
    h = mc::detail::mix64(h ^ mc::detail::mix64(static_cast<std::uint64_t>(v) + 1));
    return mc::detail::mix64(h ^ std::bit_cast<std::uint64_t>(value));
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<SweepRow> rows;
    rows.reserve(spec.grid.size());
    for (double value : spec.grid) {
        try {
            const SystemParams p = apply_variable(spec.base, spec.variable, value);
            SweepRow row;
            row.value = value;
            row.outage_analytic = analytic::outage_probability(p);
            row.rate_analytic = analytic::ergodic_rate(p, spec.rate_time_fraction);
            if (spec.mc) {
                mc::McConfig point_mc = *spec.mc;
                point_mc.seed = grid_point_seed(spec.mc->seed, spec.variable, value);
                row.outage_mc = mc::simulate_outage(p, point_mc);
                row.rate_mc = mc::simulate_rate(p, point_mc, spec.rate_time_fraction);
            }
            rows.push_back(std::move(row));
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("sweep failed at ") +
                                     variable_name(spec.variable) + "=" +
                                     std::to_string(value) + ": " + e.what());
        }
    }
    return rows;
}

struct RowGap {
    double value = 0.0;
    double outage_gap = 0.0;    // |analytic - mc mean|, absolute
    double rate_rel_gap = 0.0;  // |analytic - mc mean| / |mc mean|
    bool flagged = false;
};

struct ComparisonSummary {
    double max_outage_gap = 0.0;
    double max_outage_gap_at = 0.0;
    double max_rate_rel_gap = 0.0;
    double max_rate_rel_gap_at = 0.0;
    bool all_within_tolerance = true;
    std::vector<RowGap> rows;
};

/// Worst-case analytic-vs-Monte-Carlo gaps over a sweep. Rows must carry
/// Monte Carlo estimates.
inline ComparisonSummary compare_report(const std::vector<SweepRow>& rows,
                                        double outage_tolerance = 0.02,
                                        double rate_rel_tolerance = 0.05) {
    if (rows.empty()) {
        throw std::invalid_argument("compare_report: no rows to compare");
    }
    ComparisonSummary summary;
    summary.rows.reserve(rows.size());
    for (const SweepRow& row : rows) {
        if (!row.outage_mc || !row.rate_mc) {
            throw std::invalid_argument("compare_report: row at value " +
                                        std::to_string(row.value) +
                                        " lacks Monte Carlo estimates");
        }
        RowGap gap;
        gap.value = row.value;
        gap.outage_gap = std::fabs(row.outage_analytic - row.outage_mc->mean);
        const double mc_rate = row.rate_mc->mean;
        if (mc_rate != 0.0) {
            gap.rate_rel_gap = std::fabs(row.rate_analytic - mc_rate) / std::fabs(mc_rate);
        } else {
            gap.rate_rel_gap = row.rate_analytic == 0.0
                                   ? 0.0
                                   : std::numeric_limits<double>::infinity();
        }
        gap.flagged = gap.outage_gap > outage_tolerance || gap.rate_rel_gap > rate_rel_tolerance;
        summary.all_within_tolerance = summary.all_within_tolerance && !gap.flagged;
        if (gap.outage_gap >= summary.max_outage_gap) {
            summary.max_outage_gap = gap.outage_gap;
            summary.max_outage_gap_at = gap.value;
        }
        if (gap.rate_rel_gap >= summary.max_rate_rel_gap) {
            summary.max_rate_rel_gap = gap.rate_rel_gap;
            summary.max_rate_rel_gap_at = gap.value;
        }
        summary.rows.push_back(gap);
    }
    return summary;
}

} // namespace riswpc::experiment
