#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "jet/csv.hpp"
#include "jet/kv.hpp"
#include "jet/regress.hpp"

namespace jet {

/**
 * @brief Error metrics against a declared reference range.
 *
 * Percentages are fractions of reference_range: the available speed span
 * (omega_max - omega_idle) for speed errors, the rated maximum thrust for
 * thrust errors.
 */
struct MetricsReport {
    double mae = 0.0;
    double mae_pct = 0.0;
    double max_err = 0.0;
    double max_err_pct = 0.0;
    double rmse = 0.0;
    double r_squared = 0.0;
    double reference_range = 0.0;
    std::string units;

    KvFile to_kv(const std::string& prefix = "") const {
        KvFile kv;
        kv.set(prefix + "mae", mae);
        kv.set(prefix + "mae_pct", mae_pct);
        kv.set(prefix + "max_err", max_err);
        kv.set(prefix + "max_err_pct", max_err_pct);
        kv.set(prefix + "rmse", rmse);
        kv.set(prefix + "r_squared", r_squared);
        kv.set(prefix + "reference_range", reference_range);
        kv.set(prefix + "units", units);
        return kv;
    }

    CsvTable to_csv_row() const {
        CsvTable t;
        t.header = {"mae", "mae_pct", "max_err", "max_err_pct", "rmse", "r_squared",
                    "reference_range"};
        t.columns = {{mae}, {mae_pct}, {max_err}, {max_err_pct}, {rmse}, {r_squared},
                     {reference_range}};
        return t;
    }
};

/// Scores a prediction against a reference channel; reference_range sets
/// the percentage denominator and must be > 0.
inline MetricsReport score(const std::vector<double>& truth, const std::vector<double>& estimate,
                           double reference_range, const std::string& units) {
    if (!(reference_range > 0))
        throw std::invalid_argument("score: reference_range must be > 0");
    const GoodnessStats g = goodness(truth, estimate);
    MetricsReport r;
    r.mae = g.mae;
    r.max_err = g.max_err;
    r.rmse = g.rmse;
    r.r_squared = g.r_squared;
    r.reference_range = reference_range;
    r.mae_pct = 100.0 * g.mae / reference_range;
    r.max_err_pct = 100.0 * g.max_err / reference_range;
    r.units = units;
    return r;
}

} // namespace jet
