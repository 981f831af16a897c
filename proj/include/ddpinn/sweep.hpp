#pragma once

#include "ddpinn/config.hpp"
#include "ddpinn/training.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ddpinn {

struct SweepConfig
{
    TrainConfig base;
    std::vector<CollocationCounts> triples;
    int n_seeds = 3;
    std::vector<ActivationMode> modes{ActivationMode::MultiActivation};
    //! When set, every row writes metrics.csv and summary.txt to its own
    //! subdirectory below this path.
    std::optional<std::string> output_dir;
};

struct SweepRow
{
    CollocationCounts counts;
    ActivationMode mode = ActivationMode::MultiActivation;
    std::uint64_t seed = 0;
    bool median = false;
    bool ok = true;
    std::string error;
    double final_val_rel_l2 = 0;
    double wall_clock_s = 0;
    std::string subdir;
};

//! Seed k of a row uses base seed + k for sampling, init and validation.
TrainConfig sweep_row_config(const SweepConfig& sweep, const CollocationCounts& counts,
                             ActivationMode mode, int k);

using SweepProgressFn = std::function<void(const SweepRow&)>;

/*!
 * Rows grouped by (triple, mode): n_seeds data rows followed by a median
 * row over the rows that succeeded. A failed row is recorded and the
 * sweep continues.
 */
std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const SweepProgressFn& progress = {});

//! Columns: m_interior,m_boundary,m_interface,seed,mode,final_val_rel_l2,wall_clock_s
//! Median rows carry seed "median", failed rows "nan" errors.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os);

//! Warnings for medians that increase with the triple order, per mode.
std::vector<std::string> monotonicity_warnings(const std::vector<SweepRow>& rows);

double median(std::vector<double> values);

//! Sweep keys (triples, n_seeds, modes, sweep_dir) are consumed from kv
//! first; the rest configure the base run.
SweepConfig sweep_config_from(KeyValues& kv);

//! Parses "100:40:25,400:80:50" into count triples.
std::vector<CollocationCounts> parse_triples(const std::string& text);

}  // namespace ddpinn
