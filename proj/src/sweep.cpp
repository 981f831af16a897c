#include "ddpinn/sweep.hpp"

#include "ddpinn/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace ddpinn {

double median(std::vector<double> values)
{
    if (values.empty())
        return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<CollocationCounts> parse_triples(const std::string& text)
{
    std::vector<CollocationCounts> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::replace(item.begin(), item.end(), ':', ',');
        std::vector<int> v = parse_int_list(item);
        if (v.size() != 3 && v.size() != 4)
            throw ConfigError("count triple must be m_interior:m_boundary:m_interface[:m_initial]");
        for (int c : v)
            if (c < 0)
                throw ConfigError("negative collocation count");
        CollocationCounts c;
        c.interior = static_cast<std::size_t>(v[0]);
        c.boundary = static_cast<std::size_t>(v[1]);
        c.interface = static_cast<std::size_t>(v[2]);
        c.initial = v.size() == 4 ? static_cast<std::size_t>(v[3]) : 0;
        out.push_back(c);
    }
    if (out.empty())
        throw ConfigError("empty triple list");
    return out;
}

SweepConfig sweep_config_from(KeyValues& kv)
{
    SweepConfig s;
    std::optional<std::string> triples, seeds, modes, dir;
    auto take = [&](const char* key, std::optional<std::string>& out) {
        if (auto it = kv.find(key); it != kv.end()) {
            out = it->second;
            kv.erase(it);
        }
    };
    take("triples", triples);
    take("n_seeds", seeds);
    take("modes", modes);
    take("sweep_dir", dir);
    s.base = train_config_from(kv);
    if (triples)
        s.triples = parse_triples(*triples);
    else
        s.triples = {s.base.counts};
    if (seeds) {
        std::vector<int> v = parse_int_list(*seeds);
        if (v.size() != 1 || v[0] < 1)
            throw ConfigError("n_seeds must be a single positive integer");
        s.n_seeds = v[0];
    }
    if (modes) {
        s.modes.clear();
        std::istringstream in(*modes);
        for (std::string m; std::getline(in, m, ',');)
            s.modes.push_back(parse_mode(m));
    }
    s.output_dir = dir ? *dir : s.base.output_dir;
    return s;
}

TrainConfig sweep_row_config(const SweepConfig& sweep, const CollocationCounts& counts,
                             ActivationMode mode, int k)
{
    TrainConfig c = sweep.base;
    c.counts = counts;
    c.mode = mode;
    c.sample_seed = sweep.base.sample_seed + static_cast<std::uint64_t>(k);
    c.init_seed = sweep.base.init_seed + static_cast<std::uint64_t>(k);
    c.validation_seed = sweep.base.validation_seed + static_cast<std::uint64_t>(k);
    return c;
}

std::vector<SweepRow> run_sweep(const SweepConfig& sweep, const SweepProgressFn& progress)
{
    if (sweep.triples.empty())
        throw ConfigError("sweep needs at least one count triple");
    if (sweep.n_seeds < 1)
        throw ConfigError("n_seeds must be at least 1");
    if (sweep.modes.empty())
        throw ConfigError("sweep needs at least one activation mode");

    std::vector<SweepRow> rows;
    for (const auto& counts : sweep.triples) {
        for (ActivationMode mode : sweep.modes) {
            std::vector<double> finals;
            double wall = 0;
            for (int k = 0; k < sweep.n_seeds; ++k) {
                SweepRow row;
                row.counts = counts;
                row.mode = mode;
                TrainConfig c = sweep_row_config(sweep, counts, mode, k);
                row.seed = c.sample_seed;
                try {
                    c.validate();
                    TrainRecord rec = train(c);
                    row.final_val_rel_l2 = rec.final_val_rel_l2();
                    row.wall_clock_s = rec.wall_clock_s;
                    if (sweep.output_dir) {
                        std::ostringstream name;
                        name << counts.interior << '_' << counts.boundary << '_'
                             << counts.interface << '_' << mode_name(mode) << "_seed" << row.seed;
                        row.subdir = name.str();
                        auto dir = std::filesystem::path(*sweep.output_dir) / row.subdir;
                        std::filesystem::create_directories(dir);
                        std::ofstream m(dir / "metrics.csv");
                        write_metrics_csv(rec, m);
                        std::ofstream s(dir / "summary.txt");
                        write_summary(rec, s);
                    }
                    finals.push_back(row.final_val_rel_l2);
                    wall += row.wall_clock_s;
                } catch (const std::exception& e) {
                    row.ok = false;
                    row.error = e.what();
                    row.final_val_rel_l2 = std::numeric_limits<double>::quiet_NaN();
                }
                if (progress)
                    progress(row);
                rows.push_back(row);
            }
            SweepRow med;
            med.counts = counts;
            med.mode = mode;
            med.median = true;
            med.ok = !finals.empty();
            med.final_val_rel_l2 = median(finals);
            med.wall_clock_s = wall;
            if (!med.ok)
                med.error = "no successful rows";
            if (progress)
                progress(med);
            rows.push_back(med);
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& os)
{
    os << "m_interior,m_boundary,m_interface,seed,mode,final_val_rel_l2,wall_clock_s\n";
    os << std::setprecision(17);
    for (const auto& r : rows) {
        os << r.counts.interior << ',' << r.counts.boundary << ',' << r.counts.interface << ',';
        if (r.median)
            os << "median";
        else
            os << r.seed;
        os << ',' << mode_name(r.mode) << ',';
        if (r.ok)
            os << r.final_val_rel_l2;
        else
            os << "nan";
        os << ',' << r.wall_clock_s << '\n';
    }
}

std::vector<std::string> monotonicity_warnings(const std::vector<SweepRow>& rows)
{
    std::vector<std::string> warnings;
    for (ActivationMode mode : {ActivationMode::MultiActivation, ActivationMode::TanhOnly}) {
        const SweepRow* prev = nullptr;
        for (const auto& r : rows) {
            if (!r.median || r.mode != mode || !r.ok)
                continue;
            if (prev && r.final_val_rel_l2 > prev->final_val_rel_l2) {
                std::ostringstream w;
                w << std::setprecision(4) << mode_name(mode) << ": median error rises from "
                  << prev->final_val_rel_l2 << " at (" << prev->counts.interior << ','
                  << prev->counts.boundary << ',' << prev->counts.interface << ") to "
                  << r.final_val_rel_l2 << " at (" << r.counts.interior << ','
                  << r.counts.boundary << ',' << r.counts.interface << ")";
                warnings.push_back(w.str());
            }
            prev = &r;
        }
    }
    return warnings;
}

}  // namespace ddpinn
