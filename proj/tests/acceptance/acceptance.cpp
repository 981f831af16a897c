// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
// The desk-scale runs take a few minutes each on one core; runs are shared
// between criteria where the configurations coincide.

#include "ddpinn/sweep.hpp"
#include "ddpinn/training.hpp"
#include "verify.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace ddpinn;

namespace {

std::filesystem::path out_root = "acceptance_runs";
int failures = 0;

void report(int id, bool pass, const std::string& detail)
{
    failures += !pass;
    std::printf("criterion %d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

TrainConfig desk(const std::string& problem, CollocationCounts counts, ActivationMode mode,
                 std::uint64_t seed)
{
    TrainConfig c;
    c.problem = problem;
    c.counts = counts;
    c.mode = mode;
    c.sample_seed = c.init_seed = c.validation_seed = seed;
    c.hidden = {50, 50, 50};
    c.steps = 20000;
    c.adam.lr = 1e-3;
    c.log_every = 200;
    return c;
}

std::string metrics_text(const TrainRecord& r)
{
    std::ostringstream os;
    write_metrics_csv(r, os);
    return os.str();
}

// Runs are cached by a readable key so criteria can share them.
std::map<std::string, TrainRecord> cache;

const TrainRecord& run(const std::string& key, const TrainConfig& c)
{
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    std::fprintf(stderr, "[run] %s ...\n", key.c_str());
    TrainRecord r = train(c);
    std::fprintf(stderr, "[run] %s val %.4e in %.0f s\n", key.c_str(), r.final_val_rel_l2(),
                 r.wall_clock_s);
    std::filesystem::create_directories(out_root);
    std::ofstream(out_root / (key + ".csv")) << metrics_text(r);
    return cache.emplace(key, std::move(r)).first->second;
}

std::string key_of(const CollocationCounts& n, ActivationMode m, std::uint64_t seed)
{
    return "line2d_" + std::to_string(n.interior) + "_" + std::to_string(n.boundary) + "_"
           + std::to_string(n.interface) + "_" + mode_name(m) + "_seed" + std::to_string(seed);
}

const TrainRecord& line_run(const CollocationCounts& n, ActivationMode m, std::uint64_t seed)
{
    return run(key_of(n, m, seed), desk("line2d", n, m, seed));
}

void property(int id, const verify::CheckResult& r)
{
    const bool fast = r.seconds < 60;
    report(id, r.pass && fast,
           r.name + ": " + r.detail + " (" + fmt(r.seconds) + " s" + (fast ? "" : ", over 1 min")
               + ")");
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc > 1)
        out_root = argv[1];

    property(1, verify::check_derivatives(0));
    property(2, verify::check_geometry(0));
    property(3, verify::check_manufactured(0));

    const CollocationCounts main_counts{400, 80, 50, 0};
    const auto maf = ActivationMode::MultiActivation;
    const auto tanh_only = ActivationMode::TanhOnly;

    const TrainRecord& c4 = line_run(main_counts, maf, 0);
    report(4, c4.final_val_rel_l2() <= 1e-2,
           "line2d (400,80,50) MAF 20000 steps: rel L2 " + fmt(c4.final_val_rel_l2())
               + " (limit 1e-2)");

    {
        std::vector<double> m, t;
        int violated = 0;
        for (std::uint64_t s = 0; s < 3; ++s) {
            m.push_back(line_run(main_counts, maf, s).final_val_rel_l2());
            t.push_back(line_run(main_counts, tanh_only, s).final_val_rel_l2());
            violated += m.back() > t.back();
        }
        const double mm = median(m), mt = median(t);
        std::string detail = "median MAF " + fmt(mm) + ", median TanhOnly " + fmt(mt)
                             + ", ratio " + fmt(mm / mt) + ", MAF worse on "
                             + std::to_string(violated) + " of 3 seeds";
        if (mm > mt && violated < 3)
            detail += " (warning only)";
        report(5, mm <= mt || violated < 3, detail);
    }

    {
        const CollocationCounts triples[] = {{100, 40, 25, 0}, main_counts, {1600, 160, 100, 0}};
        std::vector<double> medians;
        std::string detail = "medians";
        for (const auto& n : triples) {
            std::vector<double> v;
            for (std::uint64_t s = 0; s < 3; ++s)
                v.push_back(line_run(n, maf, s).final_val_rel_l2());
            medians.push_back(median(v));
            detail += " " + std::to_string(n.interior) + ":" + fmt(medians.back());
        }
        const bool monotone = medians[1] < medians[0] && medians[2] < medians[1];
        report(6, monotone, detail + (monotone ? "" : " (not decreasing)"));
    }

    {
        const TrainRecord& r = run("fixed_circle_400_40_40_MultiActivation_seed0",
                                   desk("fixed_circle", {400, 40, 40, 100}, maf, 0));
        report(7, r.final_val_rel_l2() <= 5e-2,
               "fixed_circle (400,40,40) 20000 steps: space-time rel L2 "
                   + fmt(r.final_val_rel_l2()) + " (limit 5e-2)");
    }

    {
        const auto& rows = c4.rows;
        const double loss_drop = rows.front().total / rows.back().total;
        const double val_drop = rows.front().val_rel_l2 / rows.back().val_rel_l2;
        const long quarter = (3 * c4.config.steps) / 4;
        double vmin = rows.front().val_rel_l2, worst_rise = 0;
        for (const auto& row : rows) {
            if (row.step >= quarter && vmin > 0)
                worst_rise = std::max(worst_rise, row.val_rel_l2 / vmin);
            vmin = std::min(vmin, row.val_rel_l2);
        }
        const bool pass = loss_drop >= 100 && val_drop >= 10 && worst_rise <= 2;
        report(8, pass,
               "loss drop " + fmt(loss_drop) + "x (need 100), val drop " + fmt(val_drop)
                   + "x (need 10), worst final-quarter val / running min " + fmt(worst_rise)
                   + " (limit 2)");
    }

    {
        const TrainRecord again = train(c4.config);
        const bool same = metrics_text(again) == metrics_text(c4);
        report(9, same, std::string("repeat of criterion 4 config: metrics CSV ")
                            + (same ? "identical" : "differs"));
    }

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
