//! ddpinn: train, sweep, export and self-check front end.

#include "ddpinn/checkpoint.hpp"
#include "ddpinn/config.hpp"
#include "ddpinn/export.hpp"
#include "ddpinn/sampling.hpp"
#include "ddpinn/sweep.hpp"
#include "ddpinn/training.hpp"
#include "verify.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;
using namespace ddpinn;

namespace {

enum Exit { kOk = 0, kConfigError = 1, kNumericalError = 2, kCheckFailed = 3 };

//! Config file contents with `key=value` overrides applied on top.
KeyValues load_key_values(const std::string& path, const std::vector<std::string>& overrides)
{
    KeyValues kv = parse_key_values(read_text_file(path));
    for (const auto& o : overrides) {
        KeyValues one = parse_key_values(o);
        for (auto& [k, v] : one)
            kv[k] = v;
    }
    return kv;
}

//! Sweep keys are allowed in run configs so one file serves both.
void drop_sweep_keys(KeyValues& kv)
{
    for (const char* k : {"triples", "n_seeds", "modes", "sweep_dir"})
        kv.erase(k);
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream os(path);
    if (!os)
        throw ConfigError("cannot write '" + path.string() + "'");
    return os;
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides, bool quiet)
{
    KeyValues kv = load_key_values(config_path, overrides);
    drop_sweep_keys(kv);
    TrainConfig cfg = train_config_from(kv);
    reject_unknown(kv);

    const fs::path out(cfg.output_dir);
    fs::create_directories(out);
    TrainRecord rec = train(cfg, [&](const LogRow& row) {
        if (quiet)
            return;
        std::cerr << "step " << row.step << "  loss " << std::setprecision(6) << row.total
                  << "  val_rel_l2 " << row.val_rel_l2 << '\n';
    });

    auto metrics = open_out(out / "metrics.csv");
    write_metrics_csv(rec, metrics);
    auto summary = open_out(out / "summary.txt");
    write_summary(rec, summary);
    auto echo = open_out(out / "config.cfg");
    echo << config_to_text(cfg);
    Checkpoint ckpt{cfg.problem, rec.net1, rec.net2, derive_seed(cfg.init_seed, 1),
                    derive_seed(cfg.init_seed, 2)};
    save_checkpoint(ckpt, (out / "checkpoint.bin").string());

    std::cout << "final_val_rel_l2=" << std::setprecision(17) << rec.final_val_rel_l2() << '\n'
              << "wall_clock_s=" << rec.wall_clock_s << '\n'
              << "output_dir=" << out.string() << '\n';
    return kOk;
}

int cmd_sweep(const std::string& config_path, const std::vector<std::string>& overrides, bool quiet)
{
    KeyValues kv = load_key_values(config_path, overrides);
    SweepConfig sweep = sweep_config_from(kv);
    reject_unknown(kv);
    const fs::path out(*sweep.output_dir);
    fs::create_directories(out);

    std::vector<SweepRow> rows = run_sweep(sweep, [&](const SweepRow& r) {
        if (quiet)
            return;
        std::cerr << '(' << r.counts.interior << ',' << r.counts.boundary << ','
                  << r.counts.interface << ") " << mode_name(r.mode) << ' '
                  << (r.median ? std::string("median") : "seed " + std::to_string(r.seed)) << ": ";
        if (r.ok)
            std::cerr << std::setprecision(6) << r.final_val_rel_l2 << '\n';
        else
            std::cerr << "FAILED: " << r.error << '\n';
    });
    auto csv = open_out(out / "sweep.csv");
    write_sweep_csv(rows, csv);
    write_sweep_csv(rows, std::cout);
    for (const auto& w : monotonicity_warnings(rows))
        std::cerr << "warning: " << w << '\n';
    for (const auto& r : rows)
        if (!r.ok && !r.median)
            std::cerr << "warning: row failed: " << r.error << '\n';
    return kOk;
}

struct ExportOptions
{
    std::string checkpoint;
    std::string problem;
    int resolution = 101;
    std::optional<double> t;
    std::vector<int> axes{0, 1};
    std::vector<double> anchor;
    bool exact = false;
    std::string output;
};

int cmd_export(const ExportOptions& o)
{
    std::optional<Checkpoint> ckpt;
    std::string name = o.problem;
    if (!o.exact) {
        if (o.checkpoint.empty())
            throw ConfigError("export-grid needs --checkpoint (or --exact)");
        ckpt = load_checkpoint(o.checkpoint);
        if (name.empty())
            name = ckpt->problem;
    }
    if (name.empty())
        throw ConfigError("export-grid needs --problem");
    const ProblemSpec& problem = find_problem(name);
    if (ckpt)
        check_compatible(*ckpt, problem);
    if (o.axes.size() != 2)
        throw ConfigError("--axes takes exactly two axis indices");

    GridSpec grid;
    grid.resolution = o.resolution;
    grid.t = o.t;
    grid.axis_u = o.axes[0];
    grid.axis_v = o.axes[1];
    if (!o.anchor.empty())
        grid.anchor = Eigen::Map<const Vec>(o.anchor.data(), static_cast<Eigen::Index>(o.anchor.size()));

    std::unique_ptr<SolutionModel> model;
    if (ckpt)
        model = std::make_unique<NetworkModel>(problem, ckpt->net1, ckpt->net2);
    else
        model = std::make_unique<ExactModel>(problem);

    if (o.output.empty() || o.output == "-") {
        export_grid(problem, *model, grid, std::cout);
    } else {
        auto os = open_out(o.output);
        std::size_t rows = export_grid(problem, *model, grid, os);
        std::cerr << rows << " rows written to " << o.output << '\n';
    }
    return kOk;
}

int cmd_check(std::uint64_t seed)
{
    bool ok = true;
    for (const auto& r : verify::run_checks(seed)) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " ["
                  << std::setprecision(3) << r.seconds << " s]\n";
        ok = ok && r.pass;
    }
    return ok ? kOk : kCheckFailed;
}

int cmd_list()
{
    for (const auto& p : catalog())
        std::cout << std::left << std::setw(18) << p.name << p.description << '\n';
    return kOk;
}

int cmd_sample(const std::string& config_path, const std::vector<std::string>& overrides,
               const std::string& output)
{
    KeyValues kv = load_key_values(config_path, overrides);
    drop_sweep_keys(kv);
    TrainConfig cfg = train_config_from(kv);
    reject_unknown(kv);
    const ProblemSpec& problem = find_problem(cfg.problem);
    CollocationSet set = sample_collocation(problem, cfg.effective_counts(),
                                            cfg.effective_strategy(), cfg.sample_seed);
    if (output.empty() || output == "-") {
        write_csv(set, problem, std::cout);
    } else {
        auto os = open_out(output);
        write_csv(set, problem, os);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-network multi-activation PINN solver for interface problems"};
    app.require_subcommand(1);

    std::string config;
    std::vector<std::string> overrides;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "Train one configuration and write its artifacts");
    run->add_option("config", config, "key=value config file")->required();
    run->add_option("-s,--set", overrides, "Override a config key (key=value)");
    run->add_flag("-q,--quiet", quiet, "No progress output");

    auto* sweep = app.add_subcommand("sweep", "Train over count triples, seeds and modes");
    sweep->add_option("config", config, "key=value config file")->required();
    sweep->add_option("-s,--set", overrides, "Override a config key (key=value)");
    sweep->add_flag("-q,--quiet", quiet, "No progress output");

    ExportOptions ex;
    auto* exp = app.add_subcommand("export-grid", "Write u_exact, u_nn and abs_err on a grid");
    exp->add_option("-c,--checkpoint", ex.checkpoint, "Checkpoint written by run");
    exp->add_option("-p,--problem", ex.problem, "Problem name (defaults to the checkpoint's)");
    exp->add_option("-r,--resolution", ex.resolution, "Nodes per axis");
    exp->add_option("-t,--time", ex.t, "Time for parabolic problems (default: horizon)");
    exp->add_option("--axes", ex.axes, "Two axes spanning the slice")->delimiter(',');
    exp->add_option("--anchor", ex.anchor, "Point the slice passes through")->delimiter(',');
    exp->add_flag("--exact", ex.exact, "Evaluate the exact solution instead of a checkpoint");
    exp->add_option("-o,--output", ex.output, "Output CSV (default: stdout)");

    std::uint64_t check_seed = 0;
    auto* check = app.add_subcommand("check", "Run the derivative, geometry and manufactured-data suites");
    check->add_option("--seed", check_seed, "Random seed");

    auto* list = app.add_subcommand("list-problems", "List cataloged problems");

    std::string sample_out;
    auto* sample = app.add_subcommand("sample", "Write the collocation set of a config as CSV");
    sample->add_option("config", config, "key=value config file")->required();
    sample->add_option("-s,--set", overrides, "Override a config key (key=value)");
    sample->add_option("-o,--output", sample_out, "Output CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        if (run->parsed())
            return cmd_run(config, overrides, quiet);
        if (sweep->parsed())
            return cmd_sweep(config, overrides, quiet);
        if (exp->parsed())
            return cmd_export(ex);
        if (check->parsed())
            return cmd_check(check_seed);
        if (list->parsed())
            return cmd_list();
        if (sample->parsed())
            return cmd_sample(config, overrides, sample_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    }
    return kOk;
}
