#include "ddpinn/checkpoint.hpp"
#include "ddpinn/config.hpp"
#include "ddpinn/export.hpp"
#include "ddpinn/sweep.hpp"

#include <doctest.h>

#include <cstring>
#include <sstream>

using namespace ddpinn;

namespace {

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

std::vector<std::string> fields(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');)
        out.push_back(f);
    return out;
}

Checkpoint trained_like(const std::string& problem_name)
{
    const ProblemSpec& p = find_problem(problem_name);
    TrainConfig c;
    c.problem = problem_name;
    c.hidden = {5, 4};
    Architecture a = make_architecture(c, p);
    return {problem_name, initialize(a, 10), initialize(a, 11), 10, 11};
}

}  // namespace

TEST_CASE("config text round trip")
{
    KeyValues kv = parse_key_values("problem=ellipse2d\n# note\nm_interior=123\nhidden=8,9\n"
                                    "mode=TanhOnly\nlr=0.0025\nw_bc2=3.5\nomega=frozen\n");
    TrainConfig c = train_config_from(kv);
    CHECK(kv.empty());
    CHECK(c.counts.interior == 123);
    CHECK(c.hidden == std::vector<int>{8, 9});
    CHECK(c.mode == ActivationMode::TanhOnly);
    const std::string text = config_to_text(c);
    KeyValues again = parse_key_values(text);
    CHECK(config_to_text(train_config_from(again)) == text);
}

TEST_CASE("malformed configs")
{
    KeyValues kv = parse_key_values("problem=line2d\nbogus=1\n");
    train_config_from(kv);
    CHECK_THROWS_AS(reject_unknown(kv), ConfigError);
    CHECK_THROWS_AS(parse_key_values("a=1\na=2\n"), ConfigError);
    CHECK_THROWS_AS(parse_key_values("no equals sign\n"), ConfigError);
    KeyValues bad = parse_key_values("problem=circle\n");
    CHECK_THROWS_AS(train_config_from(bad), ConfigError);
    KeyValues neg = parse_key_values("lr=abc\n");
    CHECK_THROWS_AS(train_config_from(neg), ConfigError);
}

TEST_CASE("numbers keep 17 significant digits")
{
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("checkpoint round trip is bit exact")
{
    Checkpoint c = trained_like("fixed_circle");
    std::stringstream buf;
    write_checkpoint(c, buf);
    const std::string bytes = buf.str();
    CHECK(bytes.compare(0, 8, "MAFCKPT1") == 0);
    Checkpoint r = read_checkpoint(buf);
    CHECK(r.problem == "fixed_circle");
    CHECK(r.seed1 == 10);
    CHECK(r.seed2 == 11);
    CHECK(std::memcmp(r.net1.theta().data(), c.net1.theta().data(), c.net1.size() * 8) == 0);
    CHECK(std::memcmp(r.net2.theta().data(), c.net2.theta().data(), c.net2.size() * 8) == 0);
    CHECK(r.net1.arch().input_shift == c.net1.arch().input_shift);
    CHECK(r.net1.arch().input_scale == c.net1.arch().input_scale);
    CHECK(r.net1.arch().gauss_bias == c.net1.arch().gauss_bias);

    std::stringstream again;
    write_checkpoint(r, again);
    CHECK(again.str() == bytes);

    std::stringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK_THROWS_AS(read_checkpoint(truncated), ConfigError);
    std::stringstream garbage("not a checkpoint at all");
    CHECK_THROWS_AS(read_checkpoint(garbage), ConfigError);
}

TEST_CASE("export grid rows and columns")
{
    const ProblemSpec& line = find_problem("line2d");
    ExactModel model(line);
    GridSpec g;
    g.resolution = 3;
    std::ostringstream os;
    const std::size_t n = export_grid(line, model, g, os);
    // the middle column x = 0 lies on the interface
    CHECK(n == 6);
    auto ls = lines(os.str());
    REQUIRE(ls.size() == 7);
    CHECK(ls[0] == "x,y,region,u_exact,u_nn,abs_err");
    for (std::size_t i = 1; i < ls.size(); ++i)
        CHECK(std::stod(fields(ls[i])[5]) <= 1e-12);

    const ProblemSpec& ell = find_problem("ellipsoid3d");
    ExactModel m3(ell);
    std::ostringstream os3;
    export_grid(ell, m3, GridSpec{11, std::nullopt, 0, 1, std::nullopt}, os3);
    CHECK(lines(os3.str())[0] == "x,y,region,u_exact,u_nn,abs_err");

    const ProblemSpec& fc = find_problem("fixed_circle");
    ExactModel mt(fc);
    std::ostringstream ost;
    export_grid(fc, mt, GridSpec{5, 0.5, 0, 1, std::nullopt}, ost);
    auto lt = lines(ost.str());
    CHECK(lt[0] == "x,y,t,region,u_exact,u_nn,abs_err");
    CHECK(std::stod(fields(lt[1])[2]) == 0.5);
}

TEST_CASE("export reproduces forward values from a checkpoint")
{
    Checkpoint c = trained_like("ellipse2d");
    std::stringstream buf;
    write_checkpoint(c, buf);
    Checkpoint r = read_checkpoint(buf);
    const ProblemSpec& p = find_problem("ellipse2d");
    check_compatible(r, p);
    NetworkModel model(p, r.net1, r.net2);
    std::ostringstream os;
    export_grid(p, model, GridSpec{9, std::nullopt, 0, 1, std::nullopt}, os);
    auto ls = lines(os.str());
    REQUIRE(ls.size() > 1);
    for (std::size_t i = 1; i < ls.size(); ++i) {
        auto f = fields(ls[i]);
        Vec x(2);
        x << std::stod(f[0]), std::stod(f[1]);
        const auto& net = f[2] == "omega1" ? c.net1 : c.net2;
        CHECK(std::stod(f[4]) == forward(net, x, 0, p.interface));
    }

    CHECK_THROWS_AS(check_compatible(r, find_problem("ellipsoid3d")), ConfigError);
}

TEST_CASE("sweep rows, medians and CSV")
{
    SweepConfig s;
    s.base.hidden = {4};
    s.base.steps = 0;
    s.triples = parse_triples("20:8:6,40:12:8,60:16:10");
    s.n_seeds = 3;
    std::vector<SweepRow> rows = run_sweep(s);
    int data = 0, medians = 0;
    for (const auto& r : rows) {
        data += !r.median;
        medians += r.median;
    }
    CHECK(data == 9);
    CHECK(medians == 3);

    std::ostringstream os;
    write_sweep_csv(rows, os);
    auto ls = lines(os.str());
    CHECK(ls[0] == "m_interior,m_boundary,m_interface,seed,mode,final_val_rel_l2,wall_clock_s");
    CHECK(ls.size() == 13);
    CHECK(fields(ls[4])[3] == "median");

    s.modes = {ActivationMode::MultiActivation, ActivationMode::TanhOnly};
    s.triples.resize(1);
    s.n_seeds = 1;
    rows = run_sweep(s);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].mode == ActivationMode::MultiActivation);
    CHECK(rows[2].mode == ActivationMode::TanhOnly);
}

TEST_CASE("a failing sweep row is recorded and the sweep continues")
{
    SweepConfig s;
    s.base.hidden = {4};
    s.base.steps = 0;
    s.triples = parse_triples("0:8:6,20:8:6");
    s.n_seeds = 1;
    std::vector<SweepRow> rows = run_sweep(s);
    REQUIRE(rows.size() == 4);
    CHECK(!rows[0].ok);
    CHECK(rows[2].ok);
    std::ostringstream os;
    write_sweep_csv(rows, os);
    CHECK(fields(lines(os.str())[1])[5] == "nan");
}

TEST_CASE("monotonicity warnings")
{
    std::vector<SweepRow> rows(2);
    rows[0].median = rows[1].median = true;
    rows[0].final_val_rel_l2 = 0.1;
    rows[1].final_val_rel_l2 = 0.2;
    CHECK(monotonicity_warnings(rows).size() == 1);
    rows[1].final_val_rel_l2 = 0.05;
    CHECK(monotonicity_warnings(rows).empty());
    CHECK(median({3, 1, 2}) == 2);
    CHECK(median({4, 1, 2, 3}) == 2.5);
}
