#include "ddpinn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace ddpinn {

namespace {

constexpr char kMagic[8] = {'M', 'A', 'F', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v)
{
    char b[8];
    for (int i = 0; i < 8; ++i)
        b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b, 8);
}

void put_u32(std::ostream& os, std::uint32_t v)
{
    char b[4];
    for (int i = 0; i < 4; ++i)
        b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(b, 4);
}

void put_f64(std::ostream& os, double v)
{
    put_u64(os, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64(std::istream& is)
{
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8))
        throw ConfigError("checkpoint truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
        v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

std::uint32_t get_u32(std::istream& is)
{
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4))
        throw ConfigError("checkpoint truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
        v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is)
{
    return std::bit_cast<double>(get_u64(is));
}

void put_network(std::ostream& os, const NetworkParams& p, std::uint64_t seed)
{
    const auto& a = p.arch();
    put_u32(os, static_cast<std::uint32_t>(a.d_in));
    put_u32(os, static_cast<std::uint32_t>(a.hidden.size()));
    for (int w : a.hidden)
        put_u32(os, static_cast<std::uint32_t>(w));
    put_u32(os, a.mode == ActivationMode::MultiActivation ? 0 : 1);
    put_u32(os, a.gauss_bias ? 1 : 0);
    put_f64(os, a.gauss_gamma);
    put_f64(os, a.weight_rate);
    for (Eigen::Index i = 0; i < a.d_in; ++i)
        put_f64(os, a.input_shift[i]);
    for (Eigen::Index i = 0; i < a.d_in; ++i)
        put_f64(os, a.input_scale[i]);
    put_u64(os, seed);
    put_u64(os, p.size());
    for (Eigen::Index i = 0; i < p.theta().size(); ++i)
        put_f64(os, p.theta()[i]);
}

NetworkParams get_network(std::istream& is, std::uint64_t& seed)
{
    Architecture a;
    a.d_in = static_cast<int>(get_u32(is));
    const std::uint32_t layers = get_u32(is);
    if (a.d_in < 1 || a.d_in > 4096 || layers < 1 || layers > 1024)
        throw ConfigError("checkpoint: implausible architecture header");
    a.hidden.resize(layers);
    for (auto& w : a.hidden) {
        w = static_cast<int>(get_u32(is));
        if (w < 1 || w > 1 << 20)
            throw ConfigError("checkpoint: implausible layer width");
    }
    const std::uint32_t mode = get_u32(is);
    if (mode > 1)
        throw ConfigError("checkpoint: unknown activation mode");
    a.mode = mode == 0 ? ActivationMode::MultiActivation : ActivationMode::TanhOnly;
    a.gauss_bias = get_u32(is) != 0;
    a.gauss_gamma = get_f64(is);
    a.weight_rate = get_f64(is);
    a.input_shift.resize(a.d_in);
    a.input_scale.resize(a.d_in);
    for (Eigen::Index i = 0; i < a.d_in; ++i)
        a.input_shift[i] = get_f64(is);
    for (Eigen::Index i = 0; i < a.d_in; ++i)
        a.input_scale[i] = get_f64(is);
    seed = get_u64(is);
    NetworkParams p;
    try {
        p = NetworkParams(a);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("checkpoint: ") + e.what());
    }
    const std::uint64_t n = get_u64(is);
    if (n != p.size())
        throw ConfigError("checkpoint: parameter count does not match the architecture");
    for (Eigen::Index i = 0; i < p.theta().size(); ++i)
        p.theta()[i] = get_f64(is);
    return p;
}

}  // namespace

void write_checkpoint(const Checkpoint& ckpt, std::ostream& os)
{
    os.write(kMagic, sizeof kMagic);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(ckpt.problem.size()));
    os.write(ckpt.problem.data(), static_cast<std::streamsize>(ckpt.problem.size()));
    put_u32(os, 2);
    put_network(os, ckpt.net1, ckpt.seed1);
    put_network(os, ckpt.net2, ckpt.seed2);
}

Checkpoint read_checkpoint(std::istream& is)
{
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
        throw ConfigError("not a checkpoint file (bad magic)");
    if (get_u32(is) != kVersion)
        throw ConfigError("unsupported checkpoint version");
    const std::uint32_t len = get_u32(is);
    if (len > 4096)
        throw ConfigError("checkpoint: implausible problem name length");
    Checkpoint c;
    c.problem.resize(len);
    if (!is.read(c.problem.data(), len))
        throw ConfigError("checkpoint truncated");
    if (get_u32(is) != 2)
        throw ConfigError("checkpoint must hold exactly two networks");
    c.net1 = get_network(is, c.seed1);
    c.net2 = get_network(is, c.seed2);
    return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw ConfigError("cannot write checkpoint '" + path + "'");
    write_checkpoint(ckpt, os);
    if (!os)
        throw ConfigError("failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ConfigError("cannot read checkpoint '" + path + "'");
    return read_checkpoint(is);
}

}  // namespace ddpinn
