#pragma once

#include "ddpinn/network.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ddpinn {

/*!
 * Two-network parameter checkpoint.
 *
 * Binary layout, all integers and floats little-endian:
 *
 *   char[8]  magic "MAFCKPT1"
 *   u32      format version (1)
 *   u32      problem name length L, then L bytes of name
 *   u32      network count (2)
 *   per network:
 *     u32    d_in
 *     u32    hidden layer count H, then H x u32 widths
 *     u32    activation mode (0 MultiActivation, 1 TanhOnly)
 *     u32    gaussian bias flag
 *     f64    gauss_gamma
 *     f64    weight_rate
 *     f64    input_shift[d_in], then input_scale[d_in]
 *     u64    initialization seed
 *     u64    parameter count P, then P x f64 flat parameters
 */
struct Checkpoint
{
    std::string problem;
    NetworkParams net1;
    NetworkParams net2;
    std::uint64_t seed1 = 0;
    std::uint64_t seed2 = 0;
};

void write_checkpoint(const Checkpoint& ckpt, std::ostream& os);
Checkpoint read_checkpoint(std::istream& is);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
//! Throws ConfigError when the file is missing or malformed.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace ddpinn
