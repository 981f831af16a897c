#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace ddpinn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowVec = Eigen::RowVectorXd;

//! Invalid or inconsistent run configuration (maps to CLI exit code 1).
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Non-finite values during evaluation or training (CLI exit code 2).
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ddpinn
