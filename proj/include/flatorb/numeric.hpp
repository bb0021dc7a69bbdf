#pragma once

#include "flatorb/exact.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace flatorb {

Eigen::MatrixXd to_eigen(const RatMatrix& m);
Eigen::VectorXd to_eigen(const RatVec& v);

/// Portable deterministic uniform numbers (independent of the standard library's distributions).
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    double uniform();                      // [0,1)
    double uniform(double lo, double hi);
    long integer(long lo, long hi);        // inclusive
    double normal();

private:
    std::uint64_t s_[4];
};

}  // namespace flatorb
